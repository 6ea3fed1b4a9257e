#pragma once

#include <cstddef>
#include <vector>

#include "hypertrace/rational.hpp"

namespace hypertrace {

// Dense univariate polynomial, coefficient index = power of the variable.
// Trailing zero coefficients are trimmed, so the leading coefficient is
// nonzero unless the polynomial is identically zero.
template <typename T>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Polynomial constant(const T& v) { return Polynomial(std::vector<T>{v}); }

    // x - root
    static Polynomial linear_root(const T& root) {
        return Polynomial(std::vector<T>{-root, T(1)});
    }

    bool is_zero() const { return c_.empty(); }
    // degree of the zero polynomial is -1
    long degree() const { return static_cast<long>(c_.size()) - 1; }

    T operator[](std::size_t power) const {
        return power < c_.size() ? c_[power] : T(0);
    }

    const std::vector<T>& coefficients() const { return c_; }

    bool is_monic() const { return !c_.empty() && c_.back() == T(1); }

    T eval(const T& x) const {
        T acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    T coefficient_sum() const {
        T acc(0);
        for (const T& v : c_) acc += v;
        return acc;
    }

    Polynomial& operator+=(const Polynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { a += b; return a; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { a -= b; return a; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<T> out(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                out[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(out));
    }

    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    friend Polynomial operator*(const T& s, const Polynomial& p) {
        std::vector<T> out = p.c_;
        for (T& v : out) v *= s;
        return Polynomial(std::move(out));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return a.c_ != b.c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
    }

    std::vector<T> c_;
};

using UniPoly = Polynomial<Rational>;

} // namespace hypertrace
