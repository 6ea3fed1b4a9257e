#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hypertrace {

// Arbitrary-precision integer. All counts, weights and factorials use this
// type; nothing in the math core ever goes through floating point.
using Integer = mpz_class;

// Exact rational scalar, kept in lowest terms with positive denominator at
// all times. Thin wrapper over GMP's mpq_class that pins down construction,
// parsing and the "p/q" text format (q omitted when 1).
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long v) : v_(v) {}
    Rational(int v) : v_(static_cast<long>(v)) {}
    Rational(const Integer& v) : v_(v) {}

    Rational(const Integer& num, const Integer& den) {
        if (den == 0) throw std::domain_error("rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}

    // Strict "[-]digits[/digits]" parse; rejects anything else.
    static Rational parse(std::string_view text) {
        size_t pos = 0;
        if (pos < text.size() && text[pos] == '-') ++pos;
        size_t num_start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == num_start) throw std::invalid_argument("rational: malformed text '" + std::string(text) + "'");
        Integer num(std::string(text.substr(0, pos)));
        Integer den(1);
        if (pos < text.size()) {
            if (text[pos] != '/') throw std::invalid_argument("rational: malformed text '" + std::string(text) + "'");
            ++pos;
            size_t den_start = pos;
            while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
            if (pos == den_start || pos != text.size())
                throw std::invalid_argument("rational: malformed text '" + std::string(text) + "'");
            den = Integer(std::string(text.substr(den_start)));
            if (den == 0) throw std::invalid_argument("rational: zero denominator in '" + std::string(text) + "'");
        }
        return Rational(num, den);
    }

    // "p/q" with q omitted when q == 1.
    std::string str() const { return v_.get_str(); }

    Integer numerator() const { return v_.get_num(); }
    Integer denominator() const { return v_.get_den(); }
    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_), canonical_tag{}); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.v_ == 0) throw std::domain_error("rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    struct canonical_tag {};
    Rational(mpq_class v, canonical_tag) : v_(std::move(v)) {}
    mpq_class v_; // invariant: canonical (lowest terms, positive denominator)
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

// r^e for e >= 0 (r^0 == 1, including 0^0).
inline Rational pow(const Rational& r, unsigned long e) {
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), r.numerator().get_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), r.denominator().get_mpz_t(), e);
    return Rational(num, den);
}

inline Integer pow(const Integer& b, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Integer factorial(long k) {
    if (k < 0) throw std::invalid_argument("factorial: negative argument");
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

// Binomial with the out-of-range convention C(n,k) = 0 for k < 0 or k > n.
inline Integer binomial(long n, long k) {
    if (n < 0) throw std::invalid_argument("binomial: negative n");
    if (k < 0 || k > n) return Integer(0);
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

// total! / prod(parts_i!); parts must be nonnegative and sum to total.
inline Integer multinomial(long total, const std::vector<long>& parts) {
    long sum = 0;
    for (long p : parts) {
        if (p < 0) throw std::invalid_argument("multinomial: negative part");
        sum += p;
    }
    if (sum != total) throw std::invalid_argument("multinomial: parts do not sum to total");
    Integer r = factorial(total);
    for (long p : parts) r /= factorial(p);
    return r;
}

} // namespace hypertrace
