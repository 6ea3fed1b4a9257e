#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "hypertrace/combinatorics.hpp"
#include "hypertrace/errors.hpp"
#include "hypertrace/rational.hpp"
#include "hypertrace/tensor.hpp"

// Verification-only reimplementation of the trace straight from its
// differential-operator definition. Deliberately shares no algorithmic code
// with the census machinery in trace.hpp: only the scalar and tensor types
// (and the IndexAssignment record) are common.

namespace hypertrace {

// Polynomial in the n^2 auxiliary matrix variables a_{ij}, exponent vectors
// mapped to rational coefficients. Zero coefficients are never stored.
class MultiPoly {
public:
    explicit MultiPoly(int n) : n_(n) {
        if (n < 1) throw std::invalid_argument("multipoly: n must be >= 1");
    }

    int dim() const { return n_; }
    size_t term_count() const { return terms_.size(); }
    const std::map<std::vector<int>, Rational>& terms() const { return terms_; }

    static size_t var(int i, int j, int n) {
        return static_cast<size_t>(i - 1) * n + (j - 1);
    }

    void add_term(const std::vector<int>& expo, const Rational& coeff) {
        if (expo.size() != static_cast<size_t>(n_) * n_)
            throw std::invalid_argument("multipoly: exponent vector size mismatch");
        if (coeff.is_zero()) return;
        auto [it, inserted] = terms_.emplace(expo, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    // partial derivative with respect to a_{ij}
    MultiPoly differentiated(int i, int j) const {
        if (i < 1 || i > n_ || j < 1 || j > n_)
            throw std::out_of_range("multipoly: variable out of range");
        size_t v = var(i, j, n_);
        MultiPoly out(n_);
        for (const auto& [expo, coeff] : terms_) {
            if (expo[v] == 0) continue;
            std::vector<int> reduced(expo);
            --reduced[v];
            out.add_term(reduced, coeff * Rational(expo[v]));
        }
        return out;
    }

    bool is_constant() const {
        for (const auto& [expo, coeff] : terms_)
            for (int e : expo)
                if (e != 0) return false;
        return true;
    }

    Rational constant_term() const {
        std::vector<int> zero(static_cast<size_t>(n_) * n_, 0);
        auto it = terms_.find(zero);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

private:
    int n_;
    std::map<std::vector<int>, Rational> terms_;
};

// tr(A^ell) as a polynomial in the a_{ij}: one monomial per rooted closed
// vertex sequence of length ell.
inline MultiPoly symbolic_trace_power(int n, long ell) {
    if (n < 1 || ell < 1) throw std::invalid_argument("symbolic trace power: n, ell must be >= 1");
    MultiPoly out(n);
    std::vector<int> seq(static_cast<size_t>(ell), 1);
    std::vector<int> expo(static_cast<size_t>(n) * n, 0);
    auto emit = [&] {
        std::fill(expo.begin(), expo.end(), 0);
        for (long t = 0; t < ell; ++t) {
            int from = seq[static_cast<size_t>(t)];
            int to = seq[static_cast<size_t>((t + 1) % ell)];
            ++expo[MultiPoly::var(from, to, n)];
        }
        out.add_term(expo, Rational(1));
    };
    while (true) {
        emit();
        long pos = ell - 1;
        while (pos >= 0 && seq[static_cast<size_t>(pos)] == n) seq[static_cast<size_t>(pos--)] = 1;
        if (pos < 0) break;
        ++seq[static_cast<size_t>(pos)];
    }
    return out;
}

// The operator d(F): differentiate once by a_{i_j s} for every component
// (i_j, alpha_j) of F and every s in alpha_j, applied literally.
inline MultiPoly apply_partial(const MultiPoly& p, const IndexAssignment& f) {
    MultiPoly out(p);
    for (const auto& [i, alpha] : f.components)
        for (int s : alpha) out = out.differentiated(i, s);
    return out;
}

// Number of operator terms the definition expands into, used for the
// refusal prediction: |F_d| = C(n+d-1, d) * n^{(m-1)d} plus the monomial
// budget of tr(A^{d(m-1)}).
inline Integer oracle_term_bound(int n, int m, long d) {
    Integer assignments = binomial(n + d - 1, d) * pow(Integer(n), static_cast<unsigned long>((m - 1) * d));
    return assignments + pow(Integer(n), static_cast<unsigned long>(d * (m - 1)));
}

// Tr_d straight from the differential-operator definition: expand the
// operator product over index assignments, apply each d(F) to the symbolic
// tr(A^{d(m-1)}), and take what is left at a = 0. Every surviving monomial
// is matched exactly, so the residual must be a constant.
inline Rational trace_d_oracle(const Tensor& t, long d,
                               const Integer& max_terms = Integer(10000000)) {
    if (d < 1) throw std::domain_error("trace oracle: order d must be >= 1");
    const int m = t.order();
    const int n = t.dim();

    Integer predicted = oracle_term_bound(n, m, d);
    if (predicted > max_terms)
        throw resource_limit_error("max-oracle-terms", max_terms.get_str(), predicted.get_str());

    MultiPoly power = symbolic_trace_power(n, d * (m - 1));

    // nonzero entries grouped by primary index, as (tail, value) lists
    std::vector<std::vector<std::pair<MultiIndex, Rational>>> at(static_cast<size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) at[i] = t.entries_at(i);

    Rational total(0);

    // enumerate compositions d_1 + ... + d_n = d, i.e. the primary index
    // multiset 1^{d_1} ... n^{d_n}
    auto per_composition = [&](const std::vector<long>& counts) {
        Integer c_f(1);
        for (long di : counts) c_f *= factorial(di * (m - 1));

        IndexAssignment f;
        for (int i = 1; i <= n; ++i)
            for (long rep = 0; rep < counts[static_cast<size_t>(i - 1)]; ++rep)
                f.components.push_back({i, {}});

        Rational grouped(0);
        auto rec = [&](auto&& self, size_t pos, const Rational& partial) -> void {
            if (pos == f.components.size()) {
                MultiPoly applied = apply_partial(power, f);
                if (!applied.is_constant())
                    throw std::logic_error("internal: oracle residual is not constant");
                grouped += partial * applied.constant_term();
                return;
            }
            int i = f.components[pos].first;
            for (const auto& [tail, value] : at[i]) {
                f.components[pos].second = tail;
                self(self, pos + 1, partial * value);
            }
        };
        rec(rec, 0, Rational(1));
        total += grouped / Rational(c_f);
    };
    for_each_composition(d, n, per_composition);

    return Rational(pow(Integer(m - 1), static_cast<unsigned long>(n - 1))) * total;
}

// tr(A^d) by exact repeated matrix multiplication; the matrix special case
// every trace implementation must reproduce.
inline Rational matrix_power_trace(const Tensor& a, long d) {
    if (a.order() != 2) throw std::invalid_argument("matrix power trace: tensor order must be 2");
    if (d < 1) throw std::domain_error("matrix power trace: d must be >= 1");
    const int n = a.dim();
    std::vector<std::vector<Rational>> base(static_cast<size_t>(n), std::vector<Rational>(static_cast<size_t>(n), Rational(0)));
    for (const auto& [idx, v] : a.nonzeros()) base[idx[0] - 1][idx[1] - 1] = v;

    std::vector<std::vector<Rational>> acc(base);
    for (long step = 1; step < d; ++step) {
        std::vector<std::vector<Rational>> next(static_cast<size_t>(n), std::vector<Rational>(static_cast<size_t>(n), Rational(0)));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                if (acc[i][k].is_zero()) continue;
                for (int j = 0; j < n; ++j) next[i][j] += acc[i][k] * base[k][j];
            }
        acc = std::move(next);
    }
    Rational tr(0);
    for (int i = 0; i < n; ++i) tr += acc[i][i];
    return tr;
}

} // namespace hypertrace
