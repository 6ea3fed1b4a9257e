#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hypertrace/errors.hpp"
#include "hypertrace/polynomial.hpp"
#include "hypertrace/rational.hpp"
#include "hypertrace/tensor.hpp"
#include "hypertrace/trace.hpp"

namespace hypertrace {

// Schur function P_d(t_1,...,t_d): sum over ordered compositions of d into
// positive parts of t_{c_1}...t_{c_k} / k!, with P_0 = 1.
inline Rational schur_P(long d, std::span<const Rational> t) {
    if (d < 0) throw std::invalid_argument("schur: d must be >= 0");
    if (static_cast<long>(t.size()) < d)
        throw std::invalid_argument("schur: need at least d power-sum values");
    if (d == 0) return Rational(1);
    Rational total(0);
    std::vector<long> parts;
    auto rec = [&](auto&& self, long remaining, const Rational& prod) -> void {
        if (remaining == 0) {
            total += prod / Rational(factorial(static_cast<long>(parts.size())));
            return;
        }
        for (long c = 1; c <= remaining; ++c) {
            parts.push_back(c);
            self(self, remaining - c, prod * t[static_cast<size_t>(c - 1)]);
            parts.pop_back();
        }
    };
    rec(rec, d, Rational(1));
    return total;
}

// Characteristic-polynomial coefficients a_0..a_upto from the traces:
// a_k = P_k(-Tr_1/1, ..., -Tr_k/k).
inline std::vector<Rational> charpoly_coeffs(const Tensor& t, long upto,
                                             const TraceOptions& opt = {},
                                             long max_upto = 64) {
    if (upto < 0) throw std::invalid_argument("charpoly: upto must be >= 0");
    if (upto > max_upto)
        throw resource_limit_error("max-charpoly-upto", std::to_string(max_upto), std::to_string(upto));
    std::vector<Rational> targs; // -Tr_k / k
    targs.reserve(static_cast<size_t>(upto));
    for (long k = 1; k <= upto; ++k)
        targs.push_back(-trace_d(t, k, opt) / Rational(k));
    std::vector<Rational> coeffs;
    coeffs.reserve(static_cast<size_t>(upto) + 1);
    coeffs.emplace_back(1);
    for (long k = 1; k <= upto; ++k)
        coeffs.push_back(schur_P(k, std::span<const Rational>(targs.data(), static_cast<size_t>(k))));
    return coeffs;
}

// Degree of the characteristic polynomial, n(m-1)^{n-1}.
inline Integer charpoly_degree(const Tensor& t) {
    return Integer(t.dim()) * pow(Integer(t.order() - 1), static_cast<unsigned long>(t.dim() - 1));
}

// Full characteristic polynomial, phi(z) = sum a_k z^{D-k}; feasible only
// when the degree is tiny.
inline UniPoly full_charpoly(const Tensor& t, const TraceOptions& opt = {}, long max_upto = 64) {
    Integer degree = charpoly_degree(t);
    if (degree > max_upto)
        throw resource_limit_error("max-charpoly-upto", std::to_string(max_upto), degree.get_str());
    long d = static_cast<long>(degree.get_si());
    std::vector<Rational> a = charpoly_coeffs(t, d, opt, max_upto);
    std::vector<Rational> by_power(static_cast<size_t>(d) + 1, Rational(0));
    for (long k = 0; k <= d; ++k) by_power[static_cast<size_t>(d - k)] = a[static_cast<size_t>(k)];
    return UniPoly(std::move(by_power));
}

// Newton's identities: recover the root power sums from a monic polynomial's
// coefficients and compare against the supplied traces, without computing
// any roots.
inline bool power_sum_check(const UniPoly& poly, const std::vector<Rational>& traces) {
    if (!poly.is_monic()) throw std::invalid_argument("power sum check: polynomial must be monic");
    const long deg = poly.degree();
    // a_i = coefficient of z^{deg-i}
    auto a = [&](long i) { return poly[static_cast<size_t>(deg - i)]; };
    std::vector<Rational> p; // p[k-1] = power sum of order k
    for (long k = 1; k <= static_cast<long>(traces.size()); ++k) {
        Rational acc(0);
        for (long i = 1; i < k && i <= deg; ++i) acc += a(i) * p[static_cast<size_t>(k - i - 1)];
        if (k <= deg) acc += Rational(k) * a(k);
        p.push_back(-acc);
        if (p.back() != traces[static_cast<size_t>(k - 1)]) return false;
    }
    return true;
}

// Bounded k-symmetry verdict: collect the orders d <= bound with k not
// dividing d but Tr_d != 0. Complete only when the bound reaches the full
// characteristic-polynomial degree n(k-1)^{n-1}.
struct SymmetryReport {
    int k = 0;
    long bound = 0;
    bool refuted = false;
    std::vector<std::pair<long, Rational>> witnesses;
    bool complete = false;
    std::vector<Rational> traces; // Tr_1 .. Tr_bound

    std::string verdict() const { return refuted ? "refuted" : "consistent-with-k-symmetric"; }
};

inline SymmetryReport symmetry_report(const Hypergraph& h, long bound, const TraceOptions& opt = {}) {
    if (bound < 1) throw std::invalid_argument("symmetry: bound must be >= 1");
    SymmetryReport report;
    report.k = h.k();
    report.bound = bound;
    Tensor a = adjacency_tensor(h);
    for (long d = 1; d <= bound; ++d) {
        Rational tr = trace_d(a, d, opt);
        report.traces.push_back(tr);
        if (d % h.k() != 0 && !tr.is_zero()) report.witnesses.emplace_back(d, tr);
    }
    report.refuted = !report.witnesses.empty();
    Integer full = Integer(h.n()) * pow(Integer(h.k() - 1), static_cast<unsigned long>(h.n() - 1));
    report.complete = Integer(bound) >= full;
    return report;
}

// Exhaustive search for a bipartition V_1, V_2 with every edge meeting V_1
// in exactly p vertices. Returns the first witness in mask order, if any.
inline std::optional<std::pair<std::vector<int>, std::vector<int>>>
is_p_hm_bipartite(const Hypergraph& h, int p, int max_n = 20) {
    if (p < 1 || p > h.k() - 1) throw std::invalid_argument("p-hm: need 1 <= p <= k-1");
    if (!h.nontrivial()) throw std::invalid_argument("p-hm: hypergraph has no edges");
    if (h.n() > max_n)
        throw resource_limit_error("max-phm-n", std::to_string(max_n), std::to_string(h.n()));
    const int n = h.n();
    for (unsigned long mask = 1; mask + 1 < (1ul << n); ++mask) {
        bool ok = true;
        for (const auto& edge : h.edges()) {
            int hits = 0;
            for (int v : edge)
                if (mask & (1ul << (v - 1))) ++hits;
            if (hits != p) {
                ok = false;
                break;
            }
        }
        if (ok) {
            std::vector<int> v1, v2;
            for (int v = 1; v <= n; ++v)
                (mask & (1ul << (v - 1)) ? v1 : v2).push_back(v);
            return std::make_pair(std::move(v1), std::move(v2));
        }
    }
    return std::nullopt;
}

// Tr_k of the Laplacian and the signless Laplacian, plus the strictness
// verdict: for odd k >= 3 the two must differ.
struct LaplacianComparison {
    Rational trace_laplacian;
    Rational trace_signless;
    bool strictly_unequal = false;
};

inline LaplacianComparison laplacian_separation(const Hypergraph& h, const TraceOptions& opt = {}) {
    if (!h.nontrivial()) throw std::invalid_argument("laplacian separation: hypergraph has no edges");
    LaplacianComparison out;
    out.trace_laplacian = trace_d(laplacian(h), h.k(), opt);
    out.trace_signless = trace_d(signless_laplacian(h), h.k(), opt);
    out.strictly_unequal = out.trace_laplacian != out.trace_signless;
    return out;
}

} // namespace hypertrace
