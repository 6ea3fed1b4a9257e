#pragma once

#include <atomic>
#include <map>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hypertrace/combinatorics.hpp"
#include "hypertrace/errors.hpp"
#include "hypertrace/rational.hpp"
#include "hypertrace/tensor.hpp"

namespace hypertrace {

struct TraceOptions {
    int threads = 1;
    // refuse before enumerating when the census size bound exceeds this;
    // the bound ignores the column constraints, so it overshoots the real
    // census badly as n grows
    Integer max_census = Integer(10000000);
};

// One census entry of the trace expansion, as dumped by the CLI.
struct TraceTerm {
    ArcMultiset arcs;
    Integer b;
    Integer c;
    Integer walks;
    Rational pi;
    Rational value; // (b/c) * pi * walks
};

namespace detail {

// Per-primary-index view of the nonzero entries: tail target counts plus the
// entry value, ready for multiset bookkeeping against census rows.
struct VertexEntries {
    // (counts over [n] of the tail components, value)
    std::vector<std::pair<std::vector<int>, Rational>> entries;
    // which target vertices appear in any nonzero tail
    std::vector<bool> targets;
};

inline std::vector<VertexEntries> index_tensor(const Tensor& t) {
    const int n = t.dim();
    std::vector<VertexEntries> by_vertex(static_cast<size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) {
        VertexEntries& ve = by_vertex[i];
        ve.targets.assign(static_cast<size_t>(n) + 1, false);
        for (const auto& [tail, value] : t.entries_at(i)) {
            std::vector<int> counts(static_cast<size_t>(n) + 1, 0);
            for (int v : tail) {
                ++counts[v];
                ve.targets[v] = true;
            }
            ve.entries.emplace_back(std::move(counts), value);
        }
    }
    return by_vertex;
}

// Sum over ordered splittings of the vertex's out-arc multiset into `count`
// (m-1)-tuples of the product of tensor entries, the per-vertex factor of
// pi_E. Memoized on the residual multiset.
inline Rational vertex_split_sum(const VertexEntries& ve, std::vector<int>& residual, int count,
                                 std::map<std::vector<int>, Rational>& memo) {
    if (count == 0) return Rational(1);
    auto it = memo.find(residual);
    if (it != memo.end()) return it->second;
    Rational acc(0);
    for (const auto& [counts, value] : ve.entries) {
        bool fits = true;
        for (size_t v = 1; v < counts.size() && fits; ++v)
            if (counts[v] > residual[v]) fits = false;
        if (!fits) continue;
        for (size_t v = 1; v < counts.size(); ++v) residual[v] -= counts[v];
        acc += value * vertex_split_sum(ve, residual, count - 1, memo);
        for (size_t v = 1; v < counts.size(); ++v) residual[v] += counts[v];
    }
    memo.emplace(residual, acc);
    return acc;
}

inline Rational pi_E_indexed(const std::vector<VertexEntries>& by_vertex, const ArcMultiset& e,
                             int order) {
    const int n = e.n();
    Rational prod(1);
    for (int i = 1; i <= n; ++i) {
        long outdeg = e.outdegree(i);
        if (outdeg == 0) continue;
        int count = static_cast<int>(outdeg / (order - 1));
        std::vector<int> residual(static_cast<size_t>(n) + 1, 0);
        for (int j = 1; j <= n; ++j) residual[j] = static_cast<int>(e.mult(i, j));
        std::map<std::vector<int>, Rational> memo;
        Rational factor = vertex_split_sum(by_vertex[i], residual, count, memo);
        if (factor.is_zero()) return Rational(0);
        prod *= factor;
    }
    return prod;
}

// Cheap reject: some arc of E has no supporting nonzero entry pattern.
inline bool obviously_zero(const std::vector<VertexEntries>& by_vertex, const ArcMultiset& e) {
    for (const auto& [arc, mult] : e.arcs()) {
        const VertexEntries& ve = by_vertex[arc.first];
        if (ve.entries.empty()) return true;
        if (!ve.targets[arc.second]) return true;
    }
    return false;
}

// Sum of entries at primary index i whose tail multiset is exactly
// {v^c : (v,c) in want} with every remaining slot equal to i.
inline Rational tail_multiset_sum(const std::vector<VertexEntries>& by_vertex, int n, int m, int i,
                                  const std::vector<std::pair<int, long>>& want) {
    std::vector<int> target(static_cast<size_t>(n) + 1, 0);
    long placed = 0;
    for (const auto& [v, c] : want) {
        target[v] += static_cast<int>(c);
        placed += c;
    }
    if (placed > m - 1) return Rational(0);
    target[i] += static_cast<int>((m - 1) - placed);
    Rational acc(0);
    for (const auto& [counts, value] : by_vertex[i].entries) {
        bool match = true;
        for (int v = 1; v <= n && match; ++v)
            if (counts[v] != target[v]) match = false;
        if (match) acc += value;
    }
    return acc;
}

} // namespace detail

// pi_E: the grouped sum over all index assignments F with E(F) = E of the
// entry products pi_F, computed by per-vertex factorization.
inline Rational pi_E(const Tensor& t, const ArcMultiset& e, long d) {
    const int m = t.order();
    if (e.n() != t.dim()) throw std::invalid_argument("pi_E: vertex count does not match tensor dim");
    if (e.size() != d * (m - 1)) throw std::invalid_argument("pi_E: |E| != d(m-1)");
    if (!e.balanced()) throw std::invalid_argument("pi_E: arc multiset not balanced");
    for (int v = 1; v <= e.n(); ++v)
        if (e.outdegree(v) % (m - 1) != 0)
            throw std::invalid_argument("pi_E: outdegree not a multiple of m-1");
    auto by_vertex = detail::index_tensor(t);
    return detail::pi_E_indexed(by_vertex, e, m);
}

namespace detail {

inline void check_census_cap(int n, long d, long r, const Integer& cap) {
    Integer predicted = census_size_bound(n, d, r);
    if (predicted > cap)
        throw resource_limit_error("max-census", cap.get_str(), predicted.get_str());
}

template <typename Fn>
inline void transform_indexed(size_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count < 2) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    int spawn = std::min<int>(threads, static_cast<int>(count));
    pool.reserve(static_cast<size_t>(spawn));
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace detail

// Tr_d via the census-grouped expansion: (m-1)^{n-1} times the sum over
// balanced arc multisets E (|E| = d(m-1), outdegrees multiples of m-1) of
// (b(E)/c(E)) * pi_E(T) * |W(E)|. Census entries may be evaluated
// concurrently; the reduction always runs in canonical census order.
inline Rational trace_d(const Tensor& t, long d, const TraceOptions& opt = {}) {
    if (d < 1) throw std::domain_error("trace: order d must be >= 1");
    const int m = t.order();
    const int n = t.dim();
    detail::check_census_cap(n, d, m - 1, opt.max_census);

    std::vector<ArcMultiset> census = census_balanced(n, d, m - 1);
    auto by_vertex = detail::index_tensor(t);

    std::vector<Rational> terms(census.size(), Rational(0));
    detail::transform_indexed(census.size(), opt.threads, [&](size_t i) {
        const ArcMultiset& e = census[i];
        if (detail::obviously_zero(by_vertex, e)) return;
        Rational pi = detail::pi_E_indexed(by_vertex, e, m);
        if (pi.is_zero()) return;
        Integer walks = count_closed_walks(e);
        if (walks == 0) return;
        terms[i] = Rational(weight_b(e), weight_c(e)) * pi * Rational(walks);
    });

    Rational sum(0);
    for (const Rational& term : terms) sum += term;
    return Rational(pow(Integer(m - 1), static_cast<unsigned long>(n - 1))) * sum;
}

// Same expansion but materializing every census term (no sparsity
// shortcuts); feeds --dump-terms and the term-by-term comparisons.
inline std::vector<TraceTerm> trace_terms(const Tensor& t, long d, const TraceOptions& opt = {}) {
    if (d < 1) throw std::domain_error("trace: order d must be >= 1");
    const int m = t.order();
    const int n = t.dim();
    detail::check_census_cap(n, d, m - 1, opt.max_census);

    std::vector<ArcMultiset> census = census_balanced(n, d, m - 1);
    auto by_vertex = detail::index_tensor(t);

    std::vector<TraceTerm> terms;
    terms.reserve(census.size());
    for (ArcMultiset& e : census)
        terms.push_back(TraceTerm{std::move(e), Integer(0), Integer(0), Integer(0), Rational(0), Rational(0)});
    detail::transform_indexed(terms.size(), opt.threads, [&](size_t i) {
        TraceTerm& term = terms[i];
        term.b = weight_b(term.arcs);
        term.c = weight_c(term.arcs);
        term.walks = count_closed_walks(term.arcs);
        term.pi = detail::pi_E_indexed(by_vertex, term.arcs, m);
        term.value = Rational(term.b, term.c) * term.pi * Rational(term.walks);
    });
    return terms;
}

inline Rational trace_from_terms(const Tensor& t, const std::vector<TraceTerm>& terms) {
    Rational sum(0);
    for (const TraceTerm& term : terms) sum += term.value;
    return Rational(pow(Integer(t.order() - 1), static_cast<unsigned long>(t.dim() - 1))) * sum;
}

// Tr_2 closed form: diagonal squares plus the two-vertex exchange terms
// weighted 2s/(m-1).
inline Rational trace_2_closed(const Tensor& t) {
    const int m = t.order();
    const int n = t.dim();
    auto by_vertex = detail::index_tensor(t);

    Rational diag(0);
    for (int i = 1; i <= n; ++i) {
        Rational tii = t.entry(i, MultiIndex(static_cast<size_t>(m - 1), i));
        diag += tii * tii;
    }

    Rational cross(0);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (long s = 1; s <= m - 1; ++s) {
                Rational left = detail::tail_multiset_sum(by_vertex, n, m, i, {{j, s}});
                if (left.is_zero()) continue;
                Rational right = detail::tail_multiset_sum(by_vertex, n, m, j, {{i, s}});
                if (right.is_zero()) continue;
                cross += Rational(2 * s, m - 1) * left * right;
            }

    return Rational(pow(Integer(m - 1), static_cast<unsigned long>(n - 1))) * (diag + cross);
}

// Tr_3 closed form: diagonal cubes, the two-vertex terms with coefficient
// 3s/(2(m-1)), and the three-vertex terms driven by the walk table w.
inline Rational trace_3_closed(const Tensor& t) {
    const int m = t.order();
    const int n = t.dim();
    const long mm = m - 1;
    auto by_vertex = detail::index_tensor(t);

    auto tail_sum = [&](int i, const std::vector<std::pair<int, long>>& want) {
        return detail::tail_multiset_sum(by_vertex, n, m, i, want);
    };

    // sum over ordered pairs of tails at primary i with combined multiset
    // j^s i^{2(m-1)-s}
    auto pair_sum = [&](int i, int j, long s) {
        Rational acc(0);
        for (const auto& [counts, value] : by_vertex[i].entries) {
            long cj = counts[j];
            if (cj > s) continue;
            bool clean = true;
            for (int v = 1; v <= n && clean; ++v)
                if (v != i && v != j && counts[v] != 0) clean = false;
            if (!clean) continue;
            acc += value * tail_sum(i, {{j, s - cj}});
        }
        return acc;
    };

    Rational total(0);

    for (int i = 1; i <= n; ++i) {
        Rational tii = t.entry(i, MultiIndex(static_cast<size_t>(m - 1), i));
        total += tii * tii * tii;
    }

    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            for (long s = 1; s <= mm; ++s) {
                Rational right = tail_sum(j, {{i, s}});
                if (right.is_zero()) continue;
                Rational left = pair_sum(i, j, s);
                if (left.is_zero()) continue;
                total += Rational(3 * s, 2 * mm) * left * right;
            }
        }

    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int k = j + 1; k <= n; ++k)
                for (long p = 0; p <= mm; ++p)
                    for (long q = 0; q <= mm; ++q)
                        for (long r = 0; r <= mm; ++r)
                            for (long s = 0; s <= mm; ++s) {
                                long ik = r + s - p, kj = q + s - p;
                                long ii = mm - s - r, jj = mm - s - q, kk = mm + p - r - s - q;
                                if (ik < 0 || kj < 0 || ii < 0 || jj < 0 || kk < 0) continue;
                                Integer w = walk_count_table_w(m, p, q, r, s);
                                if (w == 0) continue;
                                Rational ti = tail_sum(i, {{j, p}, {k, ik}});
                                if (ti.is_zero()) continue;
                                Rational tj = tail_sum(j, {{i, s}, {k, q}});
                                if (tj.is_zero()) continue;
                                Rational tk = tail_sum(k, {{i, r}, {j, kj}});
                                if (tk.is_zero()) continue;
                                Integer denom = multinomial(mm, {s, r, ii}) *
                                                multinomial(mm, {p, kj, jj}) *
                                                multinomial(mm, {q, ik, kk});
                                total += Rational(w, denom) * ti * tj * tk;
                            }

    return Rational(pow(Integer(m - 1), static_cast<unsigned long>(n - 1))) * total;
}

// Direct evaluation of the ungrouped assignment sum: enumerate index
// assignments F with nondecreasing primaries, weight each by
// (b(E(F))/c(E(F))) |W(E(F))|. Exponentially slower than trace_d; used to
// pin the grouped expansion and the m-valence filter on tiny instances.
// With restrict_m_valent the sum runs over m-valent F only, which must not
// change the value: a walkable assignment is always m-valent, and this
// routine asserts exactly that.
inline Rational trace_d_via_assignments(const Tensor& t, long d, bool restrict_m_valent = false) {
    if (d < 1) throw std::domain_error("trace: order d must be >= 1");
    const int m = t.order();
    const int n = t.dim();

    Rational sum(0);
    IndexAssignment f;
    f.components.resize(static_cast<size_t>(d));
    auto rec = [&](auto&& self, long pos, int min_primary, const Rational& partial) -> void {
        if (pos == d) {
            if (restrict_m_valent && !m_valent(f, m)) return;
            ArcMultiset e = arc_multiset_of(f, n);
            Integer walks = count_closed_walks(e);
            if (walks == 0) return;
            if (!m_valent(f, m))
                throw std::logic_error("internal: walkable assignment is not m-valent");
            sum += Rational(weight_b(e), weight_c(e)) * partial * Rational(walks);
            return;
        }
        for (int i = min_primary; i <= n; ++i) {
            for (const auto& [tail, value] : t.entries_at(i)) {
                f.components[pos] = {i, tail};
                self(self, pos + 1, i, partial * value);
            }
        }
    };
    rec(rec, 0, 1, Rational(1));
    return Rational(pow(Integer(m - 1), static_cast<unsigned long>(n - 1))) * sum;
}

} // namespace hypertrace
