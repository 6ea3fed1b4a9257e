#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hypertrace/rational.hpp"

namespace hypertrace {

// ---------------------------------------------------------------------------
// Compositions
// ---------------------------------------------------------------------------

// Visit every n-tuple of nonnegative integers summing to d, in lexicographic
// order: (0,...,0,d) first, (d,0,...,0) last.
inline void for_each_composition(long d, int n,
                                 const std::function<void(const std::vector<long>&)>& visit) {
    if (d < 0 || n < 1) throw std::invalid_argument("compositions: d >= 0 and n >= 1 required");
    std::vector<long> parts(static_cast<size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, long remaining) -> void {
        if (pos == n - 1) {
            parts[pos] = remaining;
            visit(parts);
            return;
        }
        for (long v = 0; v <= remaining; ++v) {
            parts[pos] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    rec(rec, 0, d);
}

inline std::vector<std::vector<long>> compositions(long d, int n) {
    std::vector<std::vector<long>> out;
    for_each_composition(d, n, [&](const std::vector<long>& c) { out.push_back(c); });
    return out;
}

// ---------------------------------------------------------------------------
// Arc multi-sets
// ---------------------------------------------------------------------------

// Multi-set of arcs over [n] x [n], stored as a dense n x n multiplicity
// matrix. Loops allowed. This is the digraph-side object every walk count
// and weight is computed from.
class ArcMultiset {
public:
    explicit ArcMultiset(int n) : n_(n), mult_(static_cast<size_t>(n) * n, 0) {
        if (n < 1) throw std::invalid_argument("arc multiset: n must be >= 1");
    }

    int n() const { return n_; }

    long mult(int i, int j) const { return mult_[idx(i, j)]; }

    void add(int i, int j, long count = 1) {
        if (count < 0) throw std::invalid_argument("arc multiset: negative multiplicity");
        mult_[idx(i, j)] += count;
    }

    long size() const { return std::accumulate(mult_.begin(), mult_.end(), 0L); }
    bool empty() const { return size() == 0; }

    long outdegree(int i) const {
        long d = 0;
        for (int j = 1; j <= n_; ++j) d += mult(i, j);
        return d;
    }

    long indegree(int j) const {
        long d = 0;
        for (int i = 1; i <= n_; ++i) d += mult(i, j);
        return d;
    }

    bool balanced() const {
        for (int v = 1; v <= n_; ++v)
            if (outdegree(v) != indegree(v)) return false;
        return true;
    }

    // Vertices incident to at least one arc.
    std::vector<int> support() const {
        std::vector<int> out;
        for (int v = 1; v <= n_; ++v)
            if (outdegree(v) > 0 || indegree(v) > 0) out.push_back(v);
        return out;
    }

    // Distinct arcs with their multiplicities, row-major order.
    std::vector<std::pair<std::pair<int, int>, long>> arcs() const {
        std::vector<std::pair<std::pair<int, int>, long>> out;
        for (int i = 1; i <= n_; ++i)
            for (int j = 1; j <= n_; ++j)
                if (mult(i, j) > 0) out.push_back({{i, j}, mult(i, j)});
        return out;
    }

    // The support digraph is strongly connected (single vertex counts).
    bool support_strongly_connected() const {
        std::vector<int> sup = support();
        if (sup.empty()) return false;
        auto reaches_all = [&](bool forward) {
            std::vector<bool> seen(static_cast<size_t>(n_) + 1, false);
            std::vector<int> stack{sup[0]};
            seen[sup[0]] = true;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (int v = 1; v <= n_; ++v) {
                    bool arc = forward ? mult(u, v) > 0 : mult(v, u) > 0;
                    if (arc && !seen[v]) {
                        seen[v] = true;
                        stack.push_back(v);
                    }
                }
            }
            for (int v : sup)
                if (!seen[v]) return false;
            return true;
        };
        return reaches_all(true) && reaches_all(false);
    }

    friend bool operator==(const ArcMultiset& a, const ArcMultiset& b) {
        return a.n_ == b.n_ && a.mult_ == b.mult_;
    }
    friend bool operator<(const ArcMultiset& a, const ArcMultiset& b) {
        if (a.n_ != b.n_) return a.n_ < b.n_;
        return a.mult_ < b.mult_;
    }

private:
    size_t idx(int i, int j) const {
        if (i < 1 || i > n_ || j < 1 || j > n_)
            throw std::out_of_range("arc multiset: vertex out of range");
        return static_cast<size_t>(i - 1) * n_ + (j - 1);
    }

    int n_;
    std::vector<long> mult_;
};

// ---------------------------------------------------------------------------
// Index assignments (the F objects)
// ---------------------------------------------------------------------------

// Ordered list of (primary index, (m-1)-tuple) pairs with nondecreasing
// primary indices.
struct IndexAssignment {
    std::vector<std::pair<int, std::vector<int>>> components;

    size_t size() const { return components.size(); }

    void validate(int n, int m) const {
        int prev = 1;
        for (const auto& [i, alpha] : components) {
            if (i < prev) throw std::invalid_argument("index assignment: primary indices must be nondecreasing");
            if (i < 1 || i > n) throw std::out_of_range("index assignment: primary index out of range");
            if (static_cast<int>(alpha.size()) != m - 1)
                throw std::invalid_argument("index assignment: tuple must have m-1 components");
            for (int v : alpha)
                if (v < 1 || v > n) throw std::out_of_range("index assignment: tuple component out of range");
            prev = i;
        }
    }
};

// E(F): one arc from each primary index to each component of its tuple,
// multiplicities accumulated.
inline ArcMultiset arc_multiset_of(const IndexAssignment& f, int n) {
    ArcMultiset e(n);
    for (const auto& [i, alpha] : f.components)
        for (int v : alpha) e.add(i, v);
    return e;
}

// b(E): product of the factorials of the arc multiplicities.
inline Integer weight_b(const ArcMultiset& e) {
    if (e.empty()) throw std::invalid_argument("weight b: empty arc multiset");
    Integer r(1);
    for (const auto& [arc, mult] : e.arcs()) r *= factorial(mult);
    return r;
}

// c(E): product of the factorials of the vertex outdegrees.
inline Integer weight_c(const ArcMultiset& e) {
    if (e.empty()) throw std::invalid_argument("weight c: empty arc multiset");
    Integer r(1);
    for (int v = 1; v <= e.n(); ++v) {
        long d = e.outdegree(v);
        if (d > 0) r *= factorial(d);
    }
    return r;
}

// F is m-valent iff every index's total occurrence count (primary plus
// non-primary) is a multiple of m.
inline bool m_valent(const IndexAssignment& f, int m) {
    if (m < 2) throw std::invalid_argument("m-valent: order must be >= 2");
    std::map<int, long> occurrences;
    for (const auto& [i, alpha] : f.components) {
        if (static_cast<int>(alpha.size()) != m - 1)
            throw std::invalid_argument("m-valent: tuple length does not match order");
        occurrences[i] += 1;
        for (int v : alpha) occurrences[v] += 1;
    }
    for (const auto& [v, p] : occurrences)
        if (p % m != 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Census of balanced arc multi-sets
// ---------------------------------------------------------------------------

// Visit every arc multiset E over [n] with |E| = d*r, outdegree == indegree
// at every vertex, and every outdegree a multiple of r. Canonical order:
// outdegree profiles in lexicographic order, then row-major lexicographic
// backtracking over the multiplicity matrix.
inline void for_each_balanced_census(int n, long d, long r,
                                     const std::function<void(const ArcMultiset&)>& visit) {
    if (n < 1 || d < 1 || r < 1)
        throw std::invalid_argument("census: n, d, r must be >= 1");
    for_each_composition(d, n, [&](const std::vector<long>& parts) {
        std::vector<long> out(parts.size());
        for (size_t i = 0; i < parts.size(); ++i) out[i] = parts[i] * r;

        std::vector<long> col_remaining(out); // indegree budget per vertex
        std::vector<std::vector<long>> rows(static_cast<size_t>(n));
        auto rec = [&](auto&& self, int row) -> void {
            if (row == n) {
                ArcMultiset out_e(n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        if (rows[i][j] > 0) out_e.add(i + 1, j + 1, rows[i][j]);
                visit(out_e);
                return;
            }
            long rows_left = 0;
            for (int i = row + 1; i < n; ++i) rows_left += out[i];
            std::vector<long> current(static_cast<size_t>(n), 0);
            auto fill = [&](auto&& fself, int col, long remaining) -> void {
                if (col == n) {
                    if (remaining != 0) return;
                    for (int j = 0; j < n; ++j)
                        if (col_remaining[j] > rows_left) return;
                    rows[row] = current;
                    self(self, row + 1);
                    return;
                }
                long cap = std::min(remaining, col_remaining[col]);
                for (long v = 0; v <= cap; ++v) {
                    current[col] = v;
                    col_remaining[col] -= v;
                    fself(fself, col + 1, remaining - v);
                    col_remaining[col] += v;
                }
                current[col] = 0;
            };
            fill(fill, 0, out[row]);
        };
        rec(rec, 0);
    });
}

inline std::vector<ArcMultiset> census_balanced(int n, long d, long r) {
    std::vector<ArcMultiset> out;
    for_each_balanced_census(n, d, r, [&](const ArcMultiset& e) { out.push_back(e); });
    return out;
}

// Upper bound on the census size, computable without enumeration: the
// composition-by-row-count bound sum over outdegree profiles of
// prod_i C(o_i + n - 1, n - 1), evaluated by convolution.
inline Integer census_size_bound(int n, long d, long r) {
    if (n < 1 || d < 1 || r < 1)
        throw std::invalid_argument("census bound: n, d, r must be >= 1");
    // dp over vertices: coefficient of x^d in (sum_p C(r*p + n - 1, n - 1) x^p)^n
    std::vector<Integer> dp(static_cast<size_t>(d) + 1, Integer(0));
    dp[0] = 1;
    for (int vertex = 0; vertex < n; ++vertex) {
        std::vector<Integer> next(static_cast<size_t>(d) + 1, Integer(0));
        for (long have = 0; have <= d; ++have) {
            if (dp[have] == 0) continue;
            for (long p = 0; have + p <= d; ++p)
                next[have + p] += dp[have] * binomial(r * p + n - 1, n - 1);
        }
        dp = std::move(next);
    }
    return dp[static_cast<size_t>(d)];
}

// ---------------------------------------------------------------------------
// Closed-walk counting
// ---------------------------------------------------------------------------

// |W(E)|: the number of rooted vertex sequences (v_0, ..., v_l = v_0) with
// l = |E| whose consecutive-pair multiset equals E exactly. Arcs with equal
// endpoints are indistinguishable; different roots give different walks.
// Depth-first consumption of the multiplicity matrix from each candidate
// root, memoized on (current vertex, residual matrix).
inline Integer count_closed_walks(const ArcMultiset& e) {
    if (e.empty()) throw std::invalid_argument("closed walks: empty arc multiset");
    if (!e.balanced()) return Integer(0);
    if (!e.support_strongly_connected()) return Integer(0);

    std::vector<int> sup = e.support();
    const int s = static_cast<int>(sup.size());

    // compact the multiplicity matrix to the support
    std::vector<long> res(static_cast<size_t>(s) * s, 0);
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) res[static_cast<size_t>(a) * s + b] = e.mult(sup[a], sup[b]);

    // process-wide cache keyed by the support-compacted matrix; walk counts
    // are invariant under vertex relabeling
    static std::map<std::vector<long>, Integer> cache;
    static std::mutex cache_mutex;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(res);
        if (it != cache.end()) return it->second;
    }

    Integer total(0);
    std::vector<long> work(res);
    for (int root = 0; root < s; ++root) {
        std::map<std::pair<int, std::vector<long>>, Integer> memo;
        auto rec = [&](auto&& self, int u, long remaining) -> Integer {
            if (remaining == 0) return Integer(u == root ? 1 : 0);
            auto key = std::make_pair(u, work);
            auto it = memo.find(key);
            if (it != memo.end()) return it->second;
            Integer acc(0);
            for (int v = 0; v < s; ++v) {
                long& m = work[static_cast<size_t>(u) * s + v];
                if (m > 0) {
                    --m;
                    acc += self(self, v, remaining - 1);
                    ++m;
                }
            }
            memo.emplace(std::move(key), acc);
            return acc;
        };
        total += rec(rec, root, e.size());
    }

    std::lock_guard<std::mutex> lock(cache_mutex);
    if (cache.size() > (1u << 20)) cache.clear();
    cache.emplace(std::move(res), total);
    return total;
}

// The three-vertex walk-count parameter of the order-3 trace expansion:
// the walk count of the canonical arc multiset
//   (1,2)^p (2,3)^q (3,1)^r (2,1)^s (1,3)^{r+s-p} (3,2)^{q+s-p}
//   (1,1)^{m-1-s-r} (2,2)^{m-1-s-q} (3,3)^{m-1+p-r-s-q}
// and 0 whenever any multiplicity comes out negative.
inline Integer walk_count_table_w(int m, long p, long q, long r, long s) {
    if (m < 2) throw std::invalid_argument("walk table: order must be >= 2");
    long mm = m - 1;
    if (p < 0 || p > mm || q < 0 || q > mm || r < 0 || r > mm || s < 0 || s > mm)
        throw std::invalid_argument("walk table: parameters must lie in [0, m-1]");
    long ik = r + s - p;
    long kj = q + s - p;
    long ii = mm - s - r;
    long jj = mm - s - q;
    long kk = mm + p - r - s - q;
    if (ik < 0 || kj < 0 || ii < 0 || jj < 0 || kk < 0) return Integer(0);
    ArcMultiset e(3);
    e.add(1, 2, p);
    e.add(2, 3, q);
    e.add(3, 1, r);
    e.add(2, 1, s);
    e.add(1, 3, ik);
    e.add(3, 2, kj);
    e.add(1, 1, ii);
    e.add(2, 2, jj);
    e.add(3, 3, kk);
    if (e.empty()) return Integer(0);
    return count_closed_walks(e);
}

} // namespace hypertrace
