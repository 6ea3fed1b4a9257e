#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hypertrace/rational.hpp"

namespace hypertrace {

using MultiIndex = std::vector<int>; // 1-based components in [n]

// Sparse tensor of order m >= 2 and dimension n >= 1 over exact rationals.
// Keys are full m-tuples over [n]; absent keys denote 0 and stored values
// are never 0. Immutable after construction.
class Tensor {
public:
    using EntryMap = std::map<MultiIndex, Rational>;

    Tensor(int order, int dim, EntryMap entries)
        : order_(order), dim_(dim), entries_(std::move(entries)) {
        if (order_ < 2) throw std::invalid_argument("tensor: order must be >= 2");
        if (dim_ < 1) throw std::invalid_argument("tensor: dim must be >= 1");
        for (auto it = entries_.begin(); it != entries_.end();) {
            check_index(it->first);
            if (it->second.is_zero())
                it = entries_.erase(it);
            else
                ++it;
        }
    }

    int order() const { return order_; }
    int dim() const { return dim_; }
    const EntryMap& nonzeros() const { return entries_; }

    Rational entry(const MultiIndex& idx) const {
        check_index(idx);
        auto it = entries_.find(idx);
        return it == entries_.end() ? Rational(0) : it->second;
    }

    // t_{i alpha} with alpha an (m-1)-tuple, the paper-style split of the key.
    Rational entry(int i, const MultiIndex& alpha) const {
        if (static_cast<int>(alpha.size()) != order_ - 1)
            throw std::invalid_argument("tensor: alpha must have m-1 components");
        MultiIndex idx;
        idx.reserve(order_);
        idx.push_back(i);
        idx.insert(idx.end(), alpha.begin(), alpha.end());
        return entry(idx);
    }

    // Nonzero entries grouped by primary (first) index: (tail, value) pairs
    // in deterministic key order.
    std::vector<std::pair<MultiIndex, Rational>> entries_at(int i) const {
        if (i < 1 || i > dim_) throw std::out_of_range("tensor: primary index out of range");
        std::vector<std::pair<MultiIndex, Rational>> out;
        MultiIndex lo(static_cast<size_t>(order_), 1);
        lo[0] = i;
        for (auto it = entries_.lower_bound(lo); it != entries_.end() && it->first[0] == i; ++it)
            out.emplace_back(MultiIndex(it->first.begin() + 1, it->first.end()), it->second);
        return out;
    }

    friend bool operator==(const Tensor& a, const Tensor& b) {
        return a.order_ == b.order_ && a.dim_ == b.dim_ && a.entries_ == b.entries_;
    }

private:
    void check_index(const MultiIndex& idx) const {
        if (static_cast<int>(idx.size()) != order_)
            throw std::invalid_argument("tensor: index must have exactly m components");
        for (int c : idx)
            if (c < 1 || c > dim_) throw std::out_of_range("tensor: index component out of range");
    }

    int order_;
    int dim_;
    EntryMap entries_;
};

// k-uniform hypergraph on vertex set [n]; edges are k-subsets, no duplicates.
class Hypergraph {
public:
    Hypergraph(int n, int k, const std::vector<std::vector<int>>& edges)
        : n_(n), k_(k) {
        if (n_ < 1) throw std::invalid_argument("hypergraph: n must be >= 1");
        if (k_ < 1) throw std::invalid_argument("hypergraph: k must be >= 1");
        for (const auto& e : edges) {
            if (static_cast<int>(e.size()) != k_)
                throw std::invalid_argument("hypergraph: edge is not k-uniform");
            std::vector<int> s(e);
            std::sort(s.begin(), s.end());
            for (size_t i = 0; i < s.size(); ++i) {
                if (s[i] < 1 || s[i] > n_) throw std::out_of_range("hypergraph: vertex out of range");
                if (i > 0 && s[i] == s[i - 1])
                    throw std::invalid_argument("hypergraph: repeated vertex within an edge");
            }
            if (!edges_.insert(std::move(s)).second)
                throw std::invalid_argument("hypergraph: duplicate edge");
        }
    }

    int n() const { return n_; }
    int k() const { return k_; }
    const std::set<std::vector<int>>& edges() const { return edges_; }
    bool nontrivial() const { return !edges_.empty(); }

    int degree(int v) const {
        int d = 0;
        for (const auto& e : edges_)
            if (std::binary_search(e.begin(), e.end(), v)) ++d;
        return d;
    }

private:
    int n_;
    int k_;
    std::set<std::vector<int>> edges_;
};

// Unit tensor: delta_{i1...im} = 1 iff all indices equal.
inline Tensor unit_tensor(int order, int dim) {
    Tensor::EntryMap entries;
    for (int i = 1; i <= dim; ++i)
        entries[MultiIndex(static_cast<size_t>(order), i)] = Rational(1);
    return Tensor(order, dim, std::move(entries));
}

// Adjacency tensor: 1/(k-1)! at every permutation of every edge.
inline Tensor adjacency_tensor(const Hypergraph& h) {
    if (h.k() < 2) throw std::invalid_argument("adjacency tensor: uniformity k must be >= 2");
    Rational value(Integer(1), factorial(h.k() - 1));
    Tensor::EntryMap entries;
    for (const auto& edge : h.edges()) {
        std::vector<int> perm(edge);
        do {
            entries[perm] = value;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return Tensor(h.k(), h.n(), std::move(entries));
}

// Diagonal tensor of vertex degrees.
inline Tensor degree_tensor(const Hypergraph& h) {
    Tensor::EntryMap entries;
    for (int v = 1; v <= h.n(); ++v) {
        int d = h.degree(v);
        if (d > 0) entries[MultiIndex(static_cast<size_t>(h.k()), v)] = Rational(d);
    }
    return Tensor(h.k(), h.n(), std::move(entries));
}

inline Tensor add(const Tensor& a, const Tensor& b) {
    if (a.order() != b.order() || a.dim() != b.dim())
        throw std::invalid_argument("tensor add: shape mismatch");
    Tensor::EntryMap entries = a.nonzeros();
    for (const auto& [idx, v] : b.nonzeros()) entries[idx] += v;
    return Tensor(a.order(), a.dim(), std::move(entries));
}

inline Tensor scale(const Tensor& t, const Rational& c) {
    Tensor::EntryMap entries;
    for (const auto& [idx, v] : t.nonzeros()) entries[idx] = c * v;
    return Tensor(t.order(), t.dim(), std::move(entries));
}

inline Tensor sub(const Tensor& a, const Tensor& b) { return add(a, scale(b, Rational(-1))); }

inline Tensor entrywise_abs(const Tensor& t) {
    Tensor::EntryMap entries;
    for (const auto& [idx, v] : t.nonzeros()) entries[idx] = abs(v);
    return Tensor(t.order(), t.dim(), std::move(entries));
}

inline Tensor laplacian(const Hypergraph& h) { return sub(degree_tensor(h), adjacency_tensor(h)); }

inline Tensor signless_laplacian(const Hypergraph& h) {
    return add(degree_tensor(h), adjacency_tensor(h));
}

// Relabel indices by a bijection perm: [n] -> [n] (1-based, perm[v-1] is the
// image of v).
inline Tensor relabel(const Tensor& t, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != t.dim())
        throw std::invalid_argument("relabel: permutation size mismatch");
    std::vector<bool> seen(perm.size(), false);
    for (int p : perm) {
        if (p < 1 || p > t.dim() || seen[p - 1])
            throw std::invalid_argument("relabel: not a permutation");
        seen[p - 1] = true;
    }
    Tensor::EntryMap entries;
    for (const auto& [idx, v] : t.nonzeros()) {
        MultiIndex mapped(idx.size());
        for (size_t i = 0; i < idx.size(); ++i) mapped[i] = perm[idx[i] - 1];
        entries[std::move(mapped)] = v;
    }
    return Tensor(t.order(), t.dim(), std::move(entries));
}

} // namespace hypertrace
