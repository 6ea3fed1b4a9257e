#include <catch2/catch_amalgamated.hpp>

#include "hypertrace/oracle.hpp"
#include "hypertrace/trace.hpp"

#include "test_util.hpp"

using namespace hypertrace;

namespace {

// Independent route for tr(A^ell): symbolic matrix powering. The production
// path enumerates walk sequences; the two must agree.
MultiPoly trace_power_by_matrix_powering(int n, long ell) {
    // entries of A^k as multipolys, starting from A itself
    std::vector<std::vector<MultiPoly>> acc(
        static_cast<size_t>(n), std::vector<MultiPoly>(static_cast<size_t>(n), MultiPoly(n)));
    auto var_expo = [&](int i, int j) {
        std::vector<int> e(static_cast<size_t>(n) * n, 0);
        e[MultiPoly::var(i, j, n)] = 1;
        return e;
    };
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) acc[i - 1][j - 1].add_term(var_expo(i, j), Rational(1));

    auto multiply = [&](const MultiPoly& a, const MultiPoly& b) {
        MultiPoly out(n);
        for (const auto& [ea, ca] : a.terms())
            for (const auto& [eb, cb] : b.terms()) {
                std::vector<int> e(ea);
                for (size_t v = 0; v < e.size(); ++v) e[v] += eb[v];
                out.add_term(e, ca * cb);
            }
        return out;
    };

    for (long step = 1; step < ell; ++step) {
        std::vector<std::vector<MultiPoly>> next(
            static_cast<size_t>(n), std::vector<MultiPoly>(static_cast<size_t>(n), MultiPoly(n)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                MultiPoly cell(n);
                for (int k = 0; k < n; ++k) {
                    MultiPoly av(n);
                    av.add_term(var_expo(k + 1, j + 1), Rational(1));
                    MultiPoly prod = multiply(acc[i][k], av);
                    for (const auto& [e, c] : prod.terms()) cell.add_term(e, c);
                }
                next[i][j] = cell;
            }
        acc = std::move(next);
    }

    MultiPoly tr(n);
    for (int i = 0; i < n; ++i)
        for (const auto& [e, c] : acc[i][i].terms()) tr.add_term(e, c);
    return tr;
}

} // namespace

TEST_CASE("symbolic trace power small cases") {
    // tr(A^3) for n=1 is a_{11}^3
    MultiPoly p13 = symbolic_trace_power(1, 3);
    REQUIRE(p13.term_count() == 1);
    CHECK(p13.terms().begin()->first == std::vector<int>{3});
    CHECK(p13.terms().begin()->second == Rational(1));

    // tr(A) for n=2 is a_{11} + a_{22}
    MultiPoly p21 = symbolic_trace_power(2, 1);
    CHECK(p21.term_count() == 2);

    // tr(A^2) for n=2 is a11^2 + 2 a12 a21 + a22^2
    MultiPoly p22 = symbolic_trace_power(2, 2);
    REQUIRE(p22.term_count() == 3);
    std::vector<int> cross{0, 1, 1, 0};
    CHECK(p22.terms().at(cross) == Rational(2));
}

TEST_CASE("walk enumeration agrees with symbolic matrix powering") {
    for (int n = 1; n <= 3; ++n)
        for (long ell = 1; ell <= (n == 3 ? 4 : 5); ++ell) {
            INFO("n=" << n << " ell=" << ell);
            CHECK(symbolic_trace_power(n, ell) == trace_power_by_matrix_powering(n, ell));
        }
}

TEST_CASE("apply_partial matches the exact-exponent rule") {
    // d^2/da11^2 (a11^2) = 2
    MultiPoly p(2);
    std::vector<int> e11{2, 0, 0, 0};
    p.add_term(e11, Rational(1));
    IndexAssignment f{{{1, {1, 1}}}};
    MultiPoly r = apply_partial(p, f);
    CHECK(r.is_constant());
    CHECK(r.constant_term() == Rational(2));

    // the same operator kills a12 a21
    MultiPoly q(2);
    std::vector<int> cross{0, 1, 1, 0};
    q.add_term(cross, Rational(1));
    MultiPoly rq = apply_partial(q, f);
    CHECK(rq.constant_term() == Rational(0));
}

TEST_CASE("partial of the trace power yields b(F) |W(F)|") {
    // exhaustive over F in F_d for small n, m, d
    const int n = 2, m = 3;
    for (long d = 1; d <= 2; ++d) {
        MultiPoly power = symbolic_trace_power(n, d * (m - 1));
        IndexAssignment f;
        f.components.resize(static_cast<size_t>(d));
        auto rec = [&](auto&& self, long pos, int min_primary) -> void {
            if (pos == d) {
                MultiPoly applied = apply_partial(power, f);
                REQUIRE(applied.is_constant());
                ArcMultiset e = arc_multiset_of(f, n);
                CHECK(applied.constant_term() == Rational(weight_b(e) * count_closed_walks(e)));
                return;
            }
            for (int i = min_primary; i <= n; ++i) {
                std::vector<int> alpha(static_cast<size_t>(m - 1), 1);
                while (true) {
                    f.components[pos] = {i, alpha};
                    self(self, pos + 1, i);
                    int p = m - 2;
                    while (p >= 0 && alpha[static_cast<size_t>(p)] == n) alpha[static_cast<size_t>(p--)] = 1;
                    if (p < 0) break;
                    ++alpha[static_cast<size_t>(p)];
                }
            }
        };
        rec(rec, 0, 1);
    }
}

TEST_CASE("matrix power trace") {
    Tensor id = unit_tensor(2, 3);
    CHECK(matrix_power_trace(id, 5) == Rational(3));

    Tensor::EntryMap swap_entries;
    swap_entries[{1, 2}] = Rational(1);
    swap_entries[{2, 1}] = Rational(1);
    Tensor swp(2, 2, std::move(swap_entries));
    CHECK(matrix_power_trace(swp, 2) == Rational(2));
    CHECK(matrix_power_trace(swp, 3) == Rational(0));

    CHECK_THROWS_AS(matrix_power_trace(unit_tensor(3, 2), 2), std::invalid_argument);
}

TEST_CASE("oracle equals the census trace on small random tensors") {
    testutil::Rng rng(404);
    struct Cell {
        int m, n;
        long dmax;
    };
    for (const Cell& cell : {Cell{2, 2, 3}, Cell{2, 3, 2}, Cell{3, 2, 3}, Cell{3, 3, 2}, Cell{4, 2, 2}}) {
        for (int trial = 0; trial < 3; ++trial) {
            Tensor t = testutil::random_sparse_tensor(cell.m, cell.n, rng, 2 * cell.n);
            for (long d = 1; d <= cell.dmax; ++d) {
                INFO("m=" << cell.m << " n=" << cell.n << " d=" << d << " trial=" << trial);
                CHECK(trace_d_oracle(t, d) == trace_d(t, d));
            }
        }
    }
}

TEST_CASE("oracle on matrices and the zero tensor") {
    testutil::Rng rng(17);
    Tensor a = testutil::random_integer_matrix(3, rng);
    for (long d = 1; d <= 3; ++d) CHECK(trace_d_oracle(a, d) == matrix_power_trace(a, d));

    Tensor zero(3, 2, {});
    CHECK(trace_d_oracle(zero, 2) == Rational(0));
}

TEST_CASE("oracle refuses oversized requests") {
    Tensor t = testutil::all_ones_tensor(3, 3);
    CHECK_THROWS_AS(trace_d_oracle(t, 3, Integer(10)), resource_limit_error);
    try {
        trace_d_oracle(t, 3, Integer(10));
    } catch (const resource_limit_error& e) {
        CHECK(e.cap_name() == "max-oracle-terms");
    }
}
