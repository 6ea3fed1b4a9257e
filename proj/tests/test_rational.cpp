#include <catch2/catch_amalgamated.hpp>

#include "hypertrace/rational.hpp"

#include "test_util.hpp"

using hypertrace::Integer;
using hypertrace::Rational;

TEST_CASE("rational parse reduces and round-trips") {
    CHECK(Rational::parse("3/6") == Rational(1, 2));
    CHECK(Rational::parse("-4") == Rational(-4));
    CHECK(Rational::parse("-4").str() == "-4");
    CHECK(Rational::parse("0/5") == Rational(0));
    CHECK(Rational::parse("7/1").str() == "7");
    CHECK(Rational::parse("-10/4").str() == "-5/2");

    CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("a"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1/2/3"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1/-2"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("+3"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1.5"), std::invalid_argument);
}

TEST_CASE("rational format omits unit denominator") {
    CHECK(Rational(5, 1).str() == "5");
    CHECK(Rational(5, 2).str() == "5/2");
    CHECK(Rational(-6, 4).str() == "-3/2");
    CHECK(Rational(0).str() == "0");

    // round-trip through the text format
    for (const char* s : {"0", "-17", "22/7", "-355/113"}) {
        CHECK(Rational::parse(s).str() == s);
    }
}

TEST_CASE("rational arithmetic is exact") {
    Rational a(1, 3), b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == Rational(1, 6));
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK_THROWS_AS(a / Rational(0), std::domain_error);

    testutil::Rng rng(42);
    for (int t = 0; t < 200; ++t) {
        Rational x(rng.range(-50, 50), rng.range(1, 30));
        Rational y(rng.range(-50, 50), rng.range(1, 30));
        CHECK((x + y) - y == x);
        if (!y.is_zero()) CHECK((x * y) / y == x);
    }
}

TEST_CASE("rational normalization invariant") {
    Rational r(-4, -8);
    CHECK(r == Rational(1, 2));
    CHECK(r.denominator() > 0);
    CHECK(Rational(6, 3).denominator() == 1);
}

TEST_CASE("factorial") {
    CHECK(hypertrace::factorial(0) == 1);
    CHECK(hypertrace::factorial(5) == 120);
    CHECK(hypertrace::factorial(20) == Integer("2432902008176640000"));

    // iterated-multiplication oracle
    Integer acc(1);
    for (long k = 1; k <= 25; ++k) {
        acc *= k;
        CHECK(hypertrace::factorial(k) == acc);
    }
}

TEST_CASE("binomial out-of-range convention") {
    CHECK(hypertrace::binomial(4, 2) == 6);
    CHECK(hypertrace::binomial(4, 0) == 1);
    CHECK(hypertrace::binomial(4, -1) == 0);
    CHECK(hypertrace::binomial(4, 5) == 0);
    CHECK(hypertrace::binomial(0, 0) == 1);
}

TEST_CASE("multinomial") {
    CHECK(hypertrace::multinomial(4, {2, 2}) == 6);
    CHECK(hypertrace::multinomial(4, {4}) == 1);
    CHECK(hypertrace::multinomial(6, {1, 2, 3}) == 60);
    CHECK(hypertrace::multinomial(6, {1, 2, 3}) ==
          hypertrace::factorial(6) / (hypertrace::factorial(1) * hypertrace::factorial(2) * hypertrace::factorial(3)));
    CHECK_THROWS_AS(hypertrace::multinomial(5, {2, 2}), std::invalid_argument);

    // multinomial(t, parts) * prod parts_i! == t!
    testutil::Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        int n_parts = static_cast<int>(rng.range(1, 4));
        std::vector<long> parts;
        long total = 0;
        for (int i = 0; i < n_parts; ++i) {
            parts.push_back(rng.range(0, 5));
            total += parts.back();
        }
        Integer prod = hypertrace::multinomial(total, parts);
        for (long p : parts) prod *= hypertrace::factorial(p);
        CHECK(prod == hypertrace::factorial(total));
    }
}
