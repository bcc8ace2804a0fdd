#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "periclass/bipoly.hpp"

using periclass::BiPoly;
using periclass::IntPoly;

namespace {

BiPoly random_bipoly(std::mt19937_64& rng, int max_deg, int max_terms) {
    std::uniform_int_distribution<int> de(0, max_deg);
    std::uniform_int_distribution<int> dt(1, max_terms);
    std::uniform_int_distribution<long> dc(-30, 30);
    BiPoly r;
    int terms = dt(rng);
    for (int t = 0; t < terms; ++t) r.add_to(de(rng), de(rng), mpz_class(dc(rng)));
    return r;
}

} // namespace

TEST_CASE("construction and coefficient access", "[bipoly]") {
    BiPoly f = BiPoly::monomial(1, 2, 2) + BiPoly::monomial(2, 1, 0) + BiPoly::monomial(1, 0, 2);
    REQUIRE(f.degree_x() == 2);
    REQUIRE(f.degree_y() == 2);
    REQUIRE(f.coeff(2, 2) == 1);
    REQUIRE(f.coeff(1, 0) == 2);
    REQUIRE(f.coeff(0, 2) == 1);
    REQUIRE(f.coeff(5, 5) == 0);
    REQUIRE(BiPoly::zero().is_zero());
    REQUIRE(BiPoly::zero().degree_x() == -1);
    BiPoly g = f - f;
    REQUIRE(g.is_zero());
}

TEST_CASE("ring axioms on random sparse polynomials", "[bipoly]") {
    std::mt19937_64 rng(20240814u);
    for (int trial = 0; trial < 100; ++trial) {
        BiPoly a = random_bipoly(rng, 5, 6);
        BiPoly b = random_bipoly(rng, 5, 6);
        BiPoly c = random_bipoly(rng, 5, 6);
        REQUIRE((a + b) + c == a + (b + c));
        REQUIRE(a + b == b + a);
        REQUIRE(a * b == b * a);
        REQUIRE((a * b) * c == a * (b * c));
        REQUIRE(a * (b + c) == a * b + a * c);
        REQUIRE((a - a).is_zero());
        REQUIRE(a * BiPoly::constant(1) == a);
        REQUIRE((a * BiPoly::zero()).is_zero());
    }
}

TEST_CASE("univariate views round trip", "[bipoly]") {
    std::mt19937_64 rng(3u);
    for (int trial = 0; trial < 50; ++trial) {
        BiPoly a = random_bipoly(rng, 6, 8);
        REQUIRE(BiPoly::from_y_coeffs(a.y_coeffs()) == a);
        REQUIRE(a.swap_vars().swap_vars() == a);
        REQUIRE(BiPoly::from_y_coeffs(a.x_coeffs()) == a.swap_vars());
    }
    IntPoly p({3, 0, -1});
    REQUIRE(BiPoly::from_x_poly(p).degree_y() == 0);
    REQUIRE(BiPoly::from_x_poly(p).eval_y(0) == p);
    REQUIRE(BiPoly::from_y_poly(p).degree_x() == 0);
}

TEST_CASE("diagonal and evaluation", "[bipoly]") {
    BiPoly g = BiPoly::monomial(1, 2, 2) + BiPoly::monomial(2, 1, 0) + BiPoly::monomial(1, 0, 2);
    REQUIRE(g.diagonal() == IntPoly({0, 2, 1, 0, 1}));
    REQUIRE(g.eval(2, 3) == 4 * 9 + 4 + 9);
    std::mt19937_64 rng(11u);
    std::uniform_int_distribution<long> dv(-9, 9);
    for (int trial = 0; trial < 50; ++trial) {
        BiPoly a = random_bipoly(rng, 5, 7);
        mpz_class x0 = dv(rng), y0 = dv(rng);
        REQUIRE(a.eval_y(y0).eval(x0) == a.eval_x(x0).eval(y0));
        REQUIRE(a.eval(x0, y0) == a.eval_y(y0).eval(x0));
        REQUIRE(a.diagonal().eval(x0) == a.eval(x0, x0));
    }
}

TEST_CASE("exact division", "[bipoly]") {
    std::mt19937_64 rng(17u);
    int done = 0;
    while (done < 60) {
        BiPoly a = random_bipoly(rng, 4, 5);
        BiPoly b = random_bipoly(rng, 4, 5);
        if (b.is_zero()) continue;
        REQUIRE(BiPoly::divexact(a * b, b) == a);
        ++done;
    }
    BiPoly f = BiPoly::monomial(1, 0, 2) - BiPoly::monomial(1, 2, 0);
    BiPoly d = BiPoly::monomial(1, 0, 1) - BiPoly::monomial(1, 1, 0);
    REQUIRE(BiPoly::divexact(f, d) == BiPoly::monomial(1, 0, 1) + BiPoly::monomial(1, 1, 0));
    REQUIRE_THROWS_AS(BiPoly::divexact(f + BiPoly::constant(1), d), periclass::NotDivisible);
    REQUIRE_THROWS_AS(BiPoly::divexact(f, BiPoly::zero()), periclass::NotDivisible);
}

TEST_CASE("content and printing", "[bipoly]") {
    BiPoly f = BiPoly::monomial(6, 1, 1) + BiPoly::monomial(-9, 0, 2);
    REQUIRE(f.content() == 3);
    REQUIRE(BiPoly::zero().content() == 0);
    BiPoly g = BiPoly::monomial(1, 2, 2) + BiPoly::monomial(2, 1, 0) + BiPoly::monomial(1, 0, 2);
    REQUIRE(g.to_string() == "x^2*y^2 + 2*x + y^2");
    REQUIRE(BiPoly::zero().to_string() == "0");
}

TEST_CASE("JSON round trip", "[bipoly]") {
    BiPoly g = BiPoly::monomial(1, 2, 2) + BiPoly::monomial(-2, 1, 0) + BiPoly::monomial(1, 0, 2);
    auto j = g.to_json();
    REQUIRE(j["vars"][0] == "x");
    REQUIRE(j["vars"][1] == "y");
    REQUIRE(BiPoly::from_json(j) == g);
    REQUIRE(BiPoly::from_json(BiPoly::zero().to_json()) == BiPoly::zero());

    std::mt19937_64 rng(5u);
    std::uniform_int_distribution<int> expd(0, 4), cd(-50, 50);
    for (int trial = 0; trial < 20; ++trial) {
        BiPoly f = BiPoly::zero();
        for (int t = 0; t < 5; ++t)
            f = f + BiPoly::monomial(cd(rng), expd(rng), expd(rng));
        REQUIRE(BiPoly::from_json(f.to_json()) == f);
    }
}
