#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "periclass/qlambda.hpp"

using namespace periclass;

TEST_CASE("series arithmetic and truncation tracking") {
    SECTION("exact polynomials stay exact") {
        QSeries p = QSeries::exact({1, 2, 3});
        QSeries q = QSeries::exact({0, -2});
        QSeries s = p + q;
        REQUIRE(s.is_exact());
        REQUIRE(s.coeff(0) == 1);
        REQUIRE(s.coeff(1) == 0);
        REQUIRE(s.coeff(2) == 3);
        REQUIRE(s.coeff(100) == 0);
        QSeries m = p * q;
        REQUIRE(m.is_exact());
        REQUIRE(m.coeff(1) == -2);
        REQUIRE(m.coeff(3) == -6);
    }

    SECTION("truncation order flows through products") {
        QSeries a = QSeries::truncated({1, 1}, 0, 8);
        QSeries b = QSeries::truncated({1, -1}, 2, 6);
        QSeries m = a * b;
        REQUIRE(m.lead() == 2);
        REQUIRE(m.order() == 6);
        REQUIRE(m.coeff(2) == 1);
        REQUIRE(m.coeff(3) == 0);
        REQUIRE(m.coeff(4) == -1);
        REQUIRE_THROWS_AS(m.coeff(6), Error);
    }

    SECTION("coefficients beyond the order are refused") {
        QSeries a = QSeries::truncated({5}, 0, 4);
        REQUIRE(a.coeff(3) == 0);
        REQUIRE_THROWS_AS(a.coeff(4), Error);
    }

    SECTION("inverse of 1 - q is the geometric series") {
        QSeries g = truncate(QSeries::exact({1, -1}), 12);
        QSeries inv = inverse(g);
        REQUIRE(inv.lead() == 0);
        REQUIRE(inv.order() == 12);
        for (long e = 0; e < 12; ++e) REQUIRE(inv.coeff(e) == 1);
        QSeries prod = g * inv;
        for (long e = 1; e < prod.order(); ++e) REQUIRE(prod.coeff(e) == 0);
        REQUIRE(prod.coeff(0) == 1);
    }

    SECTION("inverse handles poles and demands truncation") {
        QSeries s = QSeries::truncated({4, 4, 1}, 2, 10);
        QSeries inv = inverse(s);
        REQUIRE(inv.lead() == -2);
        REQUIRE(inv.order() == 10 - 4);
        REQUIRE(inv.coeff(-2) == mpq_class(1, 4));
        QSeries prod = s * inv;
        REQUIRE(prod.coeff(0) == 1);
        for (long e = 1; e < prod.order(); ++e) REQUIRE(prod.coeff(e) == 0);
        REQUIRE_THROWS_AS(inverse(QSeries::exact({1, -1})), Error);
    }

    SECTION("substitution of q powers composes") {
        QSeries lam = lambda_series(24);
        QSeries d1 = substitute_q_power(lam, 1);
        REQUIRE(d1 == lam);
        QSeries d2 = substitute_q_power(substitute_q_power(lam, 2), 2);
        QSeries d4 = substitute_q_power(lam, 4);
        REQUIRE(d2 == d4);
        REQUIRE(d4.lead() == 4);
        REQUIRE(d4.order() == 4 * lam.order());
        REQUIRE(d4.coeff(4) == 16);
        REQUIRE(d4.coeff(5) == 0);
        REQUIRE(d4.coeff(8) == -128);
    }
}

TEST_CASE("lambda series expansion") {
    SECTION("opening coefficients") {
        QSeries lam = lambda_series(13);
        const std::vector<long> want = {16, -128, 704, -3072, 11488, -38400};
        for (std::size_t i = 0; i < want.size(); ++i)
            REQUIRE(lam.coeff(static_cast<long>(i) + 1) == want[i]);
        REQUIRE(lam.lead() == 1);
        REQUIRE(lam.order() >= 14);
    }

    SECTION("coefficients are integers out to 128 terms") {
        QSeries lam = lambda_series(128);
        for (long e = lam.lead(); e < 129; ++e)
            REQUIRE(lam.coeff(e).get_den() == 1);
    }

    SECTION("degenerate request is refused") {
        REQUIRE_THROWS_AS(lambda_series(0), Error);
    }
}

TEST_CASE("functional equation relating lambda at z and 2z") {
    SECTION("holds through 128 terms") {
        SeriesIdentityReport rep = verify_lemma11(128);
        REQUIRE(rep.ok);
        REQUIRE(rep.f_opening_ok);
        REQUIRE(rep.checked_order >= 128);
        auto j = rep.to_json();
        REQUIRE(j["ok"].get<bool>());
    }

    SECTION("f-series opens with the expected terms") {
        QSeries lam = lambda_series(16);
        QSeries lam2 = substitute_q_power(lam, 2);
        QSeries one = QSeries::constant(1);
        QSeries f = ((lam2 - one) * (lam2 - one)) * inverse(lam2);
        REQUIRE(f.lead() == -2);
        REQUIRE(f.coeff(-2) == mpq_class(1, 16));
        REQUIRE(f.coeff(-1) == 0);
        REQUIRE(f.coeff(0) == mpq_class(-3, 2));
        REQUIRE(f.coeff(2) == mpq_class(69, 4));
        REQUIRE(f.coeff(4) == -128);
        REQUIRE(f.coeff(6) == mpq_class(5601, 8));
        REQUIRE(f.coeff(8) == -3072);
        REQUIRE(f.coeff(10) == mpq_class(23003, 2));
        REQUIRE(f.coeff(12) == -38400);
        for (long e = -1; e < 13; e += 2) REQUIRE(f.coeff(e) == 0);
    }

    SECTION("rearranged form vanishes identically") {
        SeriesIdentityReport rep = verify_rearranged_form(96);
        REQUIRE(rep.ok);
        REQUIRE(rep.checked_order >= 90);
    }

    SECTION("short windows are refused") {
        REQUIRE_THROWS_AS(verify_lemma11(7), Error);
        REQUIRE_THROWS_AS(verify_rearranged_form(7), Error);
    }
}

TEST_CASE("two rational expressions for j agree") {
    SECTION("symbolically and at random rational points") {
        JLambdaReport rep = verify_j_lambda_identity(25);
        REQUIRE(rep.ok);
        REQUIRE(rep.symbolic_ok);
        REQUIRE(rep.trials == 25);
    }

    SECTION("both give 1728 at lambda = 2 and lambda = -1") {
        for (long lv : {2L, -1L}) {
            mpq_class l(lv);
            mpq_class lm = l - 1;
            mpq_class s = lm * lm / l;
            mpq_class sp1 = s + 1;
            mpq_class j1 = 256 * sp1 * sp1 * sp1 / s;
            mpq_class t = l * l / lm;
            mpq_class tm1 = t - 1;
            mpq_class j2 = 256 * tm1 * tm1 * tm1 / t;
            REQUIRE(j1 == 1728);
            REQUIRE(j2 == 1728);
        }
    }
}
