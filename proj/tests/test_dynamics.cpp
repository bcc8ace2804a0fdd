#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

#include "periclass/dynamics.hpp"

using periclass::BiPoly;
using periclass::Chain;
using periclass::IntPoly;

namespace {

const IntPoly B7({2, -1, 1});
const IntPoly B15({4, -2, 5, -4, 1});
const IntPoly B23({8, -16, 18, -13, 9, 1, 1});
const IntPoly B31({8, -20, 16, -15, 11, 7, 1});

const IntPoly P7({16, -1, 1});
const IntPoly P15({256, -752, 753, -2, 1});
const IntPoly P23({4096, 5632, 8016, -27297, 13651, -3, 1});

bool proportional(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a * b.lc() == b * a.lc();
}

long necklace_count(long d) {
    long total = 0;
    for (long e = 1; e <= d; ++e) {
        if (d % e) continue;
        total += periclass::moebius(static_cast<int>(d / e)) * (1l << e);
    }
    return total / d;
}

} // namespace

TEST_CASE("moebius function", "[dynamics]") {
    int expect[] = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0};
    for (int n = 1; n <= 12; ++n) REQUIRE(periclass::moebius(n) == expect[n - 1]);
}

TEST_CASE("kernels and base diagonals", "[dynamics]") {
    Chain cf(periclass::kernel_f());
    REQUIRE(cf.level(1) == periclass::kernel_f().poly);
    REQUIRE(cf.rn(1) == IntPoly({0, 2, 1, 0, 1}));

    Chain ct(periclass::kernel_t());
    REQUIRE(ct.rn(1) == IntPoly({0, -16, 17, -2, 1}));
    REQUIRE(ct.rn(1) == IntPoly({0, 1}) * IntPoly({-1, 1}) * P7);
}

TEST_CASE("second level matches the hand-computed composition", "[dynamics]") {
    Chain cf(periclass::kernel_f());
    BiPoly expect;
    expect.set(0, 4, 1);
    expect.set(1, 4, -4);
    expect.set(2, 4, 6);
    expect.set(3, 4, -4);
    expect.set(4, 4, 1);
    expect.set(1, 0, 8);
    expect.set(3, 0, 8);
    REQUIRE(cf.level(2) == expect);
    REQUIRE(cf.rn(2) == IntPoly({0, 8, 0, 8, 1, -4, 6, -4, 1}));
}

TEST_CASE("diagonals are primitive and monic of degree 2^(n+1)", "[dynamics]") {
    Chain cf(periclass::kernel_f());
    for (int n = 1; n <= 5; ++n) {
        const IntPoly& r = cf.rn(n);
        REQUIRE(r.degree() == (1l << (n + 1)));
        REQUIRE(r.lc() == 1);
        REQUIRE(r.content() == 1);
        if (n <= 4) REQUIRE(r == cf.level(n).diagonal());
    }
    Chain ct(periclass::kernel_t());
    for (int n = 1; n <= 3; ++n) {
        REQUIRE(ct.rn(n).degree() == (1l << (n + 1)));
        REQUIRE(ct.rn(n).lc() == 1);
    }
}

TEST_CASE("moebius assembly", "[dynamics]") {
    Chain cf(periclass::kernel_f());
    REQUIRE(cf.pn(1) == cf.rn(1));
    REQUIRE(cf.pn(2) == IntPoly({4, -2, 5, -4, 1}));
    long expect_deg[] = {4, 12, 24, 60};
    for (int n = 2; n <= 5; ++n) REQUIRE(cf.pn(n).degree() == expect_deg[n - 2]);
    for (int n = 1; n <= 5; ++n) {
        IntPoly prod = IntPoly::constant(1);
        for (int k = 1; k <= n; ++k)
            if (n % k == 0) prod = prod * cf.pn(k);
        REQUIRE(proportional(prod, cf.rn(n)));
    }
    REQUIRE(cf.pn(1).eval(mpz_class(0)) == 0);
    REQUIRE(cf.pn(1).eval(mpz_class(-1)) == 0);
    for (int n = 2; n <= 5; ++n) {
        REQUIRE(cf.pn(n).eval(mpz_class(0)) != 0);
        REQUIRE(cf.pn(n).eval(mpz_class(-1)) != 0);
    }
}

TEST_CASE("diagonal root set is closed under the (x+1)/(x-1) involution", "[dynamics]") {
    Chain cf(periclass::kernel_f());
    for (int n = 1; n <= 4; ++n) {
        const IntPoly& r = cf.rn(n);
        REQUIRE(proportional(r.mobius_numerator(), r));
    }
}

TEST_CASE("scaled diagonals", "[dynamics]") {
    Chain cf(periclass::kernel_f());
    REQUIRE(cf.rn_scaled(1) == IntPoly({0, 1, 1, 0, 4}));
    for (int n = 1; n <= 4; ++n) REQUIRE(cf.scaled_valuation(n) == (1l << n));

    Chain cs(periclass::kernel_f_scaled());
    for (int n = 1; n <= 3; ++n) REQUIRE(cf.rn_scaled(n) == cs.rn(n));
}

TEST_CASE("mod-2 profile of the scaled diagonal", "[dynamics]") {
    Chain cf(periclass::kernel_f());
    for (int n = 1; n <= 4; ++n) {
        auto profile = cf.mod2_profile(n);
        long total = 0;
        for (auto [d, count] : profile) {
            REQUIRE(n % d == 0);
            REQUIRE(count == necklace_count(d));
            total += d * count;
        }
        REQUIRE(total == (1l << n));
    }
    Chain ct(periclass::kernel_t());
    REQUIRE_THROWS_AS(ct.mod2_profile(1), periclass::Mismatch);
}

TEST_CASE("kernel diagonal factors match the pushforward polynomials", "[dynamics]") {
    Chain ct(periclass::kernel_t());
    IntPoly trivial = IntPoly({0, 1}) * IntPoly({-1, 1});
    REQUIRE(ct.rn(2) == trivial * P7 * periclass::pd_from_bd(B15));
    IntPoly p31 = periclass::pd_from_bd(B31);
    REQUIRE(ct.rn(3) == trivial * P7 * P23 * p31);
}

TEST_CASE("pushforward from b to p", "[dynamics]") {
    REQUIRE(periclass::pd_from_bd(B7) == P7);
    REQUIRE(periclass::pd_from_bd(B15) == P15);
    REQUIRE(periclass::pd_from_bd(B23) == P23);
    IntPoly c = (B7 * B7.subst_neg()).compress_even();
    REQUIRE(c == IntPoly({4, 3, 1}));
    IntPoly d = (c * c.subst_neg()).compress_even();
    REQUIRE(d == P7);
    REQUIRE_THROWS_AS(periclass::pd_from_bd(IntPoly({-4, 0, 1})), periclass::IdentityFailure);
}

TEST_CASE("pre-periodic towers", "[dynamics]") {
    REQUIRE(periclass::preperiodic_poly(P7, 1) == IntPoly({16, -31, 16}));
    REQUIRE(periclass::preperiodic_poly(P7, 2) == IntPoly({256, -256, 1}));
    REQUIRE(periclass::preperiodic_poly(P7, 3) ==
            IntPoly({65536, -131072, -970752, 1036288, 1}));
    for (int r = 2; r <= 5; ++r) {
        IntPoly s = periclass::preperiodic_poly(P7, r);
        REQUIRE(s.degree() == (1l << (r - 1)));
        REQUIRE(proportional(s.involution_numerator(), s));
    }
    IntPoly s1 = periclass::preperiodic_poly(P7, 1);
    REQUIRE(proportional(s1.involution_numerator(), P7));
    for (int r = 2; r <= 4; ++r) {
        IntPoly s = periclass::preperiodic_poly(P15, r);
        REQUIRE(s.degree() == 2 * (1l << (r - 1)));
        REQUIRE(proportional(s.involution_numerator(), s));
    }
}

TEST_CASE("disk cache round trip, corruption, and force", "[dynamics]") {
    namespace fs = std::filesystem;
    std::mt19937_64 rng(std::random_device{}());
    fs::path dir = fs::temp_directory_path() / ("chain_cache_" + std::to_string(rng()));
    fs::create_directories(dir);

    {
        Chain c1(periclass::kernel_f(), dir.string());
        c1.level(3);
        REQUIRE(fs::exists(dir / "RN_F_2.json"));
        REQUIRE(fs::exists(dir / "RN_F_3.json"));
        REQUIRE(fs::exists(dir / "manifest.json"));
    }
    BiPoly fresh = Chain(periclass::kernel_f()).level(3);
    {
        Chain c2(periclass::kernel_f(), dir.string());
        REQUIRE(c2.level(3) == fresh);
    }
    {
        std::ofstream bad(dir / "RN_F_3.json", std::ios::trunc);
        bad << "not json at all";
    }
    {
        Chain c3(periclass::kernel_f(), dir.string());
        REQUIRE_THROWS_AS(c3.level(3), periclass::CacheCorrupt);
    }
    {
        Chain c4(periclass::kernel_f(), dir.string(), true, true);
        REQUIRE(c4.level(3) == fresh);
    }
    {
        Chain c5(periclass::kernel_f(), dir.string());
        REQUIRE(c5.level(3) == fresh);
    }
    {
        std::ofstream m(dir / "manifest.json", std::ios::trunc);
        m << "{\"version\":1,\"kernels\":{\"F\":\"0000000000000000\"}}";
        std::ofstream bad(dir / "RN_F_3.json", std::ios::trunc);
        bad << "still not json";
    }
    {
        Chain c6(periclass::kernel_f(), dir.string());
        REQUIRE(c6.level(3) == fresh);
    }
    {
        Chain c7(periclass::kernel_f(), dir.string());
        REQUIRE(c7.level(3) == fresh);
    }
    fs::remove_all(dir);
}
