#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "periclass/dynamics.hpp"
#include "periclass/padic2.hpp"
#include "periclass/resultant.hpp"

#include "golden.hpp"

using periclass::IntPoly;
using periclass::Witt;
using periclass::WittRing;

namespace {

Witt random_elt(const WittRing& ring, std::mt19937_64& rng) {
    Witt w = ring.zero();
    for (auto& c : w) {
        c = 0;
        for (long filled = 0; filled < ring.prec(); filled += 64) {
            c <<= 64;
            c += mpz_class(rng());
        }
        ring.reduce(c);
    }
    return w;
}

Witt random_unit(const WittRing& ring, std::mt19937_64& rng) {
    Witt w = random_elt(ring, rng);
    w[0] |= 1;
    return w;
}

} // namespace

TEST_CASE("coefficient ring arithmetic", "[padic2]") {
    WittRing ring(3, 64);
    std::mt19937_64 rng(20240814u);
    for (int trial = 0; trial < 50; ++trial) {
        Witt a = random_elt(ring, rng), b = random_elt(ring, rng), c = random_elt(ring, rng);
        REQUIRE(ring.add(a, b) == ring.add(b, a));
        REQUIRE(ring.mul(a, b) == ring.mul(b, a));
        REQUIRE(ring.mul(a, ring.mul(b, c)) == ring.mul(ring.mul(a, b), c));
        REQUIRE(ring.mul(a, ring.add(b, c)) == ring.add(ring.mul(a, b), ring.mul(a, c)));
        REQUIRE(ring.sub(a, a) == ring.zero());
        REQUIRE(ring.mul(a, ring.one()) == a);
    }
    for (int trial = 0; trial < 20; ++trial) {
        Witt u = random_unit(ring, rng);
        REQUIRE(ring.is_unit(u));
        REQUIRE(ring.mul(u, ring.inv(u)) == ring.one());
        REQUIRE(ring.div(ring.mul(u, u), u) == u);
        REQUIRE(ring.v2(u) == 0);
        REQUIRE(ring.v2(ring.smul(2, u)) == 1);
        REQUIRE(ring.v2(ring.smul(8, u)) == 3);
    }
    REQUIRE(ring.v2(ring.zero()) == 64);
    REQUIRE_FALSE(ring.is_unit(ring.zero()));
    REQUIRE_THROWS_AS(ring.inv(ring.smul(2, ring.one())), periclass::Error);
    REQUIRE(ring.from_int(-1) == ring.sub(ring.zero(), ring.one()));
    REQUIRE_THROWS_AS(WittRing(17, 64), periclass::Error);
    REQUIRE_THROWS_AS(WittRing(0, 64), periclass::Error);
}

TEST_CASE("frobenius lift", "[padic2]") {
    std::mt19937_64 rng(7u);
    WittRing base(1, 64);
    for (int trial = 0; trial < 10; ++trial) {
        Witt w = random_elt(base, rng);
        REQUIRE(base.frobenius(w) == w);
    }

    WittRing ring(3, 64);
    for (int trial = 0; trial < 20; ++trial) {
        Witt a = random_elt(ring, rng), b = random_elt(ring, rng);
        Witt sa = ring.frobenius(a);
        // defining property on the residue field
        REQUIRE(ring.mod2(sa) == ring.mod2(ring.mul(a, a)));
        // ring automorphism
        REQUIRE(ring.frobenius(ring.add(a, b)) == ring.add(sa, ring.frobenius(b)));
        REQUIRE(ring.frobenius(ring.mul(a, b)) == ring.mul(sa, ring.frobenius(b)));
        // order equals the residue degree
        REQUIRE(ring.frobenius(ring.frobenius(sa)) == a);
        // fixes the base ring
        REQUIRE(ring.frobenius(ring.from_int(12345)) == ring.from_int(12345));
    }
}

TEST_CASE("disc evaluation and valuation law", "[padic2]") {
    WittRing base(1, 64);
    // w = 2^21: only the first series term survives at this precision
    Witt w = base.from_int(mpz_class(1) << 21);
    Witt expect = base.neg(base.from_int(mpz_class(1) << 41));
    REQUIRE(base.eval_disc(w) == expect);

    REQUIRE_THROWS_AS(base.eval_disc(base.one()), periclass::NotInDisc);

    std::mt19937_64 rng(11u);
    WittRing ring(2, 96);
    for (long v = 1; v <= 3; ++v) {
        for (int trial = 0; trial < 10; ++trial) {
            Witt u = random_unit(ring, rng);
            Witt x = ring.smul(mpz_class(1) << static_cast<unsigned long>(v), u);
            REQUIRE(ring.v2(ring.eval_disc(x)) == 2 * v - 1);
        }
    }
}

TEST_CASE("periodic lifting and the quadratic fixed point", "[padic2]") {
    WittRing ring(1, 128);
    auto seeds = orbit_seeds(ring);
    REQUIRE(seeds.size() == 1);
    auto orbit = lift_periodic(ring, seeds[0]);
    REQUIRE(orbit.size() == 1);
    Witt z = orbit[0];
    REQUIRE(ring.eval_scaled(z) == z);
    REQUIRE(ring.v2(z) == 0);

    Witt pi = ring.smul(2, z);
    REQUIRE(ring.v2(pi) == 1);
    REQUIRE(ring.eval_disc(pi) == pi);
    // pi is the disc root of x^2 - x + 2
    Witt rel = ring.add(ring.sub(ring.mul(pi, pi), pi), ring.from_int(2));
    REQUIRE(ring.is_zero(rel));
}

TEST_CASE("orbit structure through degree five", "[padic2]") {
    const std::size_t expected_orbits[] = {0, 1, 1, 2, 3, 6};
    for (int n = 1; n <= 5; ++n) {
        WittRing ring(n, 128);
        auto seeds = orbit_seeds(ring);
        REQUIRE(seeds.size() == expected_orbits[n]);
        for (const Witt& s : seeds) {
            auto orbit = lift_periodic(ring, s);
            REQUIRE(orbit.size() == static_cast<std::size_t>(n));
            // cyclic closure and distinct residues
            std::set<unsigned long> residues;
            for (std::size_t i = 0; i < orbit.size(); ++i) {
                REQUIRE(ring.eval_scaled(orbit[i]) == orbit[(i + 1) % orbit.size()]);
                residues.insert(ring.bits_of(orbit[i]));
            }
            REQUIRE(residues.size() == orbit.size());
        }
    }
}

TEST_CASE("frobenius agrees with the kernel map on lifted orbits", "[padic2]") {
    for (int n = 1; n <= 5; ++n) {
        WittRing ring(n, 128);
        for (const Witt& s : orbit_seeds(ring)) {
            auto orbit = lift_periodic(ring, s);
            auto rep = verify_frobenius(ring, orbit);
            REQUIRE(rep.ok);
            REQUIRE(rep.point_ok.size() == orbit.size());
        }
    }

    // a perturbed point must fail the comparison
    WittRing ring(2, 64);
    auto orbit = lift_periodic(ring, orbit_seeds(ring)[0]);
    orbit[0] = ring.add(orbit[0], ring.from_int(2));
    REQUIRE_FALSE(verify_frobenius(ring, orbit).ok);
}

TEST_CASE("valuation profile of disc roots and involution partners", "[padic2]") {
    for (int n = 1; n <= 4; ++n) {
        WittRing ring(n, 128);
        for (const Witt& s : orbit_seeds(ring)) {
            auto rep = valuation_profile(ring, lift_periodic(ring, s));
            REQUIRE(rep.ok);
        }
    }
    // ultrametric consistency of the quartic relation terms
    WittRing ring(1, 128);
    Witt z = lift_periodic(ring, orbit_seeds(ring)[0])[0];
    Witt pi = ring.smul(2, z);
    Witt xi = ring.involution(pi);
    Witt pi4 = ring.mul(ring.mul(pi, pi), ring.mul(pi, pi));
    Witt xi4 = ring.mul(ring.mul(xi, xi), ring.mul(xi, xi));
    REQUIRE(ring.v2(pi4) == 4);
    REQUIRE(ring.v2(xi4) == 0);
}

TEST_CASE("integer reconstruction matches the tables", "[padic2]") {
    const auto& bd = golden::bd_table();

    WittRing r1(1, 128);
    auto orbit1 = lift_periodic(r1, orbit_seeds(r1)[0]);
    REQUIRE(orbit_minpoly(r1, {orbit1}) == bd.at(7));

    WittRing r2(2, 128);
    auto orbit2 = lift_periodic(r2, orbit_seeds(r2)[0]);
    REQUIRE(orbit_minpoly(r2, {orbit2}) == bd.at(15));

    WittRing r3(3, 128);
    auto seeds3 = orbit_seeds(r3);
    std::vector<IntPoly> got;
    for (const Witt& s : seeds3) got.push_back(orbit_minpoly(r3, {lift_periodic(r3, s)}));
    REQUIRE(got.size() == 2);
    REQUIRE(((got[0] == bd.at(23) && got[1] == bd.at(31)) ||
             (got[0] == bd.at(31) && got[1] == bd.at(23))));
    REQUIRE_FALSE(got[0] == got[1]);
}

TEST_CASE("greedy reconstruction splits the full pool", "[padic2]") {
    periclass::Chain chain(periclass::kernel_f());
    const auto& bd = golden::bd_table();
    for (int n = 4; n <= 5; ++n) {
        WittRing ring(n, 128);
        std::vector<std::vector<Witt>> orbits;
        for (const Witt& s : orbit_seeds(ring)) orbits.push_back(lift_periodic(ring, s));
        auto found = reconstruct_factors(ring, orbits);

        std::vector<IntPoly> expected;
        for (int d : golden::pn_factor_ds().at(n)) expected.push_back(bd.at(d));
        REQUIRE(found.size() == expected.size());
        std::set<std::size_t> used;
        for (const auto& fac : found) {
            REQUIRE(std::count(expected.begin(), expected.end(), fac.poly) == 1);
            REQUIRE(fac.poly.degree() == 2 * static_cast<long>(fac.orbit_indices.size()) *
                                             static_cast<long>(n));
            for (std::size_t i : fac.orbit_indices) {
                REQUIRE_FALSE(used.count(i));
                used.insert(i);
            }
        }
        REQUIRE(used.size() == orbits.size());

        // every reconstructed factor divides the diagonal polynomial
        IntPoly rn = chain.rn(n);
        for (const auto& fac : found) REQUIRE_NOTHROW(IntPoly::divexact(rn, fac.poly));
    }
}

TEST_CASE("reconstruction failure is reported", "[padic2]") {
    WittRing ring(3, 128);
    std::vector<std::vector<Witt>> orbits;
    for (const Witt& s : orbit_seeds(ring)) orbits.push_back(lift_periodic(ring, s));
    orbits[0][0] = ring.add(orbits[0][0], ring.from_int(4));
    REQUIRE_THROWS_AS(reconstruct_factors(ring, orbits), periclass::NoIntegerCombination);
    REQUIRE_THROWS_AS(orbit_minpoly(ring, {orbits[0]}), periclass::NoIntegerCombination);
}
