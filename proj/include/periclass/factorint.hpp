#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

#include "periclass/errors.hpp"
#include "periclass/intpoly.hpp"
#include "periclass/modarith.hpp"
#include "periclass/resultant.hpp"

namespace periclass {

struct Factorization {
    int unit = 1;
    mpz_class content = 1;
    std::vector<std::pair<IntPoly, int>> factors;
    std::uint64_t seed = 0;

    IntPoly reassemble(const std::string& var = "x") const {
        IntPoly prod = IntPoly::constant(content * unit, var);
        for (const auto& [g, m] : factors)
            for (int i = 0; i < m; ++i) prod = prod * g;
        return prod;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["content"] = content.get_str();
        j["unit"] = unit;
        j["factors"] = nlohmann::ordered_json::array();
        for (const auto& [g, m] : factors) {
            nlohmann::ordered_json e;
            e["poly"] = g.to_json();
            e["mult"] = m;
            j["factors"].push_back(std::move(e));
        }
        j["seed"] = seed;
        return j;
    }
};

// orders polynomials by degree, then by coefficients from the top down
struct PolyLess {
    bool operator()(const IntPoly& a, const IntPoly& b) const {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        for (long i = a.degree(); i >= 0; --i) {
            int c = cmp(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]);
            if (c != 0) return c < 0;
        }
        return false;
    }
};

inline std::vector<std::pair<IntPoly, int>> squarefree(const IntPoly& f) {
    if (f.is_zero()) throw Error("squarefree: zero polynomial");
    std::vector<std::pair<IntPoly, int>> out;
    if (f.degree() == 0) return out;
    IntPoly b = f.normalized_primitive().first;
    IntPoly d0 = poly_gcd(b, b.derivative());
    if (d0.degree() == 0) {
        out.emplace_back(b, 1);
        return out;
    }
    IntPoly c = IntPoly::divexact(b.derivative(), d0);
    b = IntPoly::divexact(b, d0);
    IntPoly z = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        IntPoly a = poly_gcd(b, z);
        if (a.degree() > 0) out.emplace_back(a, i);
        b = IntPoly::divexact(b, a);
        c = IntPoly::divexact(z, a);
        z = c - b.derivative();
        ++i;
    }
    return out;
}

namespace detail {

inline modarith::FpPoly to_fp(const IntPoly& f, std::uint64_t p) {
    modarith::FpPoly r(f.coeffs().size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = modarith::mpz_mod_u(f.coeffs()[i], p);
    modarith::fp_normalize(r);
    return r;
}

// reduction of f mod p keeps the degree and stays coprime to its derivative
inline bool usable_prime(const IntPoly& f, std::uint64_t p, modarith::FpPoly* image = nullptr) {
    using namespace modarith;
    FpPoly fb = to_fp(f, p);
    if (fp_deg(fb) != f.degree()) return false;
    FpPoly d = fp_gcd(fb, fp_deriv(fb, p), p);
    if (fp_deg(d) != 0) return false;
    if (image) *image = fp_monic(fb, p);
    return true;
}

// splits a squarefree monic polynomial into (product of irreducibles of degree d, d) pairs
inline std::vector<std::pair<modarith::FpPoly, long>> distinct_degree(const modarith::FpPoly& f,
                                                                      std::uint64_t p) {
    using namespace modarith;
    std::vector<std::pair<FpPoly, long>> out;
    FpPoly rest = f;
    const FpPoly x = {0, 1};
    FpPoly h = x;
    long d = 0;
    while (fp_deg(rest) > 0) {
        ++d;
        if (2 * d > fp_deg(rest)) {
            out.emplace_back(rest, fp_deg(rest));
            break;
        }
        h = fp_powmod(h, mpz_class(static_cast<unsigned long>(p)), rest, p);
        FpPoly s = fp_gcd(fp_sub(h, x, p), rest, p);
        if (fp_deg(s) > 0) {
            out.emplace_back(s, d);
            FpPoly q = fp_divmod_inplace(rest, s, p);
            rest = fp_monic(q, p);
            h = fp_rem(h, rest, p);
        }
    }
    return out;
}

inline std::vector<long> modular_degree_pattern(const modarith::FpPoly& f, std::uint64_t p) {
    std::vector<long> degs;
    for (const auto& [prod, d] : distinct_degree(f, p))
        for (long i = 0; i < modarith::fp_deg(prod) / d; ++i) degs.push_back(d);
    return degs;
}

// Cantor-Zassenhaus split of a monic product of degree-d irreducibles
inline void equal_degree(const modarith::FpPoly& g, long d, std::uint64_t p, std::mt19937_64& rng,
                         std::vector<modarith::FpPoly>& out) {
    using namespace modarith;
    if (fp_deg(g) == d) {
        out.push_back(fp_monic(g, p));
        return;
    }
    mpz_class e;
    mpz_ui_pow_ui(e.get_mpz_t(), p, static_cast<unsigned long>(d));
    e = (e - 1) / 2;
    std::uniform_int_distribution<std::uint64_t> coeff(0, p - 1);
    for (;;) {
        FpPoly a(static_cast<std::size_t>(fp_deg(g)));
        for (auto& c : a) c = coeff(rng);
        fp_normalize(a);
        if (fp_deg(a) < 1) continue;
        FpPoly b = fp_powmod(a, e, g, p);
        b = fp_sub(b, FpPoly{1}, p);
        FpPoly s = fp_gcd(b, g, p);
        if (fp_deg(s) > 0 && fp_deg(s) < fp_deg(g)) {
            equal_degree(s, d, p, rng, out);
            FpPoly rest = g;
            FpPoly q = fp_divmod_inplace(rest, s, p);
            equal_degree(fp_monic(q, p), d, p, rng, out);
            return;
        }
    }
}

inline bool fp_less(const modarith::FpPoly& a, const modarith::FpPoly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

inline std::vector<modarith::FpPoly> factor_mod_p_impl(const IntPoly& f, std::uint64_t p,
                                                       std::mt19937_64& rng) {
    using namespace modarith;
    if (p < 3 || mpz_probab_prime_p(mpz_class(static_cast<unsigned long>(p)).get_mpz_t(), 30) == 0)
        throw Error("factor_mod_p: modulus must be an odd prime");
    FpPoly image;
    if (!usable_prime(f, p, &image))
        throw NotSquarefreeModP("polynomial drops degree or has repeated factors mod " +
                                std::to_string(p));
    std::vector<FpPoly> out;
    for (const auto& [prod, d] : distinct_degree(image, p)) equal_degree(prod, d, p, rng, out);
    std::sort(out.begin(), out.end(), fp_less);
    return out;
}

struct PrimeScan {
    std::uint64_t best_p = 0;
    std::size_t best_count = 0;
    std::vector<std::pair<std::uint64_t, std::vector<long>>> patterns;
};

// first ten odd primes where the reduction stays squarefree with full degree,
// keeping the one with the fewest modular factors
inline PrimeScan scan_primes(const IntPoly& g) {
    PrimeScan out;
    std::uint64_t p = 3;
    long scanned = 0;
    while (out.patterns.size() < 10) {
        if (++scanned > 100000)
            throw Error("factor: no usable prime found for " + g.to_string());
        modarith::FpPoly image;
        if (usable_prime(g, p, &image)) {
            auto degs = modular_degree_pattern(image, p);
            if (out.best_p == 0 || degs.size() < out.best_count) {
                out.best_p = p;
                out.best_count = degs.size();
            }
            out.patterns.emplace_back(p, std::move(degs));
        }
        p = modarith::prime_after(p);
    }
    return out;
}

// degrees realizable as subset sums in every scanned modular degree pattern
inline std::vector<char> feasible_degrees(long n,
                                          const std::vector<std::pair<std::uint64_t, std::vector<long>>>& patterns) {
    std::vector<char> feas(static_cast<std::size_t>(n) + 1, 1);
    for (const auto& [p, degs] : patterns) {
        std::vector<char> dp(static_cast<std::size_t>(n) + 1, 0);
        dp[0] = 1;
        for (long d : degs)
            for (long s = n; s >= d; --s)
                if (dp[static_cast<std::size_t>(s - d)]) dp[static_cast<std::size_t>(s)] = 1;
        for (long s = 0; s <= n; ++s)
            feas[static_cast<std::size_t>(s)] =
                feas[static_cast<std::size_t>(s)] && dp[static_cast<std::size_t>(s)];
    }
    return feas;
}

using MZ = std::vector<mpz_class>; // coefficients reduced into [0, M)

inline void mz_trim(MZ& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline MZ mz_from_fp(const modarith::FpPoly& a) {
    MZ r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = mpz_class(static_cast<unsigned long>(a[i]));
    return r;
}

inline MZ mz_reduce(const IntPoly& f, const mpz_class& M) {
    MZ r(f.coeffs().size());
    for (std::size_t i = 0; i < r.size(); ++i)
        mpz_fdiv_r(r[i].get_mpz_t(), f.coeffs()[i].get_mpz_t(), M.get_mpz_t());
    mz_trim(r);
    return r;
}

inline MZ mz_rereduce(const MZ& a, const mpz_class& M) {
    MZ r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        mpz_fdiv_r(r[i].get_mpz_t(), a[i].get_mpz_t(), M.get_mpz_t());
    mz_trim(r);
    return r;
}

inline MZ mz_add(const MZ& a, const MZ& b, const mpz_class& M) {
    MZ r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = (i < a.size() ? a[i] : mpz_class(0)) + (i < b.size() ? b[i] : mpz_class(0));
        if (r[i] >= M) r[i] -= M;
    }
    mz_trim(r);
    return r;
}

inline MZ mz_sub(const MZ& a, const MZ& b, const mpz_class& M) {
    MZ r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = (i < a.size() ? a[i] : mpz_class(0)) - (i < b.size() ? b[i] : mpz_class(0));
        if (r[i] < 0) r[i] += M;
    }
    mz_trim(r);
    return r;
}

inline MZ mz_mul(const MZ& a, const MZ& b, const mpz_class& M) {
    if (a.empty() || b.empty()) return {};
    MZ r(a.size() + b.size() - 1, mpz_class(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    for (auto& c : r) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), M.get_mpz_t());
    mz_trim(r);
    return r;
}

// division by a monic divisor; a becomes the remainder
inline MZ mz_divmod_monic(MZ& a, const MZ& b, const mpz_class& M) {
    if (b.empty() || b.back() != 1) throw Error("mz_divmod_monic: divisor must be monic");
    if (a.size() < b.size()) return {};
    std::size_t db = b.size() - 1;
    MZ q(a.size() - db, mpz_class(0));
    for (std::size_t k = q.size(); k-- > 0;) {
        mpz_class f = a[k + db];
        if (f == 0) continue;
        q[k] = f;
        for (std::size_t j = 0; j < b.size(); ++j) {
            a[k + j] -= f * b[j];
            mpz_fdiv_r(a[k + j].get_mpz_t(), a[k + j].get_mpz_t(), M.get_mpz_t());
        }
    }
    a.resize(db);
    mz_trim(a);
    mz_trim(q);
    return q;
}

inline std::pair<modarith::FpPoly, modarith::FpPoly> fp_bezout(const modarith::FpPoly& a,
                                                               const modarith::FpPoly& b,
                                                               std::uint64_t p) {
    using namespace modarith;
    FpPoly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
        FpPoly rem = r0;
        FpPoly q = fp_divmod_inplace(rem, r1, p);
        r0 = std::move(r1);
        r1 = std::move(rem);
        FpPoly s2 = fp_sub(s0, fp_mul(q, s1, p), p);
        s0 = std::move(s1);
        s1 = std::move(s2);
        FpPoly t2 = fp_sub(t0, fp_mul(q, t1, p), p);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (fp_deg(r0) != 0) throw Error("hensel: local factors are not coprime");
    std::uint64_t u = invmod(r0[0], p);
    return {fp_scale(s0, u, p), fp_scale(t0, u, p)};
}

// one quadratic lifting step: from f = g h and s g + t h = 1 valid mod m
// to the same relations mod m2 = m^2, keeping h monic
inline void hensel_step(const mpz_class& m2, const MZ& f, MZ& g, MZ& h, MZ& s, MZ& t) {
    MZ e = mz_sub(f, mz_mul(g, h, m2), m2);
    MZ se = mz_mul(s, e, m2);
    MZ q = mz_divmod_monic(se, h, m2);
    g = mz_add(mz_add(g, mz_mul(t, e, m2), m2), mz_mul(q, g, m2), m2);
    h = mz_add(h, se, m2);
    MZ b = mz_sub(mz_add(mz_mul(s, g, m2), mz_mul(t, h, m2), m2), MZ{mpz_class(1)}, m2);
    MZ sb = mz_mul(s, b, m2);
    MZ c = mz_divmod_monic(sb, h, m2);
    s = mz_sub(s, sb, m2);
    t = mz_sub(mz_sub(t, mz_mul(t, b, m2), m2), mz_mul(c, g, m2), m2);
}

// lifts the mod-p factorization up the product tree so that
// fM = lc(fM) * prod(out) holds mod M = p^(2^dsteps), out entries monic except
// the leftmost leaf, which carries the leading coefficient
inline void hensel_tree(const MZ& fM, const std::vector<modarith::FpPoly>& leaves, std::size_t lo,
                        std::size_t hi, std::uint64_t p, int dsteps, std::vector<MZ>& out) {
    using namespace modarith;
    if (hi - lo == 1) {
        out[lo] = fM;
        return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t lcp = modarith::mpz_mod_u(fM.back(), p);
    FpPoly g0 = {lcp};
    for (std::size_t i = lo; i < mid; ++i) g0 = fp_mul(g0, leaves[i], p);
    FpPoly h0 = {1};
    for (std::size_t i = mid; i < hi; ++i) h0 = fp_mul(h0, leaves[i], p);
    auto [s0, t0] = fp_bezout(g0, h0, p);
    MZ g = mz_from_fp(g0), h = mz_from_fp(h0), s = mz_from_fp(s0), t = mz_from_fp(t0);
    mpz_class m(static_cast<unsigned long>(p));
    for (int j = 0; j < dsteps; ++j) {
        mpz_class m2 = m * m;
        hensel_step(m2, mz_rereduce(fM, m2), g, h, s, t);
        m = m2;
    }
    hensel_tree(g, leaves, lo, mid, p, dsteps, out);
    hensel_tree(h, leaves, mid, hi, p, dsteps, out);
}

inline IntPoly mz_center(const MZ& a, const mpz_class& M, const std::string& var) {
    std::vector<mpz_class> c(a.begin(), a.end());
    for (auto& x : c)
        if (2 * x > M) x -= M;
    return IntPoly(std::move(c), var);
}

// Zassenhaus factorization of a primitive squarefree polynomial with positive lc
inline std::vector<IntPoly> zassenhaus(IntPoly g, std::mt19937_64& rng) {
    using namespace modarith;
    std::vector<IntPoly> out;
    if (g.degree() == 1) {
        out.push_back(std::move(g));
        return out;
    }
    PrimeScan scan = scan_primes(g);
    if (scan.best_count == 1) {
        out.push_back(std::move(g));
        return out;
    }
    const std::uint64_t p = scan.best_p;
    const long n = g.degree();
    std::vector<char> feas = feasible_degrees(n, scan.patterns);
    std::vector<FpPoly> leaves = factor_mod_p_impl(g, p, rng);

    // lift past twice the factor coefficient bound 2^n * |f|_2 * |lc|
    mpz_class norm;
    mpz_sqrt(norm.get_mpz_t(), g.norm2_sq().get_mpz_t());
    norm += 1;
    mpz_class bound = (mpz_class(1) << static_cast<unsigned long>(n)) * norm * abs(g.lc());
    bound *= 2;
    unsigned long K = 1;
    mpz_class pk(static_cast<unsigned long>(p));
    while (pk <= bound) {
        pk *= static_cast<unsigned long>(p);
        ++K;
    }
    int dsteps = 0;
    while ((1ul << dsteps) < K) ++dsteps;
    mpz_class M;
    mpz_ui_pow_ui(M.get_mpz_t(), p, 1ul << dsteps);

    std::vector<MZ> lifted(leaves.size());
    hensel_tree(mz_reduce(g, M), leaves, 0, leaves.size(), p, dsteps, lifted);
    mpz_class lcM, lcInv;
    mpz_fdiv_r(lcM.get_mpz_t(), g.lc().get_mpz_t(), M.get_mpz_t());
    if (mpz_invert(lcInv.get_mpz_t(), lcM.get_mpz_t(), M.get_mpz_t()) == 0)
        throw Error("hensel: leading coefficient not invertible");
    for (auto& c : lifted[0]) {
        c *= lcInv;
        mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), M.get_mpz_t());
    }
    mz_trim(lifted[0]);

    std::vector<std::size_t> alive(lifted.size());
    for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
    auto leaf_deg = [&](std::size_t i) { return static_cast<long>(lifted[i].size()) - 1; };

    std::size_t k = 1;
    while (2 * k <= alive.size()) {
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        bool removed = false;
        for (;;) {
            long degsum = 0;
            for (std::size_t i = 0; i < k; ++i) degsum += leaf_deg(alive[idx[i]]);
            bool plausible = degsum <= n && feas[static_cast<std::size_t>(degsum)];
            if (plausible && !g.is_zero()) {
                mpz_class c0 = lcM;
                for (std::size_t i = 0; i < k; ++i) {
                    c0 *= lifted[alive[idx[i]]][0];
                    mpz_fdiv_r(c0.get_mpz_t(), c0.get_mpz_t(), M.get_mpz_t());
                }
                if (2 * c0 > M) c0 -= M;
                mpz_class target = g.lc() * g[0];
                if (c0 != 0 && !mpz_divisible_p(target.get_mpz_t(), c0.get_mpz_t()))
                    plausible = false;
                if (c0 == 0 && target != 0) plausible = false;
            }
            if (plausible) {
                MZ prod{lcM};
                for (std::size_t i = 0; i < k; ++i) prod = mz_mul(prod, lifted[alive[idx[i]]], M);
                IntPoly cand = mz_center(prod, M, g.var).normalized_primitive().first;
                bool ok = true;
                IntPoly quot;
                try {
                    quot = IntPoly::divexact(g, cand);
                } catch (const NotDivisible&) {
                    ok = false;
                }
                if (ok && cand.degree() >= 1) {
                    out.push_back(cand);
                    g = quot.normalized_primitive().first;
                    mpz_fdiv_r(lcM.get_mpz_t(), g.lc().get_mpz_t(), M.get_mpz_t());
                    std::vector<std::size_t> next;
                    for (std::size_t i = 0, j = 0; i < alive.size(); ++i) {
                        if (j < k && idx[j] == i) {
                            ++j;
                            continue;
                        }
                        next.push_back(alive[i]);
                    }
                    alive = std::move(next);
                    removed = true;
                    break;
                }
            }
            // next k-combination in lexicographic order
            std::size_t i = k;
            while (i-- > 0) {
                if (idx[i] != i + alive.size() - k) {
                    ++idx[i];
                    for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                    break;
                }
                if (i == 0) {
                    i = k + 1;
                    break;
                }
            }
            if (i == k + 1) break;
        }
        if (!removed) ++k;
    }
    if (g.degree() >= 1) out.push_back(std::move(g));
    return out;
}

} // namespace detail

inline std::vector<modarith::FpPoly> factor_mod_p(const IntPoly& f, std::uint64_t p,
                                                  std::uint64_t seed = 0x70636c61737365ull) {
    std::mt19937_64 rng(seed ^ p);
    return detail::factor_mod_p_impl(f, p, rng);
}

struct FactorOptions {
    std::uint64_t seed = 0x70636c61737365ull;
    std::vector<IntPoly> hints; // candidate divisors tried by exact division first
};

inline Factorization factor(const IntPoly& f, const FactorOptions& opt = {}) {
    if (f.is_zero()) throw Error("factor: zero polynomial");
    Factorization out;
    out.seed = opt.seed;
    auto [g, sc] = f.normalized_primitive();
    out.unit = sc < 0 ? -1 : 1;
    out.content = abs(sc);
    if (g.degree() == 0) return out;

    std::mt19937_64 rng(opt.seed);
    std::vector<std::pair<IntPoly, int>> work;
    for (const IntPoly& hraw : opt.hints) {
        if (hraw.degree() < 1) continue;
        IntPoly h = hraw.normalized_primitive().first;
        int m = 0;
        for (;;) {
            try {
                IntPoly q = IntPoly::divexact(g, h);
                g = q.normalized_primitive().first;
                ++m;
            } catch (const NotDivisible&) {
                break;
            }
        }
        if (m > 0) work.emplace_back(h, m);
    }
    if (g.degree() >= 1) work.emplace_back(g, 1);

    std::map<IntPoly, long, PolyLess> merged;
    for (const auto& [piece, mult] : work) {
        std::vector<std::pair<IntPoly, int>> parts;
        bool squarefree_known = false;
        std::uint64_t p = 3;
        for (int tries = 0; tries < 1200; ++tries, p = modarith::prime_after(p)) {
            if (detail::usable_prime(piece, p)) {
                squarefree_known = true;
                break;
            }
        }
        if (squarefree_known || piece.degree() == 1)
            parts.emplace_back(piece, 1);
        else
            parts = squarefree(piece);
        for (const auto& [part, pm] : parts)
            for (IntPoly& irr : detail::zassenhaus(part, rng))
                merged[std::move(irr)] += static_cast<long>(mult) * pm;
    }
    for (auto& [poly, m] : merged) out.factors.emplace_back(poly, static_cast<int>(m));

    if (!(out.reassemble(f.var) == f)) throw Error("factor: reconstruction check failed");
    return out;
}

} // namespace periclass
