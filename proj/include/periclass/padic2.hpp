#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "periclass/errors.hpp"
#include "periclass/intpoly.hpp"

namespace periclass {

// element of an unramified 2-adic coefficient ring, coordinates in the
// power basis of t, each reduced mod 2^prec
using Witt = std::vector<mpz_class>;

// lexicographically smallest polynomials of each degree irreducible mod 2,
// 0/1 coefficients ascending
inline const std::vector<std::vector<int>>& defining_mod2_polys() {
    static const std::vector<std::vector<int>> table = {
        {},
        {0, 1},
        {1, 1, 1},
        {1, 1, 0, 1},
        {1, 1, 0, 0, 1},
        {1, 0, 1, 0, 0, 1},
        {1, 1, 0, 0, 0, 0, 1},
        {1, 1, 0, 0, 0, 0, 0, 1},
        {1, 1, 0, 1, 1, 0, 0, 0, 1},
        {1, 1, 0, 0, 0, 0, 0, 0, 0, 1},
        {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1},
        {1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1},
        {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1},
        {1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1},
        {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1},
        {1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
        {1, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
    };
    return table;
}

class WittRing {
public:
    WittRing(int n, long prec) : n_(n), prec_(prec) {
        if (n < 1 || n > 16) throw Error("WittRing: residue degree out of the shipped table");
        if (prec < 8) throw Error("WittRing: precision too small");
        const auto& f = defining_mod2_polys()[static_cast<std::size_t>(n)];
        fn_.assign(f.begin(), f.end());
        red_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) red_[static_cast<std::size_t>(i)] = reduce_int(-f[static_cast<std::size_t>(i)]);
        tpow_.clear();
        std::vector<mpz_class> cur = red_;
        for (int k = n; k < 2 * n - 1; ++k) {
            tpow_.push_back(cur);
            std::vector<mpz_class> nxt(static_cast<std::size_t>(n));
            for (int i = n - 1; i >= 1; --i) nxt[static_cast<std::size_t>(i)] = cur[static_cast<std::size_t>(i - 1)];
            nxt[0] = 0;
            const mpz_class top = cur[static_cast<std::size_t>(n - 1)];
            if (top != 0)
                for (int i = 0; i < n; ++i) {
                    nxt[static_cast<std::size_t>(i)] += top * red_[static_cast<std::size_t>(i)];
                    reduce(nxt[static_cast<std::size_t>(i)]);
                }
            cur = std::move(nxt);
        }
        build_series_terms();
        build_frobenius();
    }

    int n() const { return n_; }
    long prec() const { return prec_; }

    Witt zero() const { return Witt(static_cast<std::size_t>(n_)); }

    Witt one() const {
        Witt w = zero();
        w[0] = 1;
        return w;
    }

    Witt from_int(const mpz_class& a) const {
        Witt w = zero();
        w[0] = a;
        reduce(w[0]);
        return w;
    }

    Witt from_bits(unsigned long mask) const {
        Witt w = zero();
        for (int i = 0; i < n_; ++i) w[static_cast<std::size_t>(i)] = (mask >> i) & 1ul;
        return w;
    }

    unsigned long bits_of(const Witt& w) const {
        unsigned long mask = 0;
        for (int i = 0; i < n_; ++i)
            if (mpz_odd_p(w[static_cast<std::size_t>(i)].get_mpz_t())) mask |= 1ul << i;
        return mask;
    }

    Witt add(const Witt& a, const Witt& b) const {
        Witt r(static_cast<std::size_t>(n_));
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] = a[i] + b[i];
            reduce(r[i]);
        }
        return r;
    }

    Witt sub(const Witt& a, const Witt& b) const {
        Witt r(static_cast<std::size_t>(n_));
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] = a[i] - b[i];
            reduce(r[i]);
        }
        return r;
    }

    Witt neg(const Witt& a) const { return sub(zero(), a); }

    Witt smul(const mpz_class& s, const Witt& a) const {
        Witt r(static_cast<std::size_t>(n_));
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] = s * a[i];
            reduce(r[i]);
        }
        return r;
    }

    Witt mul(const Witt& a, const Witt& b) const {
        const std::size_t n = static_cast<std::size_t>(n_);
        std::vector<mpz_class> prod(2 * n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) prod[i + j] += a[i] * b[j];
        }
        Witt out(prod.begin(), prod.begin() + static_cast<long>(n));
        for (auto& c : out) reduce(c);
        for (std::size_t k = n; k < 2 * n - 1; ++k) {
            reduce(prod[k]);
            if (prod[k] == 0) continue;
            const auto& tp = tpow_[k - n];
            for (std::size_t i = 0; i < n; ++i) {
                out[i] += prod[k] * tp[i];
                reduce(out[i]);
            }
        }
        return out;
    }

    bool is_zero(const Witt& a) const {
        for (const auto& c : a)
            if (c != 0) return false;
        return true;
    }

    bool is_unit(const Witt& a) const {
        for (const auto& c : a)
            if (mpz_odd_p(c.get_mpz_t())) return true;
        return false;
    }

    long v2(const Witt& a) const {
        long v = prec_;
        for (const auto& c : a) {
            if (c == 0) continue;
            long b = static_cast<long>(mpz_scan1(c.get_mpz_t(), 0));
            v = std::min(v, b);
        }
        return v;
    }

    Witt inv(const Witt& a) const {
        if (!is_unit(a)) throw Error("WittRing: inverse of a non-unit");
        // residue-field inverse by exponentiation, then quadratic Hensel refinement
        Witt base = mod2(a);
        Witt x = one();
        mpz_class e = (mpz_class(1) << static_cast<unsigned long>(n_)) - 2;
        for (long bit = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
            x = mod2(mul(x, x));
            if (mpz_tstbit(e.get_mpz_t(), static_cast<unsigned long>(bit))) x = mod2(mul(x, base));
        }
        for (long k = 1; k < prec_; k *= 2) x = mul(x, sub(from_int(2), mul(a, x)));
        if (!(mul(a, x) == one())) throw Error("WittRing: inverse refinement failed");
        return x;
    }

    Witt div(const Witt& a, const Witt& b) const { return mul(a, inv(b)); }

    // the canonical lift of the squaring automorphism of the residue field
    Witt frobenius(const Witt& w) const {
        Witt acc = zero();
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] != 0) acc = add(acc, smul(w[i], frob_pows_[i]));
        return acc;
    }

    // scaled kernel series evaluated on units: -sum 2^(2k-2) C_{k-1} z^(4k-2)
    Witt eval_scaled(const Witt& z) const {
        Witt z2 = mul(z, z);
        Witt z4 = mul(z2, z2);
        Witt acc = zero();
        Witt p = z2;
        for (const auto& term : terms_) {
            acc = add(acc, smul(term.second, p));
            p = mul(p, z4);
        }
        return neg(acc);
    }

    Witt eval_scaled_prime(const Witt& z) const {
        Witt z2 = mul(z, z);
        Witt z4 = mul(z2, z2);
        Witt acc = zero();
        Witt p = z;
        for (const auto& [k, c] : terms_) {
            mpz_class ck = c * (4 * k - 2);
            reduce(ck);
            acc = add(acc, smul(ck, p));
            p = mul(p, z4);
        }
        return neg(acc);
    }

    // the kernel map itself on the open unit disc, via w = 2z
    Witt eval_disc(const Witt& w) const {
        if (v2(w) < 1) throw NotInDisc("element has valuation 0, outside the open unit disc");
        Witt z(static_cast<std::size_t>(n_));
        for (std::size_t i = 0; i < z.size(); ++i) mpz_fdiv_q_2exp(z[i].get_mpz_t(), w[i].get_mpz_t(), 1);
        return smul(2, eval_scaled(z));
    }

    // the involution (w + 1) / (w - 1) exchanging disc roots and unit roots
    Witt involution(const Witt& w) const { return div(add(w, one()), sub(w, one())); }

    Witt mod2(const Witt& a) const {
        Witt r(static_cast<std::size_t>(n_));
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = mpz_odd_p(a[i].get_mpz_t()) ? 1 : 0;
        return r;
    }

    void reduce(mpz_class& c) const {
        mpz_fdiv_r_2exp(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(prec_));
    }

    mpz_class centered(const mpz_class& c) const {
        mpz_class v = c;
        reduce(v);
        mpz_class half = mpz_class(1) << static_cast<unsigned long>(prec_ - 1);
        if (v >= half) v -= mpz_class(1) << static_cast<unsigned long>(prec_);
        return v;
    }

private:
    mpz_class reduce_int(long a) const {
        mpz_class c(a);
        reduce(c);
        return c;
    }

    void build_series_terms() {
        long k = 1;
        while (2 * k - 2 < prec_) {
            mpz_class cat;
            mpz_bin_uiui(cat.get_mpz_t(), static_cast<unsigned long>(2 * (k - 1)),
                         static_cast<unsigned long>(k - 1));
            cat /= k;
            mpz_class c = cat << static_cast<unsigned long>(2 * k - 2);
            reduce(c);
            terms_.emplace_back(k, std::move(c));
            ++k;
        }
    }

    void build_frobenius() {
        // Newton-lift the image of t: the root of the defining polynomial
        // congruent to t^2 mod 2
        Witt t = zero();
        Witt tt = zero();
        if (n_ == 1) {
            // base ring: the map is the identity
        } else {
            t[1] = 1;
            tt = mul(t, t);
        }
        Witt root = (n_ == 1) ? zero() : tt;
        auto eval_fn = [&](const Witt& x) {
            Witt acc = zero();
            for (int i = n_; i >= 0; --i) {
                acc = mul(acc, x);
                if (i == n_ || fn_[static_cast<std::size_t>(i)] != 0)
                    acc = add(acc, from_int(i == n_ ? 1 : fn_[static_cast<std::size_t>(i)]));
            }
            return acc;
        };
        auto eval_fn_prime = [&](const Witt& x) {
            Witt acc = zero();
            for (int i = n_; i >= 1; --i) {
                acc = mul(acc, x);
                long c = (i == n_) ? n_ : static_cast<long>(i) * fn_[static_cast<std::size_t>(i)];
                if (c != 0) acc = add(acc, from_int(c));
            }
            return acc;
        };
        if (n_ > 1) {
            long it = 0;
            for (;;) {
                Witt val = eval_fn(root);
                if (is_zero(val)) break;
                Witt der = eval_fn_prime(root);
                if (!is_unit(der)) throw PrecisionExhausted("frobenius lift: derivative is not a unit");
                root = sub(root, div(val, der));
                if (++it > prec_ + 8) throw PrecisionExhausted("frobenius lift did not converge");
            }
        }
        frob_pows_.resize(static_cast<std::size_t>(n_));
        frob_pows_[0] = one();
        for (int i = 1; i < n_; ++i) frob_pows_[static_cast<std::size_t>(i)] = mul(frob_pows_[static_cast<std::size_t>(i - 1)], root);
    }

    int n_;
    long prec_;
    std::vector<int> fn_;
    std::vector<mpz_class> red_;
    std::vector<std::vector<mpz_class>> tpow_;
    std::vector<std::pair<long, mpz_class>> terms_;
    std::vector<Witt> frob_pows_;
};

// representatives of the squaring-orbits of exact length n in the residue field
inline std::vector<Witt> orbit_seeds(const WittRing& ring) {
    const int n = ring.n();
    std::vector<bool> seen(1ul << n, false);
    std::vector<Witt> seeds;
    for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
        if (seen[mask]) continue;
        std::vector<unsigned long> orb;
        unsigned long cur = mask;
        do {
            orb.push_back(cur);
            Witt b = ring.from_bits(cur);
            cur = ring.bits_of(ring.mul(b, b));
        } while (cur != mask);
        for (unsigned long m : orb) seen[m] = true;
        if (static_cast<int>(orb.size()) == n) seeds.push_back(ring.from_bits(orb[0]));
    }
    return seeds;
}

// Newton-lifts the scaled orbit through a degree-n residue seed:
// solves iterate^n(z) = z, returning the n orbit points
inline std::vector<Witt> lift_periodic(const WittRing& ring, const Witt& seed) {
    const int n = ring.n();
    Witt z = seed;
    bool converged = false;
    for (long it = 0; it < 200; ++it) {
        std::vector<Witt> pts{z};
        for (int i = 0; i < n; ++i) pts.push_back(ring.eval_scaled(pts.back()));
        Witt phi = ring.sub(pts[static_cast<std::size_t>(n)], z);
        if (ring.is_zero(phi)) {
            converged = true;
            break;
        }
        Witt dphi = ring.one();
        for (int i = 0; i < n; ++i) dphi = ring.mul(dphi, ring.eval_scaled_prime(pts[static_cast<std::size_t>(i)]));
        dphi = ring.sub(dphi, ring.one());
        if (!ring.is_unit(dphi)) throw NewtonStall("periodic lift: derivative lost invertibility");
        z = ring.sub(z, ring.div(phi, dphi));
    }
    if (!converged) throw PrecisionExhausted("periodic lift did not converge");
    std::vector<Witt> orbit{z};
    for (int i = 0; i + 1 < n; ++i) orbit.push_back(ring.eval_scaled(orbit.back()));
    if (!(ring.eval_scaled(orbit.back()) == orbit.front()))
        throw Error("periodic lift: orbit failed to close");
    return orbit;
}

struct OrbitReport {
    std::vector<bool> point_ok;
    bool ok = true;
};

// checks that the kernel map agrees with the Frobenius lift on every orbit point
inline OrbitReport verify_frobenius(const WittRing& ring, const std::vector<Witt>& orbit) {
    OrbitReport rep;
    for (const Witt& z : orbit) {
        Witt pi = ring.smul(2, z);
        bool good = ring.eval_disc(pi) == ring.frobenius(pi);
        rep.point_ok.push_back(good);
        rep.ok = rep.ok && good;
    }
    return rep;
}

struct ValuationReport {
    std::vector<bool> point_ok;
    bool ok = true;
};

// local valuations of the disc roots and their involution partners
inline ValuationReport valuation_profile(const WittRing& ring, const std::vector<Witt>& orbit) {
    ValuationReport rep;
    for (const Witt& z : orbit) {
        Witt pi = ring.smul(2, z);
        Witt xi = ring.involution(pi);
        Witt pi2 = ring.mul(pi, pi);
        bool good = ring.v2(pi) == 1 && ring.v2(xi) == 0 &&
                    ring.v2(ring.sub(xi, ring.one())) == 1 &&
                    ring.v2(ring.add(xi, ring.one())) == 2 &&
                    ring.v2(ring.add(ring.one(), pi2)) == 0 &&
                    ring.v2(ring.sub(ring.one(), pi2)) == 0;
        rep.point_ok.push_back(good);
        rep.ok = rep.ok && good;
    }
    return rep;
}

inline std::optional<mpz_class> witt_to_int(const WittRing& ring, const Witt& w, int guard = 8) {
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i] != 0) return std::nullopt;
    mpz_class v = ring.centered(w[0]);
    mpz_class bound = mpz_class(1) << static_cast<unsigned long>(ring.prec() - guard);
    if (abs(v) > bound) return std::nullopt;
    return v;
}

inline std::optional<IntPoly> witt_poly_to_int(const WittRing& ring, const std::vector<Witt>& coeffs,
                                               int guard = 8) {
    std::vector<mpz_class> out;
    out.reserve(coeffs.size());
    for (const Witt& c : coeffs) {
        auto v = witt_to_int(ring, c, guard);
        if (!v) return std::nullopt;
        out.push_back(std::move(*v));
    }
    return IntPoly(std::move(out));
}

namespace detail {

inline std::vector<Witt> monic_from_roots(const WittRing& ring, const std::vector<Witt>& roots) {
    std::vector<Witt> coeffs{ring.one()};
    for (const Witt& r : roots) {
        std::vector<Witt> nxt(coeffs.size() + 1, ring.zero());
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            nxt[i + 1] = ring.add(nxt[i + 1], coeffs[i]);
            nxt[i] = ring.sub(nxt[i], ring.mul(coeffs[i], r));
        }
        coeffs = std::move(nxt);
    }
    return coeffs;
}

inline std::vector<Witt> union_roots(const WittRing& ring,
                                     const std::vector<std::vector<Witt>>& orbits,
                                     const std::vector<std::size_t>& which) {
    std::vector<Witt> roots;
    for (std::size_t i : which)
        for (const Witt& z : orbits[i]) {
            Witt pi = ring.smul(2, z);
            roots.push_back(pi);
            roots.push_back(ring.involution(pi));
        }
    return roots;
}

} // namespace detail

// smallest union of orbits containing the first one whose monic product over
// the disc roots and their involution partners rounds to integers
inline IntPoly orbit_minpoly(const WittRing& ring, const std::vector<std::vector<Witt>>& orbits,
                             int guard = 8) {
    if (orbits.empty()) throw Error("orbit_minpoly: empty orbit list");
    std::vector<std::size_t> rest;
    for (std::size_t i = 1; i < orbits.size(); ++i) rest.push_back(i);
    for (std::size_t extra = 0; extra <= rest.size(); ++extra) {
        std::vector<std::size_t> idx(extra);
        for (std::size_t i = 0; i < extra; ++i) idx[i] = i;
        for (;;) {
            std::vector<std::size_t> which{0};
            for (std::size_t i = 0; i < extra; ++i) which.push_back(rest[idx[i]]);
            auto coeffs = detail::monic_from_roots(ring, detail::union_roots(ring, orbits, which));
            if (auto ip = witt_poly_to_int(ring, coeffs, guard)) return *ip;
            std::size_t i = extra;
            while (i-- > 0) {
                if (idx[i] != i + rest.size() - extra) {
                    ++idx[i];
                    for (std::size_t j = i + 1; j < extra; ++j) idx[j] = idx[j - 1] + 1;
                    break;
                }
                if (i == 0) {
                    i = extra + 1;
                    break;
                }
            }
            if (i == extra + 1 || extra == 0) break;
        }
    }
    throw NoIntegerCombination("no union of orbits rounds to an integer polynomial");
}

struct ReconstructedFactor {
    IntPoly poly;
    std::vector<std::size_t> orbit_indices;
};

// greedily splits the full orbit pool into integer factors, smallest unions first
inline std::vector<ReconstructedFactor> reconstruct_factors(
    const WittRing& ring, const std::vector<std::vector<Witt>>& orbits, int guard = 8) {
    std::vector<ReconstructedFactor> found;
    std::vector<std::size_t> pool(orbits.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    std::size_t size = 1;
    while (!pool.empty()) {
        if (size > pool.size())
            throw NoIntegerCombination("no union of remaining orbits rounds to integers");
        bool hit = false;
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        for (;;) {
            std::vector<std::size_t> which;
            for (std::size_t i = 0; i < size; ++i) which.push_back(pool[idx[i]]);
            auto coeffs = detail::monic_from_roots(ring, detail::union_roots(ring, orbits, which));
            if (auto ip = witt_poly_to_int(ring, coeffs, guard)) {
                found.push_back({std::move(*ip), which});
                std::vector<std::size_t> next;
                for (std::size_t i = 0, j = 0; i < pool.size(); ++i) {
                    if (j < size && idx[j] == i) {
                        ++j;
                        continue;
                    }
                    next.push_back(pool[i]);
                }
                pool = std::move(next);
                hit = true;
                break;
            }
            std::size_t i = size;
            while (i-- > 0) {
                if (idx[i] != i + pool.size() - size) {
                    ++idx[i];
                    for (std::size_t j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
                    break;
                }
                if (i == 0) {
                    i = size + 1;
                    break;
                }
            }
            if (i == size + 1) break;
        }
        if (hit)
            size = 1;
        else
            ++size;
    }
    return found;
}

} // namespace periclass
