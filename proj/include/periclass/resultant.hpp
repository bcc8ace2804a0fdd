#pragma once

// Resultants and elimination.
//
// The core is the subresultant pseudo-remainder sequence, written once over a
// generic coefficient ring and instantiated for integers (univariate
// resultants), Z[x] (eliminating one variable of a bivariate pair), and
// Z[x, y] (composing two bivariate polynomials through a shared middle
// variable).  A separate evaluation/interpolation engine computes the same
// composition modulo word primes and reassembles the integer result by CRT
// with an extra confirming prime; the two routes are kept independent so each
// can check the other.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "periclass/bipoly.hpp"
#include "periclass/errors.hpp"
#include "periclass/intpoly.hpp"
#include "periclass/modarith.hpp"

namespace periclass {

namespace ringops {

struct MpzRing {
    using T = mpz_class;
    static T zero() { return 0; }
    static T one() { return 1; }
    static bool is_zero(const T& a) { return a == 0; }
    static T mul(const T& a, const T& b) { return a * b; }
    static T sub(const T& a, const T& b) { return a - b; }
    static T neg(const T& a) { return -a; }
    static T divexact(const T& a, const T& b) {
        if (b == 0 || !mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()))
            throw NotDivisible("integer division not exact");
        T q;
        mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return q;
    }
};

struct IntPolyRing {
    using T = IntPoly;
    static T zero() { return IntPoly::zero(); }
    static T one() { return IntPoly::constant(1); }
    static bool is_zero(const T& a) { return a.is_zero(); }
    static T mul(const T& a, const T& b) { return a * b; }
    static T sub(const T& a, const T& b) { return a - b; }
    static T neg(const T& a) { return -a; }
    static T divexact(const T& a, const T& b) { return IntPoly::divexact(a, b); }
};

struct BiPolyRing {
    using T = BiPoly;
    static T zero() { return BiPoly::zero(); }
    static T one() { return BiPoly::constant(1); }
    static bool is_zero(const T& a) { return a.is_zero(); }
    static T mul(const T& a, const T& b) { return a * b; }
    static T sub(const T& a, const T& b) { return a - b; }
    static T neg(const T& a) { return -a; }
    static T divexact(const T& a, const T& b) { return BiPoly::divexact(a, b); }
};

} // namespace ringops

namespace detail {

template <class Ops>
using RPoly = std::vector<typename Ops::T>;

template <class Ops>
void rp_normalize(RPoly<Ops>& p) {
    while (!p.empty() && Ops::is_zero(p.back())) p.pop_back();
}

template <class Ops>
long rp_deg(const RPoly<Ops>& p) {
    return static_cast<long>(p.size()) - 1;
}

template <class Ops>
typename Ops::T rp_pow(const typename Ops::T& a, long e) {
    typename Ops::T r = Ops::one();
    for (long i = 0; i < e; ++i) r = Ops::mul(r, a);
    return r;
}

// pseudo-remainder: returns lc(B)^(deg A - deg B + 1) * A mod B
template <class Ops>
RPoly<Ops> rp_prem(RPoly<Ops> A, const RPoly<Ops>& B) {
    long e = rp_deg<Ops>(A) - rp_deg<Ops>(B) + 1;
    const typename Ops::T& lb = B.back();
    while (!A.empty() && rp_deg<Ops>(A) >= rp_deg<Ops>(B)) {
        long d = rp_deg<Ops>(A) - rp_deg<Ops>(B);
        typename Ops::T la = A.back();
        RPoly<Ops> next(A.size() - 1);
        for (long i = 0; i < rp_deg<Ops>(A); ++i) {
            typename Ops::T t = Ops::mul(lb, A[static_cast<std::size_t>(i)]);
            if (i >= d && i - d <= rp_deg<Ops>(B))
                t = Ops::sub(t, Ops::mul(la, B[static_cast<std::size_t>(i - d)]));
            next[static_cast<std::size_t>(i)] = std::move(t);
        }
        rp_normalize<Ops>(next);
        A = std::move(next);
        --e;
    }
    if (e > 0) {
        typename Ops::T s = rp_pow<Ops>(lb, e);
        for (auto& c : A) c = Ops::mul(c, s);
    }
    return A;
}

template <class Ops>
RPoly<Ops> rp_divexact_scalar(const RPoly<Ops>& p, const typename Ops::T& s) {
    RPoly<Ops> r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = Ops::divexact(p[i], s);
    return r;
}

// subresultant PRS resultant of A and B, contents not stripped
template <class Ops>
typename Ops::T resultant_prs(RPoly<Ops> A, RPoly<Ops> B) {
    using T = typename Ops::T;
    rp_normalize<Ops>(A);
    rp_normalize<Ops>(B);
    if (A.empty() || B.empty()) return Ops::zero();
    bool negate = false;
    if (rp_deg<Ops>(A) < rp_deg<Ops>(B)) {
        if ((rp_deg<Ops>(A) & 1) && (rp_deg<Ops>(B) & 1)) negate = !negate;
        std::swap(A, B);
    }
    if (rp_deg<Ops>(B) == 0) {
        T r = rp_pow<Ops>(B[0], rp_deg<Ops>(A));
        return negate ? Ops::neg(r) : r;
    }
    T g = Ops::one(), h = Ops::one();
    while (true) {
        long dA = rp_deg<Ops>(A), dB = rp_deg<Ops>(B);
        long delta = dA - dB;
        if ((dA & 1) && (dB & 1)) negate = !negate;
        RPoly<Ops> R = rp_prem<Ops>(A, B);
        if (R.empty()) return Ops::zero();
        T divisor = Ops::mul(g, rp_pow<Ops>(h, delta));
        A = std::move(B);
        B = rp_divexact_scalar<Ops>(R, divisor);
        g = A.back();
        if (delta == 1)
            h = g;
        else if (delta > 1)
            h = Ops::divexact(rp_pow<Ops>(g, delta), rp_pow<Ops>(h, delta - 1));
        if (rp_deg<Ops>(B) == 0) break;
    }
    long dA = rp_deg<Ops>(A);
    T res = rp_pow<Ops>(B[0], dA);
    if (dA >= 2) res = Ops::divexact(res, rp_pow<Ops>(h, dA - 1));
    return negate ? Ops::neg(res) : res;
}

} // namespace detail

inline mpz_class resultant(const IntPoly& f, const IntPoly& g) {
    if (f.is_zero() || g.is_zero()) return 0;
    auto [fp, fc] = f.normalized_primitive();
    auto [gp, gc] = g.normalized_primitive();
    mpz_class scale = 1;
    for (long i = 0; i < g.degree(); ++i) scale *= fc;
    for (long i = 0; i < f.degree(); ++i) scale *= gc;
    return scale * detail::resultant_prs<ringops::MpzRing>(fp.coeffs(), gp.coeffs());
}

// (-1)^(n(n-1)/2) Res(f, f') / lc(f) for deg f >= 1
inline mpz_class discriminant(const IntPoly& f) {
    long n = f.degree();
    if (n < 1) throw Error("discriminant needs degree >= 1");
    mpz_class r = resultant(f, f.derivative());
    mpz_class d = ringops::MpzRing::divexact(r, f.lc());
    return ((n * (n - 1) / 2) % 2) ? mpz_class(-d) : d;
}

// eliminate y from a pair of polynomials in (x, y); result in x
inline IntPoly resultant_y(const BiPoly& f, const BiPoly& g) {
    if (f.is_zero() || g.is_zero()) return IntPoly::zero(f.xvar);
    IntPoly r = detail::resultant_prs<ringops::IntPolyRing>(f.y_coeffs(), g.y_coeffs());
    r.var = f.xvar;
    return r;
}

inline IntPoly resultant_x(const BiPoly& f, const BiPoly& g) {
    return resultant_y(f.swap_vars(), g.swap_vars());
}

// Res_t(f(x, t), g(t, y)): the second variable of f is identified with the
// first variable of g and eliminated
inline BiPoly resultant_compose(const BiPoly& f, const BiPoly& g) {
    if (f.is_zero() || g.is_zero()) return BiPoly::zero();
    std::vector<IntPoly> fc = f.y_coeffs();
    std::vector<IntPoly> gc = g.x_coeffs();
    detail::RPoly<ringops::BiPolyRing> A(fc.size()), B(gc.size());
    for (std::size_t k = 0; k < fc.size(); ++k) A[k] = BiPoly::from_x_poly(fc[k]);
    for (std::size_t k = 0; k < gc.size(); ++k) B[k] = BiPoly::from_y_poly(gc[k]);
    BiPoly r = detail::resultant_prs<ringops::BiPolyRing>(std::move(A), std::move(B));
    r.xvar = f.xvar;
    r.yvar = g.yvar;
    return r;
}

struct ComposeOptions {
    // 0 means unlimited; otherwise throw InsufficientPrecision when the CRT
    // image has not stabilized after this many primes
    int max_primes = 0;
};

namespace detail {

inline std::vector<std::vector<std::uint64_t>> reduce_rows(const std::vector<IntPoly>& cs,
                                                           std::uint64_t p) {
    std::vector<std::vector<std::uint64_t>> rows(cs.size());
    for (std::size_t k = 0; k < cs.size(); ++k) {
        rows[k].resize(static_cast<std::size_t>(cs[k].degree() + 1));
        for (long i = 0; i <= cs[k].degree(); ++i)
            rows[k][static_cast<std::size_t>(i)] =
                modarith::mpz_mod_u(cs[k][static_cast<std::size_t>(i)], p);
    }
    return rows;
}

inline std::uint64_t row_eval(const std::vector<std::uint64_t>& row, std::uint64_t x,
                              std::uint64_t p) {
    std::uint64_t acc = 0;
    for (std::size_t i = row.size(); i-- > 0;) acc = modarith::addmod(modarith::mulmod(acc, x, p), row[i], p);
    return acc;
}

} // namespace detail

inline BiPoly resultant_compose_modular(const BiPoly& f, const BiPoly& g,
                                        const ComposeOptions& opt = {}) {
    using namespace modarith;
    if (f.is_zero() || g.is_zero()) return BiPoly::zero();
    long dtf = f.degree_y(), dtg = g.degree_x();
    std::vector<IntPoly> fc = f.y_coeffs();
    std::vector<IntPoly> gc = g.x_coeffs();
    if (dtf == 0 || dtg == 0) {
        // one side is free of the eliminated variable
        if (dtf == 0 && dtg == 0) return BiPoly::constant(1);
        if (dtf == 0) {
            IntPoly base = fc[0];
            IntPoly acc = IntPoly::constant(1, base.var);
            for (long i = 0; i < dtg; ++i) acc = acc * base;
            BiPoly r = BiPoly::from_x_poly(acc);
            r.xvar = f.xvar;
            r.yvar = g.yvar;
            return r;
        }
        IntPoly base = gc[0];
        IntPoly acc = IntPoly::constant(1, base.var);
        for (long i = 0; i < dtf; ++i) acc = acc * base;
        BiPoly r = BiPoly::from_y_poly(acc);
        r.xvar = f.xvar;
        r.yvar = g.yvar;
        return r;
    }

    long dx = f.degree_x() * dtg;
    long dy = g.degree_y() * dtf;
    const IntPoly& lead_f = fc[static_cast<std::size_t>(dtf)];
    const IntPoly& lead_g = gc[static_cast<std::size_t>(dtg)];

    std::vector<std::vector<mpz_class>> cur;
    mpz_class modulus = 0;
    int primes_used = 0;
    std::uint64_t p = (1ull << 61);

    while (true) {
        p = prime_after(p);
        auto frows = detail::reduce_rows(fc, p);
        auto grows = detail::reduce_rows(gc, p);
        if (frows[static_cast<std::size_t>(dtf)].empty() ||
            grows[static_cast<std::size_t>(dtg)].empty())
            continue; // leading coefficient vanishes identically mod p

        std::vector<std::uint64_t> alphas, betas;
        for (std::uint64_t a = 0; static_cast<long>(alphas.size()) <= dx; ++a)
            if (detail::row_eval(frows[static_cast<std::size_t>(dtf)], a, p) != 0)
                alphas.push_back(a);
        for (std::uint64_t b = 0; static_cast<long>(betas.size()) <= dy; ++b)
            if (detail::row_eval(grows[static_cast<std::size_t>(dtg)], b, p) != 0)
                betas.push_back(b);

        std::vector<FpPoly> fa(alphas.size()), gb(betas.size());
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            FpPoly v(static_cast<std::size_t>(dtf) + 1);
            for (long k = 0; k <= dtf; ++k)
                v[static_cast<std::size_t>(k)] =
                    detail::row_eval(frows[static_cast<std::size_t>(k)], alphas[i], p);
            fa[i] = std::move(v);
        }
        for (std::size_t j = 0; j < betas.size(); ++j) {
            FpPoly v(static_cast<std::size_t>(dtg) + 1);
            for (long k = 0; k <= dtg; ++k)
                v[static_cast<std::size_t>(k)] =
                    detail::row_eval(grows[static_cast<std::size_t>(k)], betas[j], p);
            gb[j] = std::move(v);
        }

        // rows of y-coefficients per alpha, then interpolate across alpha
        std::vector<std::vector<std::uint64_t>> ytab(alphas.size());
        std::vector<std::uint64_t> vals(betas.size());
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            for (std::size_t j = 0; j < betas.size(); ++j)
                vals[j] = fp_resultant(fa[i], gb[j], p);
            FpPoly iny = fp_interpolate(betas, vals, p);
            iny.resize(static_cast<std::size_t>(dy) + 1, 0);
            ytab[i] = std::move(iny);
        }
        std::vector<std::vector<std::uint64_t>> cp(static_cast<std::size_t>(dx) + 1,
                                                   std::vector<std::uint64_t>(static_cast<std::size_t>(dy) + 1, 0));
        std::vector<std::uint64_t> col(alphas.size());
        for (long jy = 0; jy <= dy; ++jy) {
            for (std::size_t i = 0; i < alphas.size(); ++i) col[i] = ytab[i][static_cast<std::size_t>(jy)];
            FpPoly inx = fp_interpolate(alphas, col, p);
            inx.resize(static_cast<std::size_t>(dx) + 1, 0);
            for (long ix = 0; ix <= dx; ++ix)
                cp[static_cast<std::size_t>(ix)][static_cast<std::size_t>(jy)] =
                    inx[static_cast<std::size_t>(ix)];
        }

        ++primes_used;
        mpz_class pz(static_cast<unsigned long>(p));
        if (cur.empty()) {
            cur.assign(static_cast<std::size_t>(dx) + 1,
                       std::vector<mpz_class>(static_cast<std::size_t>(dy) + 1));
            for (long ix = 0; ix <= dx; ++ix)
                for (long jy = 0; jy <= dy; ++jy) {
                    mpz_class v(static_cast<unsigned long>(
                        cp[static_cast<std::size_t>(ix)][static_cast<std::size_t>(jy)]));
                    if (v * 2 > pz) v -= pz;
                    cur[static_cast<std::size_t>(ix)][static_cast<std::size_t>(jy)] = v;
                }
            modulus = pz;
            continue;
        }
        std::uint64_t minv = invmod(mpz_mod_u(modulus, p), p);
        bool changed = false;
        mpz_class big = modulus * pz;
        for (long ix = 0; ix <= dx; ++ix)
            for (long jy = 0; jy <= dy; ++jy) {
                mpz_class& c = cur[static_cast<std::size_t>(ix)][static_cast<std::size_t>(jy)];
                std::uint64_t want = cp[static_cast<std::size_t>(ix)][static_cast<std::size_t>(jy)];
                std::uint64_t have = mpz_mod_u(c, p);
                std::uint64_t t = mulmod(submod(want, have, p), minv, p);
                mpz_class next = c + modulus * mpz_class(static_cast<unsigned long>(t));
                if (next * 2 > big) next -= big;
                if (next != c) {
                    c = next;
                    changed = true;
                }
            }
        modulus = big;
        if (!changed && primes_used >= 2) break;
        if (opt.max_primes > 0 && primes_used >= opt.max_primes)
            throw InsufficientPrecision("CRT image still changing at prime cap");
    }

    BiPoly out;
    out.xvar = f.xvar;
    out.yvar = g.yvar;
    for (long ix = 0; ix <= dx; ++ix)
        for (long jy = 0; jy <= dy; ++jy)
            out.set(static_cast<int>(ix), static_cast<int>(jy),
                    cur[static_cast<std::size_t>(ix)][static_cast<std::size_t>(jy)]);
    return out;
}

// full gcd over Z[x] (content included), positive leading coefficient
inline IntPoly poly_gcd(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero()) return b.is_zero() ? b : b.normalized_primitive().first * abs(b.content());
    if (b.is_zero()) return a.normalized_primitive().first * abs(a.content());
    auto [ap, ac] = a.normalized_primitive();
    auto [bp, bc] = b.normalized_primitive();
    mpz_class cg = detail::mpz_gcd_nn(ac, bc);
    std::vector<mpz_class> A = ap.coeffs(), B = bp.coeffs();
    if (A.size() < B.size()) std::swap(A, B);
    while (!B.empty()) {
        std::vector<mpz_class> R = detail::rp_prem<ringops::MpzRing>(A, B);
        IntPoly rp(std::move(R));
        if (!rp.is_zero()) rp = rp.normalized_primitive().first;
        A = std::move(B);
        B = rp.coeffs();
        if (A.size() < B.size()) std::swap(A, B);
    }
    IntPoly g(std::move(A), a.var);
    g = g.normalized_primitive().first;
    return g * cg;
}

// product of the distinct irreducible factors, primitive with positive lc
inline IntPoly squarefree_part(const IntPoly& f) {
    if (f.is_zero()) return f;
    if (f.degree() == 0) return IntPoly::constant(1, f.var);
    IntPoly g = poly_gcd(f, f.derivative());
    IntPoly sf = IntPoly::divexact(f, g);
    return sf.normalized_primitive().first;
}

} // namespace periclass
