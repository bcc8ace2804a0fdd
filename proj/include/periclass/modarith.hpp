#pragma once

// Arithmetic modulo word-sized primes p < 2^62, plus dense univariate
// polynomials over F_p (ascending coefficient vectors, no trailing zeros).
// Shared by the evaluation/interpolation resultant and the factoring code.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "periclass/errors.hpp"

namespace periclass::modarith {

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    std::uint64_t s = a + b;
    return (s >= p || s < a) ? s - p : s;
}

inline std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return a >= b ? a - b : a + p - b;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
    if (a % p == 0) throw Error("inverse of zero residue");
    return powmod(a % p, p - 2, p);
}

inline std::uint64_t mpz_mod_u(const mpz_class& a, std::uint64_t p) {
    mpz_class r = a % static_cast<unsigned long>(p);
    if (r < 0) r += static_cast<unsigned long>(p);
    return r.get_ui();
}

inline std::uint64_t prime_after(std::uint64_t n) {
    mpz_class x(static_cast<unsigned long>(n));
    mpz_nextprime(x.get_mpz_t(), x.get_mpz_t());
    return x.get_ui();
}

using FpPoly = std::vector<std::uint64_t>;

inline void fp_normalize(FpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline long fp_deg(const FpPoly& f) { return static_cast<long>(f.size()) - 1; }

inline std::uint64_t fp_lc(const FpPoly& f) { return f.empty() ? 0 : f.back(); }

inline FpPoly fp_add(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::uint64_t x = i < a.size() ? a[i] : 0;
        std::uint64_t y = i < b.size() ? b[i] : 0;
        r[i] = addmod(x, y, p);
    }
    fp_normalize(r);
    return r;
}

inline FpPoly fp_sub(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::uint64_t x = i < a.size() ? a[i] : 0;
        std::uint64_t y = i < b.size() ? b[i] : 0;
        r[i] = submod(x, y, p);
    }
    fp_normalize(r);
    return r;
}

inline FpPoly fp_scale(const FpPoly& a, std::uint64_t s, std::uint64_t p) {
    s %= p;
    if (s == 0) return {};
    FpPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = mulmod(a[i], s, p);
    fp_normalize(r);
    return r;
}

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = addmod(r[i + j], mulmod(a[i], b[j], p), p);
    }
    fp_normalize(r);
    return r;
}

// quotient and remainder of a by b (b nonzero); remainder returned in a
inline FpPoly fp_divmod_inplace(FpPoly& a, const FpPoly& b, std::uint64_t p) {
    if (b.empty()) throw Error("division by zero polynomial mod p");
    if (fp_deg(a) < fp_deg(b)) return {};
    std::uint64_t binv = invmod(fp_lc(b), p);
    FpPoly q(a.size() - b.size() + 1, 0);
    for (long k = static_cast<long>(q.size()) - 1; k >= 0; --k) {
        std::uint64_t top = a[static_cast<std::size_t>(k) + b.size() - 1];
        if (top == 0) continue;
        std::uint64_t f = mulmod(top, binv, p);
        q[static_cast<std::size_t>(k)] = f;
        for (std::size_t j = 0; j < b.size(); ++j) {
            auto idx = static_cast<std::size_t>(k) + j;
            a[idx] = submod(a[idx], mulmod(f, b[j], p), p);
        }
    }
    fp_normalize(a);
    return q;
}

inline FpPoly fp_rem(FpPoly a, const FpPoly& b, std::uint64_t p) {
    fp_divmod_inplace(a, b, p);
    return a;
}

inline FpPoly fp_monic(const FpPoly& a, std::uint64_t p) {
    if (a.empty()) return a;
    return fp_scale(a, invmod(fp_lc(a), p), p);
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b, std::uint64_t p) {
    while (!b.empty()) {
        a = fp_rem(std::move(a), b, p);
        std::swap(a, b);
    }
    return fp_monic(a, p);
}

inline FpPoly fp_deriv(const FpPoly& a, std::uint64_t p) {
    if (a.size() <= 1) return {};
    FpPoly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = mulmod(a[i], i % p, p);
    fp_normalize(r);
    return r;
}

inline std::uint64_t fp_eval(const FpPoly& a, std::uint64_t x, std::uint64_t p) {
    std::uint64_t acc = 0;
    for (std::size_t i = a.size(); i-- > 0;) acc = addmod(mulmod(acc, x, p), a[i], p);
    return acc;
}

// a^e mod (f, p); f of degree >= 1
inline FpPoly fp_powmod(FpPoly a, const mpz_class& e, const FpPoly& f, std::uint64_t p) {
    FpPoly r{1};
    a = fp_rem(std::move(a), f, p);
    mpz_class k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) r = fp_rem(fp_mul(r, a, p), f, p);
        a = fp_rem(fp_mul(a, a, p), f, p);
        k >>= 1;
    }
    return r;
}

// resultant of a and b over F_p by the Euclidean remainder chain
inline std::uint64_t fp_resultant(FpPoly a, FpPoly b, std::uint64_t p) {
    if (a.empty() || b.empty()) return 0;
    std::uint64_t res = 1;
    while (true) {
        long da = fp_deg(a), db = fp_deg(b);
        if (db == 0) return mulmod(res, powmod(b[0], static_cast<std::uint64_t>(da), p), p);
        FpPoly r = fp_rem(a, b, p);
        long dr = fp_deg(r);
        if (r.empty()) return 0;
        res = mulmod(res, powmod(fp_lc(b), static_cast<std::uint64_t>(da - dr), p), p);
        if ((da & 1) && (db & 1)) res = p - res;
        a = std::move(b);
        b = std::move(r);
    }
}

// Newton interpolation through (xs[i], ys[i]) with distinct xs, result ascending
inline FpPoly fp_interpolate(const std::vector<std::uint64_t>& xs,
                             const std::vector<std::uint64_t>& ys, std::uint64_t p) {
    std::size_t n = xs.size();
    if (n == 0) return {};
    std::vector<std::uint64_t> dd = ys;
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) {
            std::uint64_t num = submod(dd[i], dd[i - 1], p);
            std::uint64_t den = submod(xs[i], xs[i - j], p);
            dd[i] = mulmod(num, invmod(den, p), p);
            if (i == j) break;
        }
    FpPoly poly{dd[n - 1]};
    for (std::size_t i = n - 1; i-- > 0;) {
        poly.insert(poly.begin(), 0);
        for (std::size_t k = 0; k + 1 < poly.size(); ++k)
            poly[k] = submod(poly[k], mulmod(poly[k + 1], xs[i], p), p);
        poly[0] = addmod(poly[0], dd[i], p);
    }
    fp_normalize(poly);
    return poly;
}

} // namespace periclass::modarith
