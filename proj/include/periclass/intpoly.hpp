#pragma once

// Dense univariate polynomials over the integers (GMP mpz_class coefficients,
// ascending order).  Value semantics throughout: every operation returns a
// fresh normalized polynomial and never mutates its inputs.
//
// Beyond ring arithmetic this provides the fractional-linear substitutions
// used by the dynamical constructions: for a degree-n f,
//   mobius_numerator(f) = (x-1)^n f((x+1)/(x-1))
//   involution_numerator(f) = (x-1)^n f(x/(x-1))
// and the dyadic rescalings f(2x)/2^v resp. 2^k f(x/2) normalized so the
// result has odd content in 2.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include <json.hpp>

#include "periclass/errors.hpp"

namespace periclass {

namespace detail {

inline mpz_class mpz_gcd_nn(const mpz_class& a, const mpz_class& b) {
    mpz_class r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline long mpz_v2(const mpz_class& a) {
    if (a == 0) return -1;
    return static_cast<long>(mpz_scan1(a.get_mpz_t(), 0));
}

} // namespace detail

class IntPoly {
  public:
    std::string var = "x";

    IntPoly() = default;

    explicit IntPoly(std::vector<mpz_class> coeffs, std::string v = "x")
        : var(std::move(v)), c_(std::move(coeffs)) {
        normalize();
    }

    IntPoly(std::initializer_list<long> coeffs, std::string v = "x") : var(std::move(v)) {
        c_.reserve(coeffs.size());
        for (long x : coeffs) c_.emplace_back(x);
        normalize();
    }

    static IntPoly zero(std::string v = "x") { return IntPoly(std::vector<mpz_class>{}, std::move(v)); }

    static IntPoly constant(mpz_class a, std::string v = "x") {
        return IntPoly(std::vector<mpz_class>{std::move(a)}, std::move(v));
    }

    static IntPoly monomial(mpz_class a, std::size_t k, std::string v = "x") {
        std::vector<mpz_class> c(k + 1);
        c[k] = std::move(a);
        return IntPoly(std::move(c), std::move(v));
    }

    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    const std::vector<mpz_class>& coeffs() const { return c_; }

    const mpz_class& operator[](std::size_t i) const {
        static const mpz_class z0 = 0;
        return i < c_.size() ? c_[i] : z0;
    }

    const mpz_class& lc() const {
        static const mpz_class z0 = 0;
        return c_.empty() ? z0 : c_.back();
    }

    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const IntPoly& a, const IntPoly& b) { return !(a == b); }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        std::vector<mpz_class> r(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
        return IntPoly(std::move(r), a.var);
    }

    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
        std::vector<mpz_class> r(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
        return IntPoly(std::move(r), a.var);
    }

    friend IntPoly operator-(const IntPoly& a) {
        std::vector<mpz_class> r(a.c_.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = -a.c_[i];
        return IntPoly(std::move(r), a.var);
    }

    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return zero(a.var.empty() ? b.var : a.var);
        std::vector<mpz_class> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                if (b.c_[j] == 0) continue;
                r[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return IntPoly(std::move(r), a.var);
    }

    friend IntPoly operator*(const IntPoly& a, const mpz_class& s) {
        std::vector<mpz_class> r(a.c_.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.c_[i] * s;
        return IntPoly(std::move(r), a.var);
    }

    friend IntPoly operator*(const mpz_class& s, const IntPoly& a) { return a * s; }

    // Exact quotient a / b over Z[x]; throws NotDivisible when b does not
    // divide a exactly (including any non-exact coefficient division met
    // during the top-down elimination).
    static IntPoly divexact(const IntPoly& a, const IntPoly& b) {
        if (b.is_zero()) throw NotDivisible("division by zero polynomial");
        if (a.is_zero()) return zero(a.var);
        if (a.degree() < b.degree()) throw NotDivisible("degree of divisor exceeds dividend");
        std::vector<mpz_class> rem = a.c_;
        std::vector<mpz_class> q(a.c_.size() - b.c_.size() + 1);
        const mpz_class& blc = b.lc();
        for (long k = static_cast<long>(q.size()) - 1; k >= 0; --k) {
            mpz_class& top = rem[k + b.degree()];
            if (top == 0) { q[k] = 0; continue; }
            if (!mpz_divisible_p(top.get_mpz_t(), blc.get_mpz_t()))
                throw NotDivisible("leading coefficient does not divide");
            mpz_class f;
            mpz_divexact(f.get_mpz_t(), top.get_mpz_t(), blc.get_mpz_t());
            q[k] = f;
            for (std::size_t j = 0; j < b.c_.size(); ++j) rem[k + j] -= f * b.c_[j];
        }
        for (const mpz_class& r : rem)
            if (r != 0) throw NotDivisible("nonzero remainder");
        return IntPoly(std::move(q), a.var);
    }

    // gcd of all coefficients, nonnegative; content of the zero polynomial is 0
    mpz_class content() const {
        mpz_class g = 0;
        for (const mpz_class& x : c_) {
            g = detail::mpz_gcd_nn(g, x);
            if (g == 1) break;
        }
        return g;
    }

    IntPoly primitive_part() const {
        if (is_zero()) return *this;
        mpz_class g = content();
        std::vector<mpz_class> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i)
            mpz_divexact(r[i].get_mpz_t(), c_[i].get_mpz_t(), g.get_mpz_t());
        return IntPoly(std::move(r), var);
    }

    // primitive part with positive leading coefficient, plus the stripped
    // constant (so that *this == stripped * result)
    std::pair<IntPoly, mpz_class> normalized_primitive() const {
        if (is_zero()) return {*this, mpz_class(0)};
        mpz_class g = content();
        if (lc() < 0) g = -g;
        std::vector<mpz_class> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i)
            mpz_divexact(r[i].get_mpz_t(), c_[i].get_mpz_t(), g.get_mpz_t());
        return {IntPoly(std::move(r), var), g};
    }

    IntPoly derivative() const {
        if (c_.size() <= 1) return zero(var);
        std::vector<mpz_class> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<long>(i);
        return IntPoly(std::move(r), var);
    }

    mpz_class eval(const mpz_class& x0) const {
        mpz_class acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x0 + c_[i];
        return acc;
    }

    mpq_class eval(const mpq_class& x0) const {
        mpq_class acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x0 + mpq_class(c_[i]);
        return acc;
    }

    // numerator of f((a x + b)/(c x + d)) cleared by (c x + d)^deg f,
    // computed as sum_i f_i (a x + b)^i (c x + d)^(deg - i)
    IntPoly fractional_substitution(long a, long b, long c, long d) const {
        if (is_zero()) return zero(var);
        long n = degree();
        IntPoly up({b, a}, var);
        IntPoly down({d, c}, var);
        std::vector<IntPoly> up_pow(n + 1), down_pow(n + 1);
        up_pow[0] = constant(1, var);
        down_pow[0] = constant(1, var);
        for (long i = 1; i <= n; ++i) {
            up_pow[i] = up_pow[i - 1] * up;
            down_pow[i] = down_pow[i - 1] * down;
        }
        IntPoly acc = zero(var);
        for (long i = 0; i <= n; ++i) {
            if (c_[i] == 0) continue;
            acc = acc + c_[i] * (up_pow[i] * down_pow[n - i]);
        }
        return acc;
    }

    // (x-1)^deg f((x+1)/(x-1)); applying it twice multiplies f by 2^deg
    // whenever f(1) != 0
    IntPoly mobius_numerator() const { return fractional_substitution(1, 1, 1, -1); }

    // (x-1)^deg f(x/(x-1)); the root involution x -> x/(x-1)
    IntPoly involution_numerator() const { return fractional_substitution(1, 0, 1, -1); }

    IntPoly subst_neg() const {
        std::vector<mpz_class> r = c_;
        for (std::size_t i = 1; i < r.size(); i += 2) r[i] = -r[i];
        return IntPoly(std::move(r), var);
    }

    IntPoly subst_power(std::size_t k) const {
        if (is_zero() || k == 0) return k == 0 ? constant(eval(mpz_class(1)), var) : zero(var);
        std::vector<mpz_class> r((c_.size() - 1) * k + 1);
        for (std::size_t i = 0; i < c_.size(); ++i) r[i * k] = c_[i];
        return IntPoly(std::move(r), var);
    }

    // inverse of subst_power(2): f must have only even-degree terms
    IntPoly compress_even() const {
        std::vector<mpz_class> r((c_.size() + 1) / 2);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i % 2 == 0)
                r[i / 2] = c_[i];
            else if (c_[i] != 0)
                throw Error("odd-degree term present in even compression");
        }
        return IntPoly(std::move(r), var);
    }

    IntPoly scale_arg(const mpz_class& s) const {
        std::vector<mpz_class> r = c_;
        mpz_class p = 1;
        for (std::size_t i = 1; i < r.size(); ++i) {
            p *= s;
            r[i] *= p;
        }
        return IntPoly(std::move(r), var);
    }

    enum class Rescale { in, out };

    // in:  f(2x) divided by the largest power of 2 dividing all coefficients
    // out: 2^k f(x/2) with the least k giving integer coefficients not all even
    IntPoly dyadic_rescale(Rescale dir) const {
        if (is_zero()) return *this;
        if (dir == Rescale::in) {
            IntPoly g = scale_arg(2);
            long v = -1;
            for (const mpz_class& x : g.c_) {
                if (x == 0) continue;
                long w = detail::mpz_v2(x);
                v = (v < 0 || w < v) ? w : v;
                if (v == 0) break;
            }
            if (v <= 0) return g;
            std::vector<mpz_class> r(g.c_.size());
            for (std::size_t i = 0; i < r.size(); ++i)
                mpz_fdiv_q_2exp(r[i].get_mpz_t(), g.c_[i].get_mpz_t(), static_cast<mp_bitcnt_t>(v));
            return IntPoly(std::move(r), var);
        }
        long k = 0;
        bool first = true;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            long w = static_cast<long>(i) - detail::mpz_v2(c_[i]);
            if (first || w > k) { k = w; first = false; }
        }
        std::vector<mpz_class> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) {
            long e = k - static_cast<long>(i);
            if (e >= 0)
                mpz_mul_2exp(r[i].get_mpz_t(), c_[i].get_mpz_t(), static_cast<mp_bitcnt_t>(e));
            else
                mpz_fdiv_q_2exp(r[i].get_mpz_t(), c_[i].get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
        }
        return IntPoly(std::move(r), var);
    }

    mpz_class height() const {
        mpz_class h = 0;
        for (const mpz_class& x : c_) {
            mpz_class a = abs(x);
            if (a > h) h = a;
        }
        return h;
    }

    mpz_class norm2_sq() const {
        mpz_class s = 0;
        for (const mpz_class& x : c_) s += x * x;
        return s;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["var"] = var;
        std::vector<std::string> cs;
        if (c_.empty()) {
            cs.push_back("0");
        } else {
            cs.reserve(c_.size());
            for (const mpz_class& x : c_) cs.push_back(x.get_str());
        }
        j["coeffs"] = cs;
        return j;
    }

    static IntPoly from_json(const nlohmann::json& j) {
        std::vector<mpz_class> cs;
        for (const auto& s : j.at("coeffs")) cs.emplace_back(s.get<std::string>());
        std::string v = j.value("var", "x");
        return IntPoly(std::move(cs), std::move(v));
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        for (long i = degree(); i >= 0; --i) {
            const mpz_class& a = c_[static_cast<std::size_t>(i)];
            if (a == 0) continue;
            mpz_class mag = abs(a);
            if (out.empty())
                out += (a < 0) ? "-" : "";
            else
                out += (a < 0) ? " - " : " + ";
            bool unit = (mag == 1);
            if (i == 0) {
                out += mag.get_str();
            } else {
                if (!unit) out += mag.get_str() + "*";
                out += var;
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out;
    }

  private:
    std::vector<mpz_class> c_;

    void normalize() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
};

} // namespace periclass
