#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

#include "periclass/bipoly.hpp"
#include "periclass/errors.hpp"
#include "periclass/intpoly.hpp"
#include "periclass/quadforms.hpp"
#include "periclass/resultant.hpp"

namespace periclass {

// arbitrary-precision binary float, RAII over mpfr_t, round-to-nearest
// throughout; binary operators work at the larger operand precision
class BigFloat {
public:
    explicit BigFloat(long bits = 64) {
        mpfr_init2(v_, std::max<long>(bits, MPFR_PREC_MIN));
        mpfr_set_zero(v_, 1);
    }
    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(BigFloat o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    long bits() const { return static_cast<long>(mpfr_get_prec(v_)); }

    static BigFloat of(long a, long bits) {
        BigFloat r(bits);
        mpfr_set_si(r.v_, a, MPFR_RNDN);
        return r;
    }
    static BigFloat of(const mpz_class& a, long bits) {
        BigFloat r(bits);
        mpfr_set_z(r.v_, a.get_mpz_t(), MPFR_RNDN);
        return r;
    }
    static BigFloat pow2(long e, long bits = 64) {
        BigFloat r(bits);
        mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }
    static BigFloat pi(long bits) {
        BigFloat r(bits);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
        BigFloat r(wp(a, b));
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
        BigFloat r(wp(a, b));
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
        BigFloat r(wp(a, b));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
        BigFloat r(wp(a, b));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator*(long s, const BigFloat& a) {
        BigFloat r(a.bits());
        mpfr_mul_si(r.v_, a.v_, s, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator-(const BigFloat& a) {
        BigFloat r(a.bits());
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat sqrt(const BigFloat& a) {
        BigFloat r(a.bits());
        mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat exp(const BigFloat& a) {
        BigFloat r(a.bits());
        mpfr_exp(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat cos(const BigFloat& a) {
        BigFloat r(a.bits());
        mpfr_cos(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat sin(const BigFloat& a) {
        BigFloat r(a.bits());
        mpfr_sin(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat abs(const BigFloat& a) {
        BigFloat r(a.bits());
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat hypot(const BigFloat& a, const BigFloat& b) {
        BigFloat r(wp(a, b));
        mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return b < a; }

    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // nearest integer, optionally reporting |value - integer| as a double
    mpz_class round_to_mpz(double* residual = nullptr) const {
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
        if (residual) {
            BigFloat d(bits());
            mpfr_sub_z(d.v_, v_, z.get_mpz_t(), MPFR_RNDN);
            mpfr_abs(d.v_, d.v_, MPFR_RNDN);
            *residual = mpfr_get_d(d.v_, MPFR_RNDN);
        }
        return z;
    }

private:
    static mpfr_prec_t wp(const BigFloat& a, const BigFloat& b) {
        return std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_));
    }
    mpfr_t v_;
};

struct BigComplex {
    BigFloat re, im;

    explicit BigComplex(long bits = 64) : re(bits), im(bits) {}
    BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}

    long bits() const { return std::max(re.bits(), im.bits()); }

    static BigComplex of(long r, long i, long bits) {
        return {BigFloat::of(r, bits), BigFloat::of(i, bits)};
    }
    static BigComplex one(long bits) { return of(1, 0, bits); }

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend BigComplex operator*(const BigFloat& s, const BigComplex& a) {
        return {s * a.re, s * a.im};
    }
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
        BigFloat n = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    friend BigFloat abs(const BigComplex& a) { return hypot(a.re, a.im); }
    friend BigComplex exp(const BigComplex& a) {
        BigFloat m = exp(a.re);
        return {m * cos(a.im), m * sin(a.im)};
    }
};

// lambda(tau) through the theta-constant quotient (theta2/theta3)^4 with
// nome q = exp(i pi tau); series truncated once terms drop below 2^-(bits+16)
inline BigComplex lambda_at(const BigComplex& tau, long bits) {
    if (tau.im.sign() <= 0) throw Error("lambda_at needs Im(tau) > 0");
    const long w = bits + 32;
    BigFloat pw = BigFloat::pi(w);
    BigComplex q = exp(BigComplex(-(pw * tau.im), pw * tau.re));
    BigFloat qa = abs(q);
    if (!(qa < BigFloat::of(1, 64) / BigFloat::of(2, 64)))
        throw PrecisionLoss("imaginary part too small for the theta series at this bit budget");
    BigFloat eps = BigFloat::pow2(-(bits + 16));

    BigComplex q2 = q * q;
    BigComplex s2 = BigComplex::one(w);
    BigComplex s3 = BigComplex::one(w);
    BigComplex sq = q;  // q^(k^2) at k = 1, advanced by q^(2k+1)
    BigComplex tr = q2; // q^(k(k+1)) at k = 1, advanced by q^(2k+2)
    BigComplex odd = q;
    BigComplex even = q2;
    BigFloat two = BigFloat::of(2, w);
    for (long k = 1;; ++k) {
        s3 = s3 + two * sq;
        s2 = s2 + tr;
        if (abs(sq) < eps) break;
        if (k > 4 * bits + 64) throw PrecisionLoss("theta series failed to converge");
        odd = odd * q2;
        even = even * q2;
        sq = sq * odd;
        tr = tr * even;
    }
    BigComplex r = s2 / s3;
    r = r * r;
    r = r * r;
    return BigFloat::of(16, w) * (q * r);
}

// J(l) = 256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2), invariant under l -> 1-l, 1/l
inline BigComplex j_from_lambda(const BigComplex& l) {
    const long w = l.bits();
    BigFloat tiny = BigFloat::pow2(-(w / 2));
    BigComplex one = BigComplex::one(w);
    if (abs(l) < tiny || abs(l - one) < tiny)
        throw PoleAtExcludedValue("J(lambda) evaluated too close to 0 or 1");
    BigComplex n = l * l - l + one;
    n = n * n * n;
    BigComplex lm = l - one;
    BigComplex d = l * l * (lm * lm);
    return BigFloat::of(256, w) * (n / d);
}

// CM point tau = (-b + sqrt(-disc) i) / (2a) of one reduced form
struct CMPoint {
    QuadForm form;
    BigComplex tau;
};

inline std::vector<CMPoint> cm_points(long d, long bits) {
    auto [h, forms] = class_number(d);
    (void)h;
    BigFloat sd = sqrt(BigFloat::of(mpz_class(d), bits));
    std::vector<CMPoint> pts;
    pts.reserve(forms.size());
    for (const QuadForm& f : forms) {
        BigFloat a2 = BigFloat::of(2 * f.a, bits);
        pts.push_back({f, BigComplex(BigFloat::of(-f.b, bits) / a2, sd / a2)});
    }
    return pts;
}

// coefficient-size heuristic: 1.5 * (pi sqrt(d) / ln 2) * sum(1/a) plus guard
inline long class_poly_bits(long d) {
    auto [h, forms] = class_number(d);
    (void)h;
    double s = 0.0;
    for (const QuadForm& f : forms) s += 1.0 / f.a.get_d();
    double est = 1.5 * (3.14159265358979323846 * std::sqrt(static_cast<double>(d)) /
                        std::log(2.0)) * s;
    return static_cast<long>(std::ceil(est)) + 128;
}

struct ClassPolyRun {
    IntPoly poly;
    long bits = 0;
    double residual = 0.0; // max over coefficients of |rounding error| and |imag part|
};

namespace detail {

inline ClassPolyRun class_poly_attempt(long d, long bits) {
    auto pts = cm_points(d, bits);
    std::vector<BigComplex> coeffs{BigComplex::one(bits)};
    for (const CMPoint& p : pts) {
        BigComplex j = j_from_lambda(lambda_at(p.tau, bits));
        std::vector<BigComplex> nxt(coeffs.size() + 1, BigComplex(bits));
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            nxt[i + 1] = nxt[i + 1] + coeffs[i];
            nxt[i] = nxt[i] - coeffs[i] * j;
        }
        coeffs = std::move(nxt);
    }
    ClassPolyRun run;
    run.bits = bits;
    std::vector<mpz_class> out;
    out.reserve(coeffs.size());
    for (const BigComplex& c : coeffs) {
        double res = 0.0;
        out.push_back(c.re.round_to_mpz(&res));
        run.residual = std::max(run.residual, res);
        run.residual = std::max(run.residual, std::abs(abs(c.im).to_double()));
    }
    if (!(run.residual < 0.25))
        throw InsufficientPrecision("class polynomial rounding residual reached " +
                                    std::to_string(run.residual) + " at " +
                                    std::to_string(bits) + " bits");
    run.poly = IntPoly(std::move(out));
    return run;
}

} // namespace detail

// floating route: product of (x - j(tau)) over the reduced forms, rounded;
// bits = 0 picks the heuristic and doubles on rounding failure
inline ClassPolyRun class_poly_run(long d, long bits = 0) {
    const bool retry = bits == 0;
    long use = retry ? class_poly_bits(d) : bits;
    for (int attempt = 0;; ++attempt) {
        try {
            return detail::class_poly_attempt(d, use);
        } catch (const InsufficientPrecision&) {
            if (!retry || attempt >= 3) throw;
            use *= 2;
        }
    }
}

inline IntPoly class_poly(long d, long bits = 0) { return class_poly_run(d, bits).poly; }

// algebraic route: eliminate y from b_d(y) against
// y^16 (1 - y^4) x - 16 (y^8 - 16 y^4 + 16)^3, strip content, extract the
// square root of the remaining perfect square
inline IntPoly class_poly_via_bd(const IntPoly& bd) {
    if (bd.degree() < 2 || bd.degree() % 2 != 0)
        throw Error("class_poly_via_bd needs an even-degree input of degree at least 2");
    BiPoly t = BiPoly::from_y_poly(IntPoly({16, 0, 0, 0, -16, 0, 0, 0, 1}));
    BiPoly rhs = t * t * t * mpz_class(16);
    BiPoly b = BiPoly::monomial(1, 1, 16) - BiPoly::monomial(1, 1, 20) - rhs;
    IntPoly r = resultant_y(BiPoly::from_y_poly(bd), b);
    r = r.normalized_primitive().first;
    IntPoly h = squarefree_part(r);
    if (!(h * h == r))
        throw NotAPerfectSquare("stripped resultant is not the square of its squarefree part");
    return h;
}

// labels a factor with the unique candidate discriminant whose class
// polynomial agrees with the factor's algebraic route
inline long match_discriminant(const IntPoly& factor, const DiscriminantSet& candidates) {
    const long deg = factor.degree();
    std::vector<long> viable;
    for (auto [d, h] : candidates.members)
        if (2 * h == deg) viable.push_back(d);
    if (viable.empty())
        throw NoMatch("no candidate discriminant has class number " + std::to_string(deg / 2));
    IntPoly via = class_poly_via_bd(factor);
    long hit = 0;
    int hits = 0;
    for (long d : viable) {
        if (class_poly(d) == via) {
            hit = d;
            ++hits;
        }
    }
    if (hits == 0) throw NoMatch("no candidate class polynomial matches the factor");
    if (hits > 1) throw AmbiguousMatch("multiple candidate discriminants match the factor");
    return hit;
}

} // namespace periclass
