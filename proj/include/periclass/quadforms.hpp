#pragma once

// Positive definite binary quadratic forms of discriminant -d (d > 0,
// -d = 1 mod 4): reduction, class number by reduced-form enumeration,
// Dirichlet composition through a coprime representative, orders in the
// class group, and the certified period ledgers whose h-sums realize the
// Moebius targets.

#include <numeric>
#include <vector>

#include <gmpxx.h>

#include <json.hpp>

#include "periclass/errors.hpp"
#include "periclass/numutil.hpp"

namespace periclass {

struct QuadForm {
    mpz_class a, b, c;

    friend bool operator==(const QuadForm& f, const QuadForm& g) {
        return f.a == g.a && f.b == g.b && f.c == g.c;
    }
    friend bool operator!=(const QuadForm& f, const QuadForm& g) { return !(f == g); }
};

inline mpz_class form_disc(const QuadForm& f) { return f.b * f.b - 4 * f.a * f.c; }

inline bool is_reduced(const QuadForm& f) {
    mpz_class ab = abs(f.b);
    if (!(ab <= f.a && f.a <= f.c)) return false;
    if ((ab == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

inline QuadForm reduce_form(QuadForm f) {
    if (f.a <= 0 || form_disc(f) >= 0) throw BadDiscriminant("form is not positive definite");
    while (true) {
        if (f.c < f.a) {
            f = {f.c, -f.b, f.a};
            continue;
        }
        if (f.b > f.a || f.b <= -f.a) {
            mpz_class k;
            mpz_fdiv_q(k.get_mpz_t(), mpz_class(f.a - f.b).get_mpz_t(),
                       mpz_class(2 * f.a).get_mpz_t());
            mpz_class b2 = f.b + 2 * f.a * k;
            mpz_class c2 = (b2 * b2 - form_disc(f)) / (4 * f.a);
            f.b = b2;
            f.c = c2;
            continue;
        }
        if ((abs(f.b) == f.a || f.a == f.c) && f.b < 0) {
            f.b = -f.b;
            continue;
        }
        return f;
    }
}

// all reduced primitive forms of discriminant -d; h(-d) is the count
inline std::pair<long, std::vector<QuadForm>> class_number(long d) {
    if (d <= 0 || d % 4 != 3) throw BadDiscriminant("need d > 0 with -d = 1 mod 4");
    std::vector<QuadForm> forms;
    for (long a = 1; 3 * a * a <= d; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            if ((b * b + d) % (4 * a)) continue;
            long c = (b * b + d) / (4 * a);
            if (c < a) continue;
            if ((std::abs(b) == a || a == c) && b < 0) continue;
            long g = std::gcd(std::gcd(a, std::abs(b)), c);
            if (g != 1) continue;
            forms.push_back({a, b, c});
        }
    }
    return {static_cast<long>(forms.size()), forms};
}

inline QuadForm principal_form(const mpz_class& d) {
    return reduce_form({1, 1, (d + 1) / 4});
}

namespace detail {

inline mpz_class form_eval(const QuadForm& f, const mpz_class& x, const mpz_class& y) {
    return f.a * x * x + f.b * x * y + f.c * y * y;
}

// a form in the class of f whose first coefficient is coprime to m
inline QuadForm rep_coprime_to(const QuadForm& f, const mpz_class& m) {
    for (long x = 0; x < 64; ++x) {
        for (long y = -64; y < 64; ++y) {
            if (std::gcd(x, std::abs(y)) != 1) continue;
            mpz_class v = form_eval(f, x, y);
            if (v == 0) continue;
            mpz_class vg;
            mpz_gcd(vg.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
            if (vg != 1) continue;
            // complete (x, y) to a unimodular matrix [[x, -w], [y, u]]
            // with x*u + y*w = 1
            mpz_class g, u, w;
            mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), w.get_mpz_t(), mpz_class(x).get_mpz_t(),
                       mpz_class(y).get_mpz_t());
            mpz_class p = x, q = -w, r = y, s = u;
            mpz_class B = 2 * f.a * p * q + f.b * (p * s + q * r) + 2 * f.c * r * s;
            mpz_class C = form_eval(f, q, s);
            return {v, B, C};
        }
    }
    throw Error("no representative with coprime leading coefficient found");
}

} // namespace detail

// Dirichlet composition of primitive forms of one negative discriminant
inline QuadForm compose(const QuadForm& f1, const QuadForm& f2in) {
    mpz_class D = form_disc(f1);
    if (D != form_disc(f2in)) throw DiscriminantMismatch("composition needs equal discriminants");
    if (D >= 0 || f1.a <= 0 || f2in.a <= 0) throw BadDiscriminant("form is not positive definite");
    mpz_class d = -D;
    QuadForm f2 = detail::rep_coprime_to(f2in, 2 * f1.a * d);
    mpz_class g, u, v;
    mpz_class m1 = 2 * f1.a, m2 = 2 * f2.a;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
    mpz_class diff = f2.b - f1.b;
    if (!mpz_divisible_p(diff.get_mpz_t(), g.get_mpz_t()))
        throw Error("no common residue in composition");
    mpz_class B = f1.b + m1 * u * (diff / g);
    mpz_class lm = m1 * m2 / g;
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), B.get_mpz_t(), lm.get_mpz_t());
    B = r;
    mpz_class A = f1.a * f2.a;
    mpz_class C = (B * B + d) / (4 * A);
    return reduce_form({A, B, C});
}

// order of the class of f in the form class group of its discriminant
inline long form_order(const QuadForm& f) {
    mpz_class d = -form_disc(f);
    QuadForm e = principal_form(d);
    QuadForm g = reduce_form(f);
    if (g == e) return 1;
    QuadForm acc = g;
    long k = 1;
    while (acc != e) {
        acc = compose(acc, g);
        ++k;
        if (k > 100000) throw Error("runaway class order");
    }
    return k;
}

// order of the class of (2, 1, (d+1)/8), the form above the split prime 2
inline long two_class_order(long d) {
    if (d % 8 != 7) throw BadResidue("need d = 7 mod 8");
    return form_order({2, 1, mpz_class((d + 1) / 8)});
}

struct DiscriminantSet {
    int n = 0;
    long target = 0;
    std::vector<std::pair<long, long>> members; // (d, h(-d)), ascending d

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["n"] = n;
        j["target"] = target;
        nlohmann::ordered_json ms = nlohmann::ordered_json::array();
        for (auto [d, h] : members) ms.push_back({{"d", d}, {"h", h}});
        j["members"] = std::move(ms);
        return j;
    }
};

// ascending enumeration of d = 7 mod 8 with two_class_order(d) = n, stopping
// exactly when the h-sum reaches the Moebius target
inline DiscriminantSet discriminant_set(int n) {
    if (n < 2) throw Error("discriminant_set needs n >= 2");
    DiscriminantSet out;
    out.n = n;
    for (int k = 1; k <= n; ++k)
        if (n % k == 0) out.target += static_cast<long>(moebius(n / k)) * (1l << k);
    long sum = 0;
    for (long d = 7;; d += 8) {
        if (two_class_order(d) != n) continue;
        long h = class_number(d).first;
        out.members.emplace_back(d, h);
        sum += h;
        if (sum == out.target) return out;
        if (sum > out.target)
            throw LedgerOvershoot("h-sum passed the target at d = " + std::to_string(d));
    }
}

inline int kronecker(const mpz_class& m, const mpz_class& p) {
    return mpz_kronecker(m.get_mpz_t(), p.get_mpz_t());
}

} // namespace periclass
