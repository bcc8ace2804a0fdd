#pragma once

// Sparse bivariate polynomials over the integers, stored as a map from
// exponent pairs (i, j) to nonzero mpz coefficients.  The two variables are
// named (default "x", "y"); views as a polynomial in one variable with
// IntPoly coefficients support the elimination algorithms.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "periclass/errors.hpp"
#include "periclass/intpoly.hpp"

namespace periclass {

class BiPoly {
  public:
    std::string xvar = "x";
    std::string yvar = "y";

    BiPoly() = default;
    BiPoly(std::string xv, std::string yv) : xvar(std::move(xv)), yvar(std::move(yv)) {}

    static BiPoly zero() { return BiPoly(); }

    static BiPoly constant(mpz_class a) {
        BiPoly r;
        r.set(0, 0, std::move(a));
        return r;
    }

    static BiPoly monomial(mpz_class a, int i, int j) {
        BiPoly r;
        r.set(i, j, std::move(a));
        return r;
    }

    static BiPoly from_x_poly(const IntPoly& f) {
        BiPoly r;
        for (long i = 0; i <= f.degree(); ++i) r.set(static_cast<int>(i), 0, f[static_cast<std::size_t>(i)]);
        return r;
    }

    static BiPoly from_y_poly(const IntPoly& f) {
        BiPoly r;
        for (long i = 0; i <= f.degree(); ++i) r.set(0, static_cast<int>(i), f[static_cast<std::size_t>(i)]);
        return r;
    }

    // coefficients of powers of y, each an IntPoly in x, ascending in y
    static BiPoly from_y_coeffs(const std::vector<IntPoly>& cs) {
        BiPoly r;
        for (std::size_t j = 0; j < cs.size(); ++j)
            for (long i = 0; i <= cs[j].degree(); ++i)
                r.set(static_cast<int>(i), static_cast<int>(j), cs[j][static_cast<std::size_t>(i)]);
        return r;
    }

    bool is_zero() const { return t_.empty(); }

    int degree_x() const {
        int d = -1;
        for (const auto& [e, c] : t_) d = std::max(d, e.first);
        return d;
    }

    int degree_y() const {
        int d = -1;
        for (const auto& [e, c] : t_) d = std::max(d, e.second);
        return d;
    }

    mpz_class coeff(int i, int j) const {
        auto it = t_.find({i, j});
        return it == t_.end() ? mpz_class(0) : it->second;
    }

    void set(int i, int j, mpz_class a) {
        if (a == 0)
            t_.erase({i, j});
        else
            t_[{i, j}] = std::move(a);
    }

    void add_to(int i, int j, const mpz_class& a) {
        if (a == 0) return;
        auto it = t_.find({i, j});
        if (it == t_.end()) {
            t_[{i, j}] = a;
        } else {
            it->second += a;
            if (it->second == 0) t_.erase(it);
        }
    }

    const std::map<std::pair<int, int>, mpz_class>& terms() const { return t_; }

    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

    friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
        BiPoly r = a;
        for (const auto& [e, c] : b.t_) r.add_to(e.first, e.second, c);
        return r;
    }

    friend BiPoly operator-(const BiPoly& a, const BiPoly& b) {
        BiPoly r = a;
        for (const auto& [e, c] : b.t_) r.add_to(e.first, e.second, -c);
        return r;
    }

    friend BiPoly operator-(const BiPoly& a) {
        BiPoly r = a;
        for (auto& [e, c] : r.t_) c = -c;
        return r;
    }

    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        BiPoly r;
        r.xvar = a.xvar;
        r.yvar = a.yvar;
        for (const auto& [ea, ca] : a.t_)
            for (const auto& [eb, cb] : b.t_)
                r.add_to(ea.first + eb.first, ea.second + eb.second, ca * cb);
        return r;
    }

    friend BiPoly operator*(const BiPoly& a, const mpz_class& s) {
        if (s == 0) return BiPoly();
        BiPoly r = a;
        for (auto& [e, c] : r.t_) c *= s;
        return r;
    }

    friend BiPoly operator*(const mpz_class& s, const BiPoly& a) { return a * s; }

    // view as polynomial in y over Z[x], ascending powers of y
    std::vector<IntPoly> y_coeffs() const {
        std::vector<std::vector<mpz_class>> buf(static_cast<std::size_t>(degree_y() + 1));
        if (is_zero()) return {};
        for (const auto& [e, c] : t_) {
            auto& row = buf[static_cast<std::size_t>(e.second)];
            if (row.size() <= static_cast<std::size_t>(e.first)) row.resize(static_cast<std::size_t>(e.first) + 1);
            row[static_cast<std::size_t>(e.first)] = c;
        }
        std::vector<IntPoly> out;
        out.reserve(buf.size());
        for (auto& row : buf) out.emplace_back(std::move(row), xvar);
        return out;
    }

    std::vector<IntPoly> x_coeffs() const { return swap_vars().y_coeffs(); }

    BiPoly swap_vars() const {
        BiPoly r(yvar, xvar);
        for (const auto& [e, c] : t_) r.set(e.second, e.first, c);
        return r;
    }

    IntPoly diagonal() const {
        int n = std::max(degree_x() + degree_y(), 0);
        std::vector<mpz_class> c(static_cast<std::size_t>(n + 1));
        if (is_zero()) return IntPoly::zero(xvar);
        for (const auto& [e, v] : t_) c[static_cast<std::size_t>(e.first + e.second)] += v;
        return IntPoly(std::move(c), xvar);
    }

    mpz_class eval(const mpz_class& x0, const mpz_class& y0) const {
        return eval_y(y0).eval(x0);
    }

    // substitute y = y0, result a polynomial in x
    IntPoly eval_y(const mpz_class& y0) const {
        auto ys = y_coeffs();
        IntPoly acc = IntPoly::zero(xvar);
        for (std::size_t j = ys.size(); j-- > 0;) acc = acc * IntPoly::constant(y0, xvar) + ys[j];
        return acc;
    }

    // substitute x = x0, result a polynomial in y
    IntPoly eval_x(const mpz_class& x0) const { return swap_vars().eval_y(x0); }

    mpz_class content() const {
        mpz_class g = 0;
        for (const auto& [e, c] : t_) {
            g = detail::mpz_gcd_nn(g, c);
            if (g == 1) break;
        }
        return g;
    }

    // exact quotient a / b, dividing as polynomials in y over Z[x];
    // throws NotDivisible when the quotient is not in Z[x, y]
    static BiPoly divexact(const BiPoly& a, const BiPoly& b) {
        if (b.is_zero()) throw NotDivisible("division by zero polynomial");
        if (a.is_zero()) return BiPoly();
        std::vector<IntPoly> ra = a.y_coeffs();
        std::vector<IntPoly> rb = b.y_coeffs();
        long da = static_cast<long>(ra.size()) - 1;
        long db = static_cast<long>(rb.size()) - 1;
        if (da < db) throw NotDivisible("degree of divisor exceeds dividend");
        std::vector<IntPoly> q(static_cast<std::size_t>(da - db + 1));
        for (long k = da - db; k >= 0; --k) {
            IntPoly& top = ra[static_cast<std::size_t>(k + db)];
            if (top.is_zero()) continue;
            IntPoly f = IntPoly::divexact(top, rb[static_cast<std::size_t>(db)]);
            q[static_cast<std::size_t>(k)] = f;
            for (long j = 0; j <= db; ++j)
                ra[static_cast<std::size_t>(k + j)] = ra[static_cast<std::size_t>(k + j)] - f * rb[static_cast<std::size_t>(j)];
        }
        for (const IntPoly& r : ra)
            if (!r.is_zero()) throw NotDivisible("nonzero remainder");
        BiPoly out = from_y_coeffs(q);
        out.xvar = a.xvar;
        out.yvar = a.yvar;
        return out;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["vars"] = {xvar, yvar};
        nlohmann::ordered_json terms = nlohmann::ordered_json::array();
        for (const auto& [e, c] : t_)
            terms.push_back({e.first, e.second, c.get_str()});
        j["terms"] = std::move(terms);
        return j;
    }

    static BiPoly from_json(const nlohmann::json& j) {
        BiPoly r;
        const auto& vars = j.at("vars");
        r.xvar = vars.at(0).get<std::string>();
        r.yvar = vars.at(1).get<std::string>();
        for (const auto& t : j.at("terms"))
            r.set(t.at(0).get<int>(), t.at(1).get<int>(),
                  mpz_class(t.at(2).get<std::string>()));
        return r;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            const auto& [e, c] = *it;
            mpz_class mag = abs(c);
            if (out.empty())
                out += (c < 0) ? "-" : "";
            else
                out += (c < 0) ? " - " : " + ";
            bool unit = (mag == 1);
            std::string vars;
            if (e.first > 0) {
                vars += xvar;
                if (e.first > 1) vars += "^" + std::to_string(e.first);
            }
            if (e.second > 0) {
                if (!vars.empty()) vars += "*";
                vars += yvar;
                if (e.second > 1) vars += "^" + std::to_string(e.second);
            }
            if (vars.empty()) {
                out += mag.get_str();
            } else {
                if (!unit) out += mag.get_str() + "*";
                out += vars;
            }
        }
        return out;
    }

  private:
    std::map<std::pair<int, int>, mpz_class> t_;
};

} // namespace periclass
