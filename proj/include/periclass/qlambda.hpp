#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include <json.hpp>

#include "periclass/errors.hpp"
#include "periclass/intpoly.hpp"

namespace periclass {

// truncated Laurent series in q with exact rational coefficients; tracks the
// first unknown exponent so every operation knows how far it can be trusted
class QSeries {
public:
    // order value of a series known at every exponent (an exact polynomial)
    static constexpr long kExact = 1L << 60;

    QSeries() = default;

    static QSeries exact(std::vector<mpq_class> coeffs, long lead = 0) {
        QSeries s;
        s.lead_ = lead;
        s.order_ = kExact;
        s.c_ = std::move(coeffs);
        s.normalize();
        return s;
    }

    static QSeries constant(const mpq_class& a) { return exact({a}); }

    static QSeries monomial(const mpq_class& a, long e) { return exact({a}, e); }

    static QSeries truncated(std::vector<mpq_class> coeffs, long lead, long order) {
        QSeries s;
        s.lead_ = lead;
        s.order_ = order;
        s.c_ = std::move(coeffs);
        if (order >= kExact) throw Error("QSeries: truncation order out of range");
        s.c_.resize(static_cast<std::size_t>(std::max(0L, order - lead)));
        s.normalize();
        return s;
    }

    long lead() const { return lead_; }
    long order() const { return order_; }
    bool is_exact() const { return order_ == kExact; }

    // coefficient of q^e; exponents at or above the truncation order are unknowable
    const mpq_class& coeff(long e) const {
        static const mpq_class zero(0);
        if (e >= order_) throw Error("QSeries: coefficient beyond the truncation order");
        if (e < lead_ || e >= lead_ + static_cast<long>(c_.size())) return zero;
        return c_[static_cast<std::size_t>(e - lead_)];
    }

    friend QSeries operator+(const QSeries& a, const QSeries& b) {
        QSeries r;
        r.order_ = std::min(a.order_, b.order_);
        r.lead_ = std::min(a.lead_, b.lead_);
        long hi = r.is_exact()
                      ? std::max(a.lead_ + static_cast<long>(a.c_.size()),
                                 b.lead_ + static_cast<long>(b.c_.size()))
                      : r.order_;
        r.c_.assign(static_cast<std::size_t>(std::max(0L, hi - r.lead_)), mpq_class(0));
        for (long e = r.lead_; e < hi; ++e) {
            mpq_class v = a.window_coeff(e) + b.window_coeff(e);
            r.c_[static_cast<std::size_t>(e - r.lead_)] = std::move(v);
        }
        r.normalize();
        return r;
    }

    friend QSeries operator-(const QSeries& a) {
        QSeries r = a;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        QSeries r;
        r.lead_ = a.lead_ + b.lead_;
        long oa = a.is_exact() ? kExact : a.order_ + b.lead_;
        long ob = b.is_exact() ? kExact : b.order_ + a.lead_;
        r.order_ = std::min({oa, ob, kExact});
        long len;
        if (r.is_exact())
            len = a.c_.empty() || b.c_.empty()
                      ? 0
                      : static_cast<long>(a.c_.size() + b.c_.size()) - 1;
        else
            len = r.order_ - r.lead_;
        if (len < 0) throw Error("QSeries: truncation exhausted in multiplication");
        r.c_.assign(static_cast<std::size_t>(len), mpq_class(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size() && i + j < r.c_.size(); ++j)
                r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        r.normalize();
        return r;
    }

    friend bool operator==(const QSeries& a, const QSeries& b) {
        return a.lead_ == b.lead_ && a.order_ == b.order_ && a.c_ == b.c_;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["lead"] = lead_;
        j["order"] = is_exact() ? nlohmann::ordered_json() : nlohmann::ordered_json(order_);
        nlohmann::ordered_json cs = nlohmann::ordered_json::array();
        for (const auto& v : c_) cs.push_back(v.get_str());
        j["coeffs"] = std::move(cs);
        return j;
    }

private:
    mpq_class window_coeff(long e) const {
        static const mpq_class zero(0);
        if (e < lead_ || e >= lead_ + static_cast<long>(c_.size())) return zero;
        return c_[static_cast<std::size_t>(e - lead_)];
    }

    void normalize() {
        std::size_t drop = 0;
        while (drop < c_.size() && c_[drop] == 0) ++drop;
        if (drop) {
            c_.erase(c_.begin(), c_.begin() + static_cast<long>(drop));
            lead_ += static_cast<long>(drop);
        }
        if (is_exact())
            while (!c_.empty() && c_.back() == 0) c_.pop_back();
        if (c_.empty() && is_exact()) lead_ = 0;
    }

    long lead_ = 0;
    long order_ = kExact;
    std::vector<mpq_class> c_;

    friend QSeries substitute_q_power(const QSeries&, long);
    friend QSeries inverse(const QSeries&);
    friend QSeries truncate(const QSeries&, long);
};

// exponent dilation q -> q^k; exponents that are not multiples of k vanish
inline QSeries substitute_q_power(const QSeries& s, long k) {
    if (k < 1) throw Error("substitute_q_power needs k >= 1");
    if (k == 1) return s;
    QSeries r;
    r.lead_ = k * s.lead_;
    r.order_ = s.is_exact() ? QSeries::kExact : k * s.order_;
    if (!s.c_.empty()) {
        r.c_.assign(static_cast<std::size_t>(k * (static_cast<long>(s.c_.size()) - 1) + 1),
                    mpq_class(0));
        for (std::size_t i = 0; i < s.c_.size(); ++i)
            r.c_[static_cast<std::size_t>(k) * i] = s.c_[i];
    }
    if (!r.is_exact()) r.c_.resize(static_cast<std::size_t>(r.order_ - r.lead_), mpq_class(0));
    return r;
}

// restrict an exact series to a finite truncation order
inline QSeries truncate(const QSeries& s, long order) {
    if (order >= QSeries::kExact) throw Error("truncate: order out of range");
    if (!s.is_exact() && s.order_ <= order) return s;
    QSeries r = s;
    r.order_ = order;
    r.c_.resize(static_cast<std::size_t>(std::max(0L, order - r.lead_)), mpq_class(0));
    r.normalize();
    return r;
}

// multiplicative inverse; the result is trusted up to order - 2 val
inline QSeries inverse(const QSeries& s) {
    if (s.is_exact())
        throw Error("inverse needs a truncated series; apply truncate() first");
    if (s.c_.empty() || s.c_[0] == 0)
        throw Error("inverse: series has no unit leading coefficient after normalization");
    const long v = s.lead_;
    const long len = s.order_ - v;
    std::vector<mpq_class> b(static_cast<std::size_t>(len), mpq_class(0));
    mpq_class inv0 = 1 / s.c_[0];
    b[0] = inv0;
    for (long n = 1; n < len; ++n) {
        mpq_class acc(0);
        for (long i = 1; i <= n; ++i) {
            if (i < static_cast<long>(s.c_.size()) && s.c_[static_cast<std::size_t>(i)] != 0)
                acc += s.c_[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(n - i)];
        }
        b[static_cast<std::size_t>(n)] = -acc * inv0;
    }
    QSeries r;
    r.lead_ = -v;
    r.order_ = s.order_ - 2 * v;
    r.c_ = std::move(b);
    return r;
}

// lambda(z) = 16 q prod (1+q^{2n})^8 / prod (1+q^{2n-1})^8 with q = e^{pi i z},
// accurate through q^N at least
inline QSeries lambda_series(long N) {
    if (N < 1) throw Error("lambda_series needs N >= 1");
    const long M = N + 1;
    auto binom8 = [](long e) {
        std::vector<mpq_class> cs(static_cast<std::size_t>(8 * e + 1), mpq_class(0));
        for (long k = 0; k <= 8; ++k) {
            mpz_class b;
            mpz_bin_uiui(b.get_mpz_t(), 8, static_cast<unsigned long>(k));
            cs[static_cast<std::size_t>(k * e)] = mpq_class(b);
        }
        return QSeries::exact(std::move(cs));
    };
    QSeries num = truncate(QSeries::constant(1), M);
    QSeries den = num;
    for (long n = 1; 2 * n - 1 < M; ++n) {
        if (2 * n < M) num = num * binom8(2 * n);
        den = den * binom8(2 * n - 1);
    }
    return QSeries::monomial(16, 1) * (num * inverse(den));
}

struct SeriesIdentityReport {
    bool ok = true;
    long checked_order = 0;
    long first_bad = 0;
    mpq_class first_bad_coeff;
    bool f_opening_ok = true;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["ok"] = ok;
        j["checked_order"] = checked_order;
        if (!ok) {
            j["first_bad"] = first_bad;
            j["first_bad_coeff"] = first_bad_coeff.get_str();
        }
        j["f_opening_ok"] = f_opening_ok;
        return j;
    }
};

namespace detail {

inline void check_zero_series(const QSeries& s, SeriesIdentityReport& rep) {
    rep.checked_order = s.order();
    for (long e = s.lead(); e < s.order(); ++e) {
        if (s.coeff(e) != 0) {
            rep.ok = false;
            rep.first_bad = e;
            rep.first_bad_coeff = s.coeff(e);
            return;
        }
    }
}

} // namespace detail

// the modular identity lambda^2(z) (lambda(2z)-1)^2 = -16 lambda(2z) (lambda(z)-1),
// plus the opening terms of f(z) = (lambda(2z)-1)^2 / lambda(2z)
inline SeriesIdentityReport verify_lemma11(long N) {
    if (N < 8) throw Error("verify_lemma11 needs N >= 8");
    QSeries lam = lambda_series(N);
    QSeries lam2 = substitute_q_power(lam, 2);
    QSeries one = QSeries::constant(1);
    QSeries lhs = lam * lam * ((lam2 - one) * (lam2 - one));
    QSeries rhs = QSeries::constant(-16) * (lam2 * (lam - one));
    SeriesIdentityReport rep;
    detail::check_zero_series(lhs - rhs, rep);

    QSeries f = ((lam2 - one) * (lam2 - one)) * inverse(lam2);
    const std::pair<long, mpq_class> opening[] = {
        {-2, mpq_class(1, 16)}, {-1, 0}, {0, mpq_class(-3, 2)},
        {1, 0},                 {2, mpq_class(69, 4)}, {4, -128},
    };
    for (const auto& [e, want] : opening)
        if (f.coeff(e) != want) rep.f_opening_ok = false;
    rep.ok = rep.ok && rep.f_opening_ok;
    return rep;
}

// rearranged form (lambda(2z)-1)^2/lambda(2z) + 16 (lambda(z)-1)/lambda(z)^2 = 0
inline SeriesIdentityReport verify_rearranged_form(long N) {
    if (N < 8) throw Error("verify_rearranged_form needs N >= 8");
    QSeries lam = lambda_series(N);
    QSeries lam2 = substitute_q_power(lam, 2);
    QSeries one = QSeries::constant(1);
    QSeries f = ((lam2 - one) * (lam2 - one)) * inverse(lam2);
    QSeries g = QSeries::constant(16) * ((lam - one) * inverse(lam * lam));
    SeriesIdentityReport rep;
    detail::check_zero_series(f + g, rep);
    return rep;
}

struct JLambdaReport {
    bool ok = true;
    bool symbolic_ok = true;
    int trials = 0;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["ok"] = ok;
        j["symbolic_ok"] = symbolic_ok;
        j["trials"] = trials;
        return j;
    }
};

// j(z) = 256 (s+1)^3/s = 256 (t-1)^3/t with s = (lambda-1)^2/lambda and
// t = lambda^2/(lambda-1); checked as a cleared polynomial identity and at
// random rational lambda
inline JLambdaReport verify_j_lambda_identity(int trials) {
    if (trials < 1) throw Error("verify_j_lambda_identity needs trials >= 1");
    JLambdaReport rep;

    IntPoly snum({1, -2, 1});
    IntPoly sden({0, 1});
    IntPoly tnum({0, 0, 1});
    IntPoly tden({-1, 1});
    IntPoly sp = snum + sden;
    IntPoly tm = tnum - tden;
    IntPoly lhs = sp * sp * sp * (tden * tden * tnum);
    IntPoly rhs = tm * tm * tm * (sden * sden * snum);
    rep.symbolic_ok = lhs == rhs;

    auto jboth = [](const mpq_class& l) {
        mpq_class lm = l - 1;
        mpq_class s = lm * lm / l;
        mpq_class sp1 = s + 1;
        mpq_class j1 = 256 * sp1 * sp1 * sp1 / s;
        mpq_class t = l * l / lm;
        mpq_class tm1 = t - 1;
        mpq_class j2 = 256 * tm1 * tm1 * tm1 / t;
        return std::make_pair(j1, j2);
    };

    std::mt19937_64 rng(0x716c616dull);
    std::uniform_int_distribution<long> num(-99, 99);
    std::uniform_int_distribution<long> den(1, 99);
    rep.ok = rep.symbolic_ok;
    while (rep.trials < trials) {
        mpq_class l(num(rng), den(rng));
        l.canonicalize();
        if (l == 0 || l == 1) continue;
        auto [j1, j2] = jboth(l);
        if (j1 != j2) rep.ok = false;
        ++rep.trials;
    }
    return rep;
}

} // namespace periclass
