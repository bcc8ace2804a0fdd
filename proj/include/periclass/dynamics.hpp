#pragma once

// Iterated-resultant dynamics for a quadratic kernel: the chain R^(n),
// its diagonal R_n, the Moebius assembly P_n, the dyadic rescaling to
// R~_n with its mod-2 profile, the pre-periodic towers s^(r), and the
// pushforward from b_d to p_d (minimal polynomial of the fourth power).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "periclass/bipoly.hpp"
#include "periclass/errors.hpp"
#include "periclass/intpoly.hpp"
#include "periclass/modarith.hpp"
#include "periclass/numutil.hpp"
#include "periclass/resultant.hpp"

namespace periclass {

struct Kernel {
    BiPoly poly;
    std::string name;
};

// x^2 y^2 + 2x + y^2
inline Kernel kernel_f() {
    BiPoly g = BiPoly::monomial(1, 2, 2) + BiPoly::monomial(2, 1, 0) + BiPoly::monomial(1, 0, 2);
    return {g, "F"};
}

// x^2 y^2 - 2(x^2 - 8x + 8)y + x^2
inline Kernel kernel_t() {
    BiPoly g = BiPoly::monomial(1, 2, 2) + BiPoly::monomial(-2, 2, 1) + BiPoly::monomial(16, 1, 1) +
               BiPoly::monomial(-16, 0, 1) + BiPoly::monomial(1, 2, 0);
    return {g, "T"};
}

// 4 x^2 y^2 + x + y^2, the kernel conjugated by x -> 2x
inline Kernel kernel_f_scaled() {
    BiPoly g = BiPoly::monomial(4, 2, 2) + BiPoly::monomial(1, 1, 0) + BiPoly::monomial(1, 0, 2);
    return {g, "Fscaled"};
}

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

inline void atomic_write(const std::filesystem::path& path, const std::string& body) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << body;
    }
    std::filesystem::rename(tmp, path);
}

} // namespace detail

class Chain {
  public:
    explicit Chain(Kernel k, std::string cache_dir = "", bool use_modular = true,
                   bool force = false)
        : k_(std::move(k)), cache_dir_(std::move(cache_dir)), use_modular_(use_modular),
          force_(force) {
        kernel_hash_ = detail::hex64(detail::fnv1a64(k_.name + ":" + k_.poly.to_string()));
        if (!cache_dir_.empty()) {
            std::filesystem::create_directories(cache_dir_);
            cache_valid_ = !force_ && manifest_matches();
        }
    }

    const Kernel& kernel() const { return k_; }

    // R^(n): n-fold composition of the kernel with itself through the chain
    // of middle variables
    const BiPoly& level(int n) {
        if (n < 1) throw Error("chain level needs n >= 1");
        auto it = levels_.find(n);
        if (it != levels_.end()) return it->second;
        if (n == 1) return levels_.emplace(1, k_.poly).first->second;
        if (cache_valid_) {
            BiPoly loaded;
            if (load_level(n, loaded)) return levels_.emplace(n, std::move(loaded)).first->second;
        }
        const BiPoly& prev = level(n - 1);
        BiPoly next = use_modular_ ? resultant_compose_modular(prev, k_.poly)
                                   : resultant_compose(prev, k_.poly);
        if (!cache_dir_.empty()) store_level(n, next);
        return levels_.emplace(n, std::move(next)).first->second;
    }

    // R_n: the diagonal R^(n)(x, x), content-stripped with positive leading
    // coefficient
    const IntPoly& rn(int n) {
        auto it = rns_.find(n);
        if (it != rns_.end()) return it->second;
        IntPoly d = level(n).diagonal().normalized_primitive().first;
        return rns_.emplace(n, std::move(d)).first->second;
    }

    // P_n: alternating Moebius quotient of the R_k over divisors k of n
    IntPoly pn(int n) {
        if (n < 1) throw Error("pn needs n >= 1");
        IntPoly num = IntPoly::constant(1);
        IntPoly den = IntPoly::constant(1);
        for (int k = 1; k <= n; ++k) {
            if (n % k) continue;
            int mu = moebius(n / k);
            if (mu == 1)
                num = num * rn(k);
            else if (mu == -1)
                den = den * rn(k);
        }
        return IntPoly::divexact(num, den);
    }

    // valuation v of the content of R_n(2x); the rescaling divides by 2^v
    long scaled_valuation(int n) {
        const IntPoly& r = rn(n);
        mpz_class c = r.scale_arg(2).content();
        return detail::mpz_v2(c);
    }

    // R~_n: R_n(2x) with the full 2-power content removed
    IntPoly rn_scaled(int n) { return rn(n).dyadic_rescale(IntPoly::Rescale::in); }

    // distinct-degree profile of R~_n mod 2, after verifying the closed form
    // R~_n = x^(2^n) + x over F_2; Mismatch reports a broken chain
    std::map<long, long> mod2_profile(int n) {
        IntPoly rt = rn_scaled(n);
        modarith::FpPoly f(static_cast<std::size_t>(rt.degree()) + 1);
        for (long i = 0; i <= rt.degree(); ++i)
            f[static_cast<std::size_t>(i)] = modarith::mpz_mod_u(rt[static_cast<std::size_t>(i)], 2);
        modarith::fp_normalize(f);
        modarith::FpPoly expect(static_cast<std::size_t>(1) << n, 0);
        expect[1] = 1;
        expect.push_back(1);
        if (f != expect) throw Mismatch("scaled diagonal mod 2 is not x^(2^n) + x");
        std::map<long, long> profile;
        modarith::FpPoly g = f;
        modarith::FpPoly xq{0, 1};
        for (long d = 1; !g.empty() && modarith::fp_deg(g) > 0; ++d) {
            xq = modarith::fp_rem(modarith::fp_mul(xq, xq, 2), g, 2);
            modarith::FpPoly diff = modarith::fp_sub(xq, modarith::FpPoly{0, 1}, 2);
            modarith::FpPoly h = modarith::fp_gcd(diff, g, 2);
            if (modarith::fp_deg(h) > 0) {
                profile[d] = modarith::fp_deg(h) / d;
                modarith::FpPoly rem = g;
                modarith::FpPoly q = modarith::fp_divmod_inplace(rem, h, 2);
                if (!rem.empty()) throw Mismatch("distinct-degree split failed");
                g = std::move(q);
                xq = modarith::fp_rem(xq, g, 2);
            }
        }
        return profile;
    }

  private:
    Kernel k_;
    std::string cache_dir_;
    bool use_modular_;
    bool force_;
    bool cache_valid_ = false;
    std::string kernel_hash_;
    std::map<int, BiPoly> levels_;
    std::map<int, IntPoly> rns_;

    std::filesystem::path level_path(int n) const {
        return std::filesystem::path(cache_dir_) /
               ("RN_" + k_.name + "_" + std::to_string(n) + ".json");
    }

    std::filesystem::path manifest_path() const {
        return std::filesystem::path(cache_dir_) / "manifest.json";
    }

    bool manifest_matches() const {
        std::ifstream in(manifest_path());
        if (!in) return false;
        nlohmann::json m;
        try {
            in >> m;
            return m.at("kernels").at(k_.name).get<std::string>() == kernel_hash_;
        } catch (...) {
            return false;
        }
    }

    bool load_level(int n, BiPoly& out) const {
        std::ifstream in(level_path(n));
        if (!in) return false;
        try {
            nlohmann::json j;
            in >> j;
            out = BiPoly::from_json(j);
            return true;
        } catch (...) {
            throw CacheCorrupt("unreadable cache file " + level_path(n).string());
        }
    }

    void store_level(int n, const BiPoly& b) {
        detail::atomic_write(level_path(n), b.to_json().dump());
        nlohmann::ordered_json m;
        {
            std::ifstream in(manifest_path());
            if (in) {
                try {
                    in >> m;
                } catch (...) {
                    m = nlohmann::ordered_json();
                }
            }
        }
        if (!m.contains("version")) m["version"] = 1;
        m["kernels"][k_.name] = kernel_hash_;
        detail::atomic_write(manifest_path(), m.dump(2));
        cache_valid_ = true;
    }
};

// s^(1): the tower base (x-1)^deg p(x/(x-1)), normalized primitive with
// positive leading coefficient
inline IntPoly tower_base(const IntPoly& pd) {
    if (pd.eval(mpz_class(1)) == 0) throw Error("tower base degenerates: p(1) = 0");
    return pd.involution_numerator().normalized_primitive().first;
}

// s^(r) for the kernel x^2 y^2 - 2(x^2 - 8x + 8)y + x^2: r = 1 is the tower
// base; r = 2 extracts the square root of the resultant; r >= 3 is the plain
// content-stripped resultant against s^(r-1)
inline IntPoly preperiodic_poly(const IntPoly& pd, int r) {
    if (r < 1) throw Error("preperiodic_poly needs r >= 1");
    IntPoly s = tower_base(pd);
    if (r == 1) return s;
    BiPoly gt = kernel_t().poly;
    for (int level = 2; level <= r; ++level) {
        IntPoly res = resultant_y(gt, BiPoly::from_y_poly(s));
        if (level == 2) {
            IntPoly root = squarefree_part(res);
            IntPoly check = root * root;
            try {
                IntPoly c = IntPoly::divexact(res, check);
                if (c.degree() != 0) throw NotDivisible("quotient not constant");
            } catch (const NotDivisible&) {
                throw SquareRootFailure("level-2 resultant is not a constant times a square");
            }
            s = root;
        } else {
            s = res.normalized_primitive().first;
        }
    }
    return s;
}

// p_d from b_d: minimal polynomial of the fourth power of a root, as the
// squarefree part of Res_y(b(y), x - y^4); verifies the four-fold product
// identity p(x^4) = b(x) b(-x) b(ix) b(-ix) over the integers
inline IntPoly pd_from_bd(const IntPoly& bd) {
    BiPoly f = BiPoly::from_y_poly(bd);
    BiPoly g = BiPoly::monomial(1, 1, 0) - BiPoly::monomial(1, 0, 4);
    IntPoly p = squarefree_part(resultant_y(f, g));
    IntPoly c = (bd * bd.subst_neg()).compress_even();
    IntPoly d = (c * c.subst_neg()).compress_even();
    if (p != d) throw IdentityFailure("four-fold product does not reproduce the pushforward");
    return p;
}

} // namespace periclass
