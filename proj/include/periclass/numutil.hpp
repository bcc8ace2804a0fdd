#pragma once

// Small shared number-theory helpers.

#include "periclass/errors.hpp"

namespace periclass {

inline int moebius(int n) {
    if (n < 1) throw Error("moebius needs n >= 1");
    int mu = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

} // namespace periclass
