#pragma once

// Exception types thrown across the library.  Every failure of an exact
// verification (a divisibility that must hold, a square that must extract,
// an identity that must vanish) raises a distinct type so callers and tests
// can assert the precise failure mode.

#include <stdexcept>
#include <string>

namespace periclass {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// polynomial arithmetic
struct NotDivisible : Error { using Error::Error; };

// resultants
struct DegenerateElimination : Error { using Error::Error; };
struct InsufficientPrecision : Error { using Error::Error; };

// dynamics
struct SquareRootFailure : Error { using Error::Error; };
struct IdentityFailure : Error { using Error::Error; };
struct Mismatch : Error { using Error::Error; };
struct CacheCorrupt : Error { using Error::Error; };

// factorization
struct NotSquarefreeModP : Error { using Error::Error; };

// quadratic forms
struct BadDiscriminant : Error { using Error::Error; };
struct DiscriminantMismatch : Error { using Error::Error; };
struct LedgerOvershoot : Error { using Error::Error; };

// 2-adic arithmetic
struct BadResidue : Error { using Error::Error; };
struct PrecisionExhausted : Error { using Error::Error; };
struct NotInDisc : Error { using Error::Error; };
struct NewtonStall : Error { using Error::Error; };
struct NoIntegerCombination : Error { using Error::Error; };

// floating point oracle
struct PrecisionLoss : Error { using Error::Error; };
struct PoleAtExcludedValue : Error { using Error::Error; };
struct NotAPerfectSquare : Error { using Error::Error; };
struct NoMatch : Error { using Error::Error; };
struct AmbiguousMatch : Error { using Error::Error; };

} // namespace periclass
