#pragma once

#include <complex>
#include <stdexcept>

namespace diracpq {

using cplx = std::complex<double>;

inline constexpr cplx imag_unit{0.0, 1.0};

// Runtime numerical-guard violation (boundary contact, size guards,
// non-convergent quadrature). Distinct from std::invalid_argument, which
// is reserved for precondition/config errors.
struct guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace diracpq
