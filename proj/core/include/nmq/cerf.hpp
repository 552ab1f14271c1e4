#pragma once

#include <complex>

#include "nmq/errors.hpp"

namespace nmq {

// Error function of complex argument. Maclaurin series for |z| <= 3,
// Laplace continued fraction beyond (via the scaled complement).
// Validated domain |z| <= 30 (RangeError outside), the range exercised by
// the band-gap reservoir model.
std::complex<double> complex_erf(std::complex<double> z);

// Scaled complementary error function e^{w^2} erfc(w) for complex w.
// Well-conditioned for Re w >= 0; the reflection
// erfcx(w) = 2 e^{w^2} - erfcx(-w) covers the left half plane.
std::complex<double> erfcx(std::complex<double> w);

}  // namespace nmq
