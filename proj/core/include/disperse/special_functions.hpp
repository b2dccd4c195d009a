// special_functions.hpp -- erf/erfc for real arguments and the Faddeeva
// function w(z) = exp(-z^2) erfc(-iz) for complex ones, plus the overflow-safe
// combination exp(B^2) erfc(B) that the closed-form displacement formulas need.
#pragma once

#include <complex>

namespace disperse::specfn {

double erf_real(double x);
double erfc_real(double x);

/// Scaled complementary error function exp(x^2) erfc(x), x >= 0.
/// Cancellation-free; this is the real-axis specialization w(ix).
double erfcx_real(double x);

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
///
/// Upper half-plane (including the real axis): trapezoidal sum over Gaussian
/// nodes with the Chiarella-Reichel pole correction, switching to the
/// asymptotic continued series for |z| >= 12. Lower half-plane by reflection
/// w(z) = 2 exp(-z^2) - w(-z), which may overflow for large |Im z| < 0.
std::complex<double> faddeeva_w(std::complex<double> z);

/// exp(B^2) erfc(B) without ever forming exp(B^2) when Re B >= 0 (it is
/// w(iB) there). For Re B < 0 the reflection term 2 exp(B^2) is required;
/// throws OverflowError when Re(B^2) exceeds the double exponent budget.
std::complex<double> exp_sq_erfc(std::complex<double> B);

} // namespace disperse::specfn
