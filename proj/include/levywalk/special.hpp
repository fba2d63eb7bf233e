#pragma once

#include <complex>

#include "levywalk/common.hpp"

namespace levywalk {

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// ln Gamma(z) by the Lanczos approximation (g=7, 9 terms), with the
// reflection formula for Re z < 0.5. The imaginary part is continuous only
// piecewise; callers that exponentiate sums of these values are unaffected
// by the 2*pi*i branch jumps.
std::complex<double> log_gamma(std::complex<double> z);

// ln sin(pi z). Direct for |Im z| <= 20, asymptotic beyond, where sin would
// overflow double range around |Im z| ~ 232.
std::complex<double> log_sin_pi(std::complex<double> z);

// ln A(phi) for the positive-stable integral representation,
// A(phi) = (sin(alpha phi)/sin phi)^{alpha/(1-alpha)} * sin((1-alpha)phi)/sin phi
// on (0, pi). phi is clipped to [1e-10, pi - 1e-10]; A is increasing, finite
// at 0+ and divergent at pi-.
double zolotarev_log_a(double alpha, double phi);

}  // namespace levywalk
