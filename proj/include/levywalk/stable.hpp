#pragma once

#include "levywalk/common.hpp"
#include "levywalk/quadrature.hpp"

namespace levywalk {

// Density of the one-sided alpha-stable law with Laplace transform
// exp(-u^alpha), evaluated at x. Zero for x <= 0.

// Closed form at alpha = 1/2: x^{-3/2} exp(-1/(4x)) / (2 sqrt(pi)).
double r_half_closed(double x);

// Alternating large-x series, valid roughly for x above 1. Stops when two
// consecutive terms fall below tol relative to the running sum; throws
// convergence_error (carrying the partial sum) on the 200-term cap or when
// cancellation has destroyed the requested accuracy. Requires x > 0.
double r_alpha_series(StableIndex alpha, double x, double tol = 1e-12);

// Integral representation: a log-scaled exponential integral over (0, pi)
// of the A(phi) factor. Accurate down to very small x; underflows cleanly
// to 0 once the whole integrand leaves double range. Requires x > 0.
double r_alpha_integral(StableIndex alpha, double x, const QuadConfig& cfg = {});

// Dispatcher: exact closed form at alpha = 1/2, otherwise the series for
// x >= x*(alpha) and the integral below, with x*(alpha) = 1 for alpha <= 1/2
// and 2 above. Returns 0 for x <= 0; non-finite x is a domain error.
double r_alpha(StableIndex alpha, double x, const QuadConfig& cfg = {});

// Accelerated r_alpha for hot inner loops: a shared per-alpha piecewise
// Chebyshev fit of log r on a log abscissa, accurate to about 1e-11 relative,
// falling back to the series above the fitted range and to an exact 0 below
// it (where r has already left double range). The table for each alpha is
// built once on first use and then read lock-free, so concurrent calls are
// safe. Same domain rules as r_alpha.
double r_alpha_cached(StableIndex alpha, double x);

}  // namespace levywalk
