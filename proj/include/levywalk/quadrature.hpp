#pragma once

#include <functional>

#include "levywalk/common.hpp"

namespace levywalk {

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;      // summed local error estimates
  long evals = 0;          // integrand evaluations spent
  bool converged = false;  // tolerance reached within the budget
};

enum class Endpoint { none, lower, upper };

// Declares an integrable algebraic endpoint singularity, f ~ (w-a)^exponent
// near the lower endpoint or (b-w)^exponent near the upper one, with exponent
// in (-1,0). The engine removes it with a power substitution before any
// subdivision happens.
struct SingularityHint {
  Endpoint endpoint = Endpoint::none;
  double exponent = 0.0;
  static SingularityHint none() { return {}; }
  static SingularityHint lower(double e) { return {Endpoint::lower, e}; }
  static SingularityHint upper(double e) { return {Endpoint::upper, e}; }
};

// Adaptive Gauss-Kronrod 15(7) on [a,b], worst-interval-first refinement.
// Throws domain_error on bad bounds or an all-zero tolerance pair and
// numeric_error if the integrand returns a non-finite value. Running out of
// budget is not an error: the result comes back with converged=false.
IntegralResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                                const QuadConfig& cfg);

// Hinted variant for an endpoint singularity. The integrand receives w and d,
// where d is the exact distance to the hinted endpoint: the substitution forms
// d first and only then w = endpoint -/+ d, so near the endpoint w carries no
// information beyond its rounded value. The integrand must rebuild every
// difference that cancels at the singularity from d, never from w, or the
// error estimator sees round-off jitter amplified by d^exponent and drills
// without converging. hint.endpoint must name an endpoint.
IntegralResult integrate_finite(const std::function<double(double, double)>& f, double a,
                                double b, SingularityHint hint, const QuadConfig& cfg);

// Integral over (a, infinity) through the rational map w = a - 1 + 1/u with
// u in (0,1). A tail_decay q > 1 declares f ~ w^{-q}; for q < 2 the mapped
// integrand then gets the matching endpoint hint, faster decay needs none.
IntegralResult integrate_semiinfinite(const std::function<double(double)>& f, double a,
                                      const QuadConfig& cfg, double tail_decay = 0.0);

namespace gk15 {
// 15-point Kronrod rule with embedded 7-point Gauss rule, QUADPACK values.
// nodes holds the nonnegative abscissas; odd indices are the Gauss points.
extern const double nodes[8];
extern const double weights_kronrod[8];
extern const double weights_gauss[4];
}  // namespace gk15

}  // namespace levywalk
