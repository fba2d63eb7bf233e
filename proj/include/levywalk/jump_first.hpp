#pragma once

#include "levywalk/common.hpp"
#include "levywalk/quadrature.hpp"
#include "levywalk/wait_first.hpp"

namespace levywalk {

enum class RegionCase { interior, upper_tail, lower_tail };

// Region of a jump-first evaluation point: |y| < t is interior, y >= t the
// upper tail, y <= -t the lower tail.
RegionCase region_case(double t, double y);

// Jump-first walk density at alpha = 1/2: closed form, supported on the whole
// line, finite everywhere, continuous with cusps at y = +-t.
double pdf_jump_first_half(double p, double t, double y);

// The double integral defining the jump-first density. Outer integral over
// the last renewal position x in (-t, t) weighted by the overshoot jump tail
// (up-jumps reach y from x < y, down-jumps from x > y); inner integral
// W(x, L) = int_L^t K(w, x) dw over the admissible last renewal time. Region
// splits, kink splits, and endpoint hints are chosen per case; sub-integrals
// that miss the budget are retried with doubled tolerances twice before a
// convergence_error escapes. Kernel supplied by the caller as in the
// wait-first path.
double pdf_jump_first_outer(const ModelParams& params, double t, double y, const QuadConfig& cfg,
                            const KernelFn& kernel);

// Jump-first density: closed form at alpha = 1/2, otherwise the double
// integral over the quadrature kernel. The default budget is the looser
// jump_first_default_config(), not QuadConfig{}: every evaluation away from
// alpha = 1/2 costs a triple nesting of quadratures.
double pdf_jump_first(const ModelParams& params, double t, double y, const QuadConfig& cfg);
double pdf_jump_first(const ModelParams& params, double t, double y);

// {abs_tol 1e-8, rel_tol 1e-4, max_depth 30, max_evals 200000}
QuadConfig jump_first_default_config();

// Same conventions as curve_wait_first.
DensityCurve curve_jump_first(const ModelParams& params, double t, const std::vector<double>& grid,
                              const QuadConfig& cfg, Method method = Method::automatic);
DensityCurve curve_jump_first(const ModelParams& params, double t, const std::vector<double>& grid);

}  // namespace levywalk
