#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "levywalk/common.hpp"
#include "levywalk/quadrature.hpp"

namespace levywalk {

enum class ProcessKind { wait_first, jump_first };
enum class Method { automatic, quadrature, closed_half, meijer };

struct EvalPoint {
  double t;
  double x;
};

// A density sampled on a fixed grid, plus the metadata needed to recompute
// it. Divergent entries hold +inf in values with the divergent flag set; the
// density there is a genuine integrable singularity, not a failure.
struct DensityCurve {
  ProcessKind process = ProcessKind::wait_first;
  double alpha = 0.5;
  double p = 0.5;
  double t = 1.0;
  Method method = Method::automatic;
  std::vector<double> abscissas;
  std::vector<double> values;
  std::vector<double> error_estimates;
  std::vector<std::uint8_t> divergent;
};

// Kernel evaluated from the sums (w+x, w-x), both positive. Outer integrals
// pass the vanishing sum straight out of their singularity-removing
// substitution, which is why the kernel never sees w and x separately: the
// small sum would be destroyed by cancellation if it were rebuilt from them.
using KernelFn = std::function<double(double, double)>;

// Wait-first walk density at alpha = 1/2: closed form, supported on |x| < t,
// +inf at x = 0 (integrable), 0 on and outside the boundary.
double pdf_wait_first_half(double p, double t, double x);

// The w-integral that defines the wait-first density,
//   pref * int_{|x|}^t (t-w)^{-alpha} K(w,x) dw,
// with the endpoint singularities removed by hints: (t-w)^{-alpha} above and,
// for alpha < 1/2, the kernel's (w-|x|)^{2 alpha - 1} blowup below, in which
// case the range is split at its midpoint. The kernel is caller-supplied so
// the quadrature, closed-form, and Mellin-Barnes kernels all share this path.
double pdf_wait_first_outer(const ModelParams& params, EvalPoint pt, const QuadConfig& cfg,
                            const KernelFn& kernel);

// Wait-first density: closed form at alpha = 1/2, otherwise the w-integral
// over the quadrature kernel, whose budget is one decade tighter than cfg.
double pdf_wait_first(const ModelParams& params, EvalPoint pt, const QuadConfig& cfg = {});

// Evaluates the density on a sorted grid, in parallel over points. Points
// where the evaluation fails to converge record the best value along with its
// error estimate; values above 1e12 (or infinite) get the divergent flag.
DensityCurve curve_wait_first(const ModelParams& params, double t, const std::vector<double>& grid,
                              const QuadConfig& cfg = {}, Method method = Method::automatic);

}  // namespace levywalk
