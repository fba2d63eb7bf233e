#include "levywalk/wait_first.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "levywalk/kernel.hpp"
#include "levywalk/parallel.hpp"
#include "levywalk/special.hpp"

namespace levywalk {

namespace {

constexpr double kDivergenceLevel = 1e12;

void check_point(const EvalPoint& pt) {
  if (!(pt.t > 0.0) || !std::isfinite(pt.t) || !std::isfinite(pt.x))
    throw domain_error("evaluation point needs finite x and t > 0");
}

Method resolve_method(Method m, double alpha) {
  if (m != Method::automatic) return m;
  return alpha == 0.5 ? Method::closed_half : Method::quadrature;
}

}  // namespace

double pdf_wait_first_half(double p, double t, double x) {
  if (!(p > 0.0) || !(p < 1.0)) throw domain_error("wait-first closed form needs p in (0,1)");
  check_point({t, x});
  const double ax = std::fabs(x);
  if (ax >= t) return 0.0;
  // D1 = 2 p^2 t + (1-2p)(t+x) stays positive on |x| < t for every p; D2
  // collapses to 0 only at x = 0, where the density genuinely diverges
  const double d1 = 2.0 * p * p * t + (1.0 - 2.0 * p) * (t + x);
  const double q = 1.0 - p;
  const double d2 = x > 0.0 ? 2.0 * x * q * q : 2.0 * ax * p * p;
  if (d2 == 0.0) return std::numeric_limits<double>::infinity();
  return M_SQRT2 / M_PI * p * q * std::sqrt(t - ax) / (d1 * std::sqrt(d2));
}

double pdf_wait_first_outer(const ModelParams& params, EvalPoint pt, const QuadConfig& cfg,
                            const KernelFn& kernel) {
  check_point(pt);
  const double t = pt.t;
  const double ax = std::fabs(pt.x);
  if (ax >= t) return 0.0;
  // at x = 0 both kernel scales vanish together, K(w,0) ~ w^{alpha-2}, and
  // the w-integral diverges at its lower end like |x|^{alpha-1}: the density
  // has an integrable singularity there for every alpha, as at alpha = 1/2
  if (ax == 0.0) return std::numeric_limits<double>::infinity();

  const double alpha = params.alpha.alpha;
  const double pref = alpha /
                      (2.0 * std::pow(params.p, 1.0 / alpha) *
                       std::pow(1.0 - params.p, 1.0 / alpha) * std::exp(log_gamma(1.0 - alpha)));
  const double x = pt.x;
  const double tpx = t + x;
  const double tmx = t - x;

  // near w = t the factor (t-w)^{-alpha} comes from the exact distance d and
  // the kernel sums shrink by d from their values at the endpoint; the guard
  // absorbs the one-ulp overshoot the substitution can produce at the far end
  auto f_upper = [&](double w, double d) {
    (void)w;
    const double wpx = tpx - d;
    const double wmx = tmx - d;
    if (!(wpx > 0.0) || !(wmx > 0.0)) return 0.0;
    return std::pow(d, -alpha) * kernel(wpx, wmx);
  };

  double value = 0.0, error = 0.0;
  bool converged = true;
  auto accumulate = [&](const IntegralResult& r) {
    value += r.value;
    error += r.error;
    converged = converged && r.converged;
  };
  if (t > 32.0 * ax) {
    // renewal times spread over decades above |x| and the mass concentrates
    // at w = O(|x|), so the piece below t/2 runs in u = log(w/|x|) where each
    // decade costs the same and the vanishing kernel sum is |x| expm1(u),
    // exact at the edge; (t-w)^{-alpha} is tame on this piece
    const double u_top = std::log(t / (2.0 * ax));
    auto g = [&](double u, double ue) {
      (void)u;
      const double w = ax * std::exp(ue);
      const double near_e = ax * std::expm1(ue);
      const double far_e = w + ax;
      const double wpx = x >= 0.0 ? far_e : near_e;
      const double wmx = x >= 0.0 ? near_e : far_e;
      return std::pow(t - w, -alpha) * kernel(wpx, wmx) * w;
    };
    if (alpha < 0.5)
      accumulate(integrate_finite(g, 0.0, u_top, SingularityHint::lower(2.0 * alpha - 1.0), cfg));
    else
      accumulate(integrate_finite([&](double u) { return g(u, u); }, 0.0, u_top, cfg));
    accumulate(integrate_finite(f_upper, 0.5 * t, t, SingularityHint::upper(-alpha), cfg));
  } else if (alpha < 0.5) {
    // the kernel blows up like (w-|x|)^{2 alpha - 1} at the lower endpoint,
    // so both ends are singular: split in the middle and hint each half.
    // d = w - |x| is exactly the vanishing kernel sum there.
    const double mid = 0.5 * (ax + t);
    auto f_lower = [&](double w, double d) {
      const double wpx = x >= 0.0 ? 2.0 * x + d : d;
      const double wmx = x >= 0.0 ? d : 2.0 * ax + d;
      return std::pow(t - w, -alpha) * kernel(wpx, wmx);
    };
    accumulate(integrate_finite(f_lower, ax, mid, SingularityHint::lower(2.0 * alpha - 1.0), cfg));
    accumulate(integrate_finite(f_upper, mid, t, SingularityHint::upper(-alpha), cfg));
  } else {
    accumulate(integrate_finite(f_upper, ax, t, SingularityHint::upper(-alpha), cfg));
  }
  if (!converged)
    throw convergence_error("wait-first quadrature did not converge at x = " + std::to_string(x),
                            pref * value, pref * error);
  return pref * value;
}

namespace {

// w-integral over the dispatched kernel, its budget one decade below cfg
double pdf_wait_first_quadrature(const ModelParams& params, EvalPoint pt, const QuadConfig& cfg) {
  QuadConfig kcfg = cfg;
  kcfg.abs_tol = std::max(cfg.abs_tol * 0.1, 1e-14);
  kcfg.rel_tol = std::max(cfg.rel_tol * 0.1, 1e-11);
  return pdf_wait_first_outer(params, pt, cfg, [&](double wpx, double wmx) {
    return z_kernel_sums(params, wpx, wmx, kcfg);
  });
}

}  // namespace

double pdf_wait_first(const ModelParams& params, EvalPoint pt, const QuadConfig& cfg) {
  if (params.alpha.alpha == 0.5) return pdf_wait_first_half(params.p, pt.t, pt.x);
  return pdf_wait_first_quadrature(params, pt, cfg);
}

DensityCurve curve_wait_first(const ModelParams& params, double t, const std::vector<double>& grid,
                              const QuadConfig& cfg, Method method) {
  if (!(t > 0.0)) throw domain_error("curve needs t > 0");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw domain_error("grid values must be finite");
    if (i > 0 && !(grid[i - 1] < grid[i])) throw domain_error("grid must be strictly increasing");
  }
  const Method resolved = resolve_method(method, params.alpha.alpha);
  if (resolved == Method::meijer)
    throw domain_error("the G-function path needs a rational index; use curve_wait_first_meijer");
  if (resolved == Method::closed_half && params.alpha.alpha != 0.5)
    throw domain_error("closed-form curves exist only at alpha = 1/2");

  DensityCurve curve;
  curve.process = ProcessKind::wait_first;
  curve.alpha = params.alpha.alpha;
  curve.p = params.p;
  curve.t = t;
  curve.method = resolved;
  curve.abscissas = grid;
  curve.values.assign(grid.size(), 0.0);
  curve.error_estimates.assign(grid.size(), 0.0);
  curve.divergent.assign(grid.size(), 0);

  parallel_for(grid.size(), [&](std::size_t i) {
    double v = 0.0, e = 0.0;
    try {
      if (resolved == Method::closed_half) {
        v = pdf_wait_first_half(params.p, t, grid[i]);
      } else {
        // an explicit quadrature request runs the w-integral even at
        // alpha = 1/2, where the dispatched kernel is the closed one
        v = pdf_wait_first_quadrature(params, {t, grid[i]}, cfg);
        e = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(v));
      }
    } catch (const convergence_error& ce) {
      v = ce.best_value;
      e = ce.error_estimate;
    } catch (const numeric_error&) {
      v = std::numeric_limits<double>::quiet_NaN();
      e = std::numeric_limits<double>::infinity();
    }
    curve.values[i] = v;
    curve.error_estimates[i] = e;
    if (!(std::fabs(v) <= kDivergenceLevel)) curve.divergent[i] = 1;
  });
  return curve;
}

}  // namespace levywalk
