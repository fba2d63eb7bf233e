#include "levywalk/jump_first.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "levywalk/kernel.hpp"
#include "levywalk/parallel.hpp"
#include "levywalk/special.hpp"

namespace levywalk {

namespace {

constexpr double kDivergenceLevel = 1e12;

void check_args(double t, double y) {
  if (!(t > 0.0) || !std::isfinite(t) || !std::isfinite(y))
    throw domain_error("jump-first density needs finite y and t > 0");
}

// Sub-integral with doubling retries: the outer integrand is itself a
// quadrature, so an isolated hard spot gets two more chances with a relaxed
// target before the whole evaluation reports failure.
template <typename RunOnce>
IntegralResult retry_integral(RunOnce&& run, QuadConfig cfg, const char* label) {
  IntegralResult res;
  for (int attempt = 0; attempt < 3; ++attempt) {
    res = run(cfg);
    if (res.converged) return res;
    cfg.abs_tol *= 2.0;
    cfg.rel_tol *= 2.0;
  }
  throw convergence_error(std::string("jump-first ") + label + " integral did not converge",
                          res.value, res.error);
}

IntegralResult robust_integral(const std::function<double(double)>& f, double a, double b,
                               const QuadConfig& cfg, const char* label) {
  if (!(b - a > 0.0)) return {};
  return retry_integral([&](const QuadConfig& c) { return integrate_finite(f, a, b, c); }, cfg,
                        label);
}

IntegralResult robust_integral(const std::function<double(double, double)>& f, double a, double b,
                               SingularityHint hint, const QuadConfig& cfg, const char* label) {
  if (!(b - a > 0.0)) return {};
  return retry_integral(
      [&](const QuadConfig& c) { return integrate_finite(f, a, b, hint, c); }, cfg, label);
}

}  // namespace

RegionCase region_case(double t, double y) {
  check_args(t, y);
  if (y >= t) return RegionCase::upper_tail;
  if (y <= -t) return RegionCase::lower_tail;
  return RegionCase::interior;
}

double pdf_jump_first_half(double p, double t, double y) {
  if (!(p > 0.0) || !(p < 1.0)) throw domain_error("jump-first closed form needs p in (0,1)");
  check_args(t, y);
  const double q = 1.0 - p;
  const double st = std::sqrt(t);
  if (y >= t) return p / M_PI * st / (y * (p * std::sqrt(y - t) + q * std::sqrt(y + t)));
  if (y <= -t) return -q / M_PI * st / (y * (p * std::sqrt(t - y) + q * std::sqrt(-y - t)));
  // interior denominator (1 - 2pq) t + (1-2p) y never vanishes on |y| < t
  // because 1 - 2pq > |1 - 2p|
  const double den = (1.0 - 2.0 * p * q) * t + (1.0 - 2.0 * p) * y;
  return 2.0 * p * q * st / (M_PI * (std::sqrt(t + y) + std::sqrt(t - y)) * den);
}

double pdf_jump_first_outer(const ModelParams& params, double t, double y, const QuadConfig& cfg,
                            const KernelFn& kernel) {
  check_args(t, y);
  const double alpha = params.alpha.alpha;
  const double p = params.p;
  const double gam = std::exp(log_gamma(1.0 - alpha));
  // weights of the up-jump reach (renewal at x < y) and down-jump reach
  const double c_up = alpha * alpha * std::pow(p, 1.0 - 1.0 / alpha) /
                      (2.0 * std::pow(1.0 - p, 1.0 / alpha) * gam);
  const double c_dn = alpha * alpha * std::pow(1.0 - p, 1.0 - 1.0 / alpha) /
                      (2.0 * std::pow(p, 1.0 / alpha) * gam);

  QuadConfig wcfg = cfg;
  wcfg.abs_tol = std::max(cfg.abs_tol * 0.2, 1e-14);
  wcfg.rel_tol = std::max(cfg.rel_tol * 0.2, 1e-10);

  // W(x, reach) = int over admissible renewal times w in (max(|x|,reach), t)
  // of K(w, x). When the limit sits on |x| itself the kernel edge
  // (w-|x|)^{2 alpha - 1} needs care: the hinted form rebuilds the vanishing
  // kernel sum from the exact distance d = w - |x|, and once t dwarfs |x| the
  // renewal times spread over decades, so the integral runs in u = log(w/|x|)
  // where that sum is |x| expm1(u), exact at both ends.
  auto walk_mass = [&](double x, double reach) -> double {
    const double ax = std::fabs(x);
    const double lo = std::max(ax, reach);
    if (!(lo < t)) return 0.0;
    if (ax >= reach) {
      if (lo > 0.0 && t > 32.0 * lo) {
        const double u_top = std::log(t / lo);
        auto g = [&](double u, double ue) {
          (void)u;
          const double w = lo * std::exp(ue);
          const double near_e = lo * std::expm1(ue);
          const double far_e = w + lo;
          const double wpx = x >= 0.0 ? far_e : near_e;
          const double wmx = x >= 0.0 ? near_e : far_e;
          return kernel(wpx, wmx) * w;
        };
        if (alpha < 0.5)
          return robust_integral(g, 0.0, u_top, SingularityHint::lower(2.0 * alpha - 1.0), wcfg,
                                 "inner log")
              .value;
        return robust_integral([&](double u) { return g(u, u); }, 0.0, u_top, wcfg, "inner log")
            .value;
      }
      if (alpha < 0.5) {
        auto g = [&](double w, double d) {
          (void)w;
          const double wpx = x >= 0.0 ? 2.0 * x + d : d;
          const double wmx = x >= 0.0 ? d : 2.0 * ax + d;
          return kernel(wpx, wmx);
        };
        return robust_integral(g, lo, t, SingularityHint::lower(2.0 * alpha - 1.0), wcfg, "inner")
            .value;
      }
    }
    return robust_integral([&](double w) { return kernel(w + x, w - x); }, lo, t, wcfg, "inner")
        .value;
  };

  // W over the top slice [t-wid, t] of renewal times, parametrized by
  // w = t - tau*wid so the slice width enters exactly; used where the natural
  // lower limit would have to be formed by cancelling against t. The tail
  // case |x| = t - wid puts the kernel edge at tau = 1, hinted for alpha < 1/2.
  auto walk_mass_top = [&](double x, double wid, bool kink_at_bottom) {
    if (!(wid > 0.0)) return 0.0;
    const double tpx = t + x;
    const double tmx = t - x;
    if (kink_at_bottom && alpha < 0.5) {
      auto g = [&](double tau, double dtau) {
        (void)tau;
        const double near_e = dtau * wid;  // the vanishing kernel sum w - |x|
        const double far_e =
            x >= 0.0 ? tpx - (1.0 - dtau) * wid : tmx - (1.0 - dtau) * wid;
        const double wpx = x >= 0.0 ? far_e : near_e;
        const double wmx = x >= 0.0 ? near_e : far_e;
        return kernel(wpx, wmx);
      };
      return wid * robust_integral(g, 0.0, 1.0, SingularityHint::upper(2.0 * alpha - 1.0), wcfg,
                                   "inner top")
                       .value;
    }
    auto f = [&](double tau) {
      const double dw = tau * wid;
      const double wpx = tpx - dw;
      const double wmx = tmx - dw;
      if (!(wpx > 0.0) || !(wmx > 0.0)) return 0.0;
      return kernel(wpx, wmx);
    };
    return wid * robust_integral(f, 0.0, 1.0, wcfg, "inner top").value;
  };

  const RegionCase region = region_case(t, y);
  if (region == RegionCase::interior) {
    // a jump of size w covers w - (t - w) of forward distance by time t, so
    // up-jumps from x reach y only for renewal times w >= t - y + x; the
    // mass factor then vanishes linearly at x = y, taming the jump weight
    // (y-x)^{-1-alpha} to an integrable (y-x)^{-alpha} edge
    auto f_up = [&](double x) { return std::pow(y - x, -1.0 - alpha) * walk_mass(x, t - y + x); };
    auto f_dn = [&](double x) { return std::pow(x - y, -1.0 - alpha) * walk_mass(x, t + y - x); };
    // near x = y the admissible window is the top slice of width d = |y - x|,
    // which the hint hands over exactly
    auto g_up = [&](double x, double d) {
      (void)x;
      return std::pow(d, -1.0 - alpha) * walk_mass_top(y - d, d, false);
    };
    auto g_dn = [&](double x, double d) {
      (void)x;
      return std::pow(d, -1.0 - alpha) * walk_mass_top(y + d, d, false);
    };
    const double up_mid = 0.5 * (y - t);
    const double dn_mid = 0.5 * (y + t);
    const IntegralResult up_far = robust_integral(f_up, -t, up_mid, cfg, "interior up far");
    const IntegralResult up_near =
        robust_integral(g_up, up_mid, y, SingularityHint::upper(-alpha), cfg, "interior up near");
    const IntegralResult dn_near =
        robust_integral(g_dn, y, dn_mid, SingularityHint::lower(-alpha), cfg, "interior down near");
    const IntegralResult dn_far = robust_integral(f_dn, dn_mid, t, cfg, "interior down far");
    return c_up * (up_far.value + up_near.value) + c_dn * (dn_near.value + dn_far.value);
  }

  // tails: every renewal position contributes its whole mass W(x, |x|). That
  // mass has an integrable |x|^{alpha-1} cusp at x = 0, so the integral splits
  // there and both flanks carry the cusp hint, with the evaluation point
  // rebuilt as +-d from the hint distance. Exactly on the boundary y = +-t the
  // mass vanishes like (t -+ x)^{2 alpha} against the blowing jump weight,
  // leaving an integrable (t -+ x)^{alpha-1} edge on a further split segment.
  const double edge_tol = 1e-9 * std::max(t, 1.0);
  if (region == RegionCase::upper_tail) {
    auto g_cusp_left = [&](double x, double d) {
      (void)x;
      return std::pow(y + d, -1.0 - alpha) * walk_mass(-d, 0.0);
    };
    auto g_cusp_right = [&](double x, double d) {
      (void)x;
      return std::pow(y - d, -1.0 - alpha) * walk_mass(d, 0.0);
    };
    const double mid = 0.5 * t;
    const IntegralResult left = robust_integral(
        g_cusp_left, -t, 0.0, SingularityHint::upper(alpha - 1.0), cfg, "upper tail left");
    const IntegralResult inner = robust_integral(
        g_cusp_right, 0.0, mid, SingularityHint::lower(alpha - 1.0), cfg, "upper tail inner");
    IntegralResult edge;
    if (y - t <= edge_tol) {
      // with y pinned to the boundary, d = t - x is both the jump distance
      // shortfall and the renewal window width
      const double ymt = y - t;
      auto g = [&](double x, double d) {
        return std::pow(ymt + d, -1.0 - alpha) * walk_mass_top(x, d, true);
      };
      edge =
          robust_integral(g, mid, t, SingularityHint::upper(alpha - 1.0), cfg, "upper tail edge");
    } else {
      auto f = [&](double x) { return std::pow(y - x, -1.0 - alpha) * walk_mass(x, 0.0); };
      edge = robust_integral(f, mid, t, cfg, "upper tail edge");
    }
    return c_up * (left.value + inner.value + edge.value);
  }
  auto g_cusp_left = [&](double x, double d) {
    (void)x;
    return std::pow(-d - y, -1.0 - alpha) * walk_mass(-d, 0.0);
  };
  auto g_cusp_right = [&](double x, double d) {
    (void)x;
    return std::pow(d - y, -1.0 - alpha) * walk_mass(d, 0.0);
  };
  const double mid = -0.5 * t;
  IntegralResult edge;
  if (-t - y <= edge_tol) {
    const double mty = -t - y;
    auto g = [&](double x, double d) {
      return std::pow(mty + d, -1.0 - alpha) * walk_mass_top(x, d, true);
    };
    edge = robust_integral(g, -t, mid, SingularityHint::lower(alpha - 1.0), cfg, "lower tail edge");
  } else {
    auto f = [&](double x) { return std::pow(x - y, -1.0 - alpha) * walk_mass(x, 0.0); };
    edge = robust_integral(f, -t, mid, cfg, "lower tail edge");
  }
  const IntegralResult inner = robust_integral(
      g_cusp_left, mid, 0.0, SingularityHint::upper(alpha - 1.0), cfg, "lower tail inner");
  const IntegralResult right = robust_integral(
      g_cusp_right, 0.0, t, SingularityHint::lower(alpha - 1.0), cfg, "lower tail right");
  return c_dn * (edge.value + inner.value + right.value);
}

QuadConfig jump_first_default_config() {
  QuadConfig cfg;
  cfg.abs_tol = 1e-8;
  cfg.rel_tol = 1e-4;
  return cfg;
}

namespace {

double pdf_jump_first_quadrature(const ModelParams& params, double t, double y,
                                 const QuadConfig& cfg) {
  QuadConfig kcfg = cfg;
  kcfg.abs_tol = std::max(cfg.abs_tol * 0.04, 1e-14);
  kcfg.rel_tol = std::max(cfg.rel_tol * 0.04, 1e-11);
  return pdf_jump_first_outer(params, t, y, cfg, [&](double wpx, double wmx) {
    return z_kernel_sums(params, wpx, wmx, kcfg);
  });
}

}  // namespace

double pdf_jump_first(const ModelParams& params, double t, double y, const QuadConfig& cfg) {
  if (params.alpha.alpha == 0.5) return pdf_jump_first_half(params.p, t, y);
  return pdf_jump_first_quadrature(params, t, y, cfg);
}

double pdf_jump_first(const ModelParams& params, double t, double y) {
  return pdf_jump_first(params, t, y, jump_first_default_config());
}

DensityCurve curve_jump_first(const ModelParams& params, double t, const std::vector<double>& grid,
                              const QuadConfig& cfg, Method method) {
  if (!(t > 0.0)) throw domain_error("curve needs t > 0");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw domain_error("grid values must be finite");
    if (i > 0 && !(grid[i - 1] < grid[i])) throw domain_error("grid must be strictly increasing");
  }
  Method resolved = method;
  if (resolved == Method::automatic)
    resolved = params.alpha.alpha == 0.5 ? Method::closed_half : Method::quadrature;
  if (resolved == Method::meijer)
    throw domain_error("no G-function path exists for the jump-first density");
  if (resolved == Method::closed_half && params.alpha.alpha != 0.5)
    throw domain_error("closed-form curves exist only at alpha = 1/2");

  DensityCurve curve;
  curve.process = ProcessKind::jump_first;
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
        v = pdf_jump_first_half(params.p, t, grid[i]);
      } else {
        v = pdf_jump_first_quadrature(params, t, grid[i], cfg);
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

DensityCurve curve_jump_first(const ModelParams& params, double t,
                              const std::vector<double>& grid) {
  return curve_jump_first(params, t, grid, jump_first_default_config());
}

}  // namespace levywalk
