#include "levywalk/meijer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "levywalk/kernel.hpp"
#include "levywalk/parallel.hpp"
#include "levywalk/special.hpp"

namespace levywalk {

namespace {

constexpr double kCancelTol = 1e-12;
constexpr double kHybridDelta = 0.05;
constexpr double kLnTwoPi = 1.8378770664093454836;

// Remove numerator/denominator gamma pairs whose parameters agree to
// kCancelTol; those ratios are exactly 1 in intent, and keeping them would
// shrink the pole-free contour gap for nothing.
void cancel_pairs(std::vector<double>& num, std::vector<double>& den) {
  for (std::size_t i = 0; i < num.size();) {
    bool hit = false;
    for (std::size_t j = 0; j < den.size(); ++j) {
      if (std::fabs(num[i] - den[j]) <= kCancelTol) {
        den.erase(den.begin() + static_cast<std::ptrdiff_t>(j));
        num.erase(num.begin() + static_cast<std::ptrdiff_t>(i));
        hit = true;
        break;
      }
    }
    if (!hit) ++i;
  }
}

}  // namespace

std::vector<double> delta_list(int k, double a) {
  if (k < 1) throw domain_error("delta_list needs k >= 1");
  std::vector<double> out(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) out[static_cast<std::size_t>(j)] = (a + j) / k;
  return out;
}

MeijerSpec::MeijerSpec(int m_, int n_, std::vector<double> a, std::vector<double> b, double z)
    : m(m_), n(n_), a_list(std::move(a)), b_list(std::move(b)), argument(z) {
  if (m < 1 || m > static_cast<int>(b_list.size()))
    throw domain_error("meijer orders need 1 <= m <= q");
  if (n < 0 || n > static_cast<int>(a_list.size()))
    throw domain_error("meijer orders need 0 <= n <= p");
  if (!std::isfinite(z) || !(z > 0.0))
    throw domain_error("meijer argument must be positive and finite");
  for (double v : a_list)
    if (!std::isfinite(v)) throw domain_error("meijer parameters must be finite");
  for (double v : b_list)
    if (!std::isfinite(v)) throw domain_error("meijer parameters must be finite");

  num_minus.assign(b_list.begin(), b_list.begin() + m);
  den_plus.assign(b_list.begin() + m, b_list.end());
  num_plus.assign(a_list.begin(), a_list.begin() + n);
  den_minus.assign(a_list.begin() + n, a_list.end());
  cancel_pairs(num_minus, den_minus);
  cancel_pairs(num_plus, den_plus);

  if (num_minus.empty())
    throw domain_error("meijer contour needs a surviving gamma in the principal b group");
  const double right = *std::min_element(num_minus.begin(), num_minus.end());
  double left = -std::numeric_limits<double>::infinity();
  if (!num_plus.empty()) left = *std::max_element(num_plus.begin(), num_plus.end()) - 1.0;
  if (!(left < right - 1e-9))
    throw domain_error("meijer pole groups leave no contour gap");
  sigma = std::isfinite(left) ? 0.5 * (left + right) : right - 0.5;
}

double eval_meijer_g(const MeijerSpec& spec, const QuadConfig& cfg) {
  const double lnz = std::log(spec.argument);
  auto ln_f = [&](std::complex<double> s) {
    std::complex<double> acc = s * lnz;
    for (double b : spec.num_minus) acc += log_gamma(b - s);
    for (double ap : spec.num_plus) acc += log_gamma(1.0 - ap + s);
    for (double ap : spec.den_minus) acc -= log_gamma(ap - s);
    for (double b : spec.den_plus) acc -= log_gamma(1.0 - b + s);
    return acc;
  };

  const double env0 = ln_f({spec.sigma, 0.0}).real();

  // all parameters are real and z > 0, so F(conj s) = conj F(s) and the
  // contour folds onto T >= 0; verify the symmetry actually holds before
  // relying on it (on the env0-scaled integrand, which cannot overflow)
  for (double t0 : {1.7, 13.3}) {
    const std::complex<double> up = std::exp(ln_f({spec.sigma, t0}) - env0);
    const std::complex<double> dn = std::exp(ln_f({spec.sigma, -t0}) - env0);
    if (std::abs(dn - std::conj(up)) > 1e-8 * (std::abs(up) + 1e-300))
      throw numeric_error("meijer contour integrand lost conjugate symmetry");
  }

  // the z^s modulus is constant in T, so decay along the contour is pure
  // gamma envelope; scan T doubling from 8 until it has dropped by e^{-40}
  double t_max = 8.0;
  while (t_max < 64.0 && ln_f({spec.sigma, t_max}).real() > env0 - 40.0) t_max *= 2.0;
  if (ln_f({spec.sigma, t_max}).real() > env0 - 40.0)
    throw convergence_error("meijer contour integrand decays too slowly", 0.0,
                            std::numeric_limits<double>::infinity());

  // integrate exp(ln F - env0) so huge argument powers cannot overflow
  auto integrand = [&](double t) {
    const std::complex<double> v = ln_f({spec.sigma, t});
    return std::exp(v.real() - env0) * std::cos(v.imag());
  };
  QuadConfig ccfg = cfg;
  ccfg.abs_tol = std::max({1e-15, cfg.abs_tol * std::exp(std::min(700.0, -env0)) * M_PI});
  ccfg.rel_tol = std::max(cfg.rel_tol, 1e-13);
  IntegralResult res = integrate_finite(integrand, 0.0, t_max, ccfg);
  const double scale = std::exp(env0) / M_PI;
  if (!res.converged)
    throw convergence_error("meijer contour quadrature did not converge", scale * res.value,
                            scale * res.error);
  return scale * res.value;
}

double r_rational(const RationalIndex& idx, double x, const QuadConfig& cfg) {
  if (!std::isfinite(x) || !(x > 0.0)) throw domain_error("r_rational needs finite x > 0");
  const int l = idx.l, k = idx.k;
  const double ln_zeta = l * std::log(static_cast<double>(l)) -
                         k * std::log(static_cast<double>(k)) - l * std::log(x);
  const double zeta = std::exp(ln_zeta);
  if (zeta == 0.0) return 0.0;  // far tail below double resolution
  MeijerSpec spec(k, 0, delta_list(l, 0.0), delta_list(k, 0.0), zeta);
  const double g = eval_meijer_g(spec, cfg);
  const double pref =
      std::sqrt(static_cast<double>(k) * l) * std::exp(-0.5 * (k - l) * kLnTwoPi) / x;
  return pref * g;
}

double z_kernel_meijer_sums(const RationalIndex& idx, double p, double w_plus_x,
                            double w_minus_x, const QuadConfig& cfg, MeijerKernelStats* stats) {
  if (!(p > 0.0) || !(p < 1.0)) throw domain_error("kernel needs p in (0,1)");
  if (!std::isfinite(w_plus_x) || !std::isfinite(w_minus_x) || !(w_plus_x > 0.0) ||
      !(w_minus_x > 0.0))
    throw domain_error("kernel needs finite positive w+x and w-x");
  const int l = idx.l, k = idx.k;
  const double alpha = idx.alpha();
  const double ratio = w_plus_x / w_minus_x;
  const double z = std::pow((1.0 - p) / p, k) * std::pow(ratio, l);

  // within |Z-1| < 0.05 the contour integrand sheds its z-driven decay and
  // the quadrature kernel is cheaper at equal accuracy
  if (!std::isfinite(z) || std::fabs(z - 1.0) < kHybridDelta) {
    if (stats) ++stats->fallback_nodes;
    return z_kernel_sums(ModelParams(alpha, p), w_plus_x, w_minus_x, cfg);
  }
  if (stats) ++stats->g_nodes;

  std::vector<double> a_list = delta_list(k, 1.0);
  {
    std::vector<double> tail = delta_list(l, alpha);
    a_list.insert(a_list.end(), tail.begin(), tail.end());
  }
  std::vector<double> b_list = delta_list(k, 1.0);
  {
    std::vector<double> tail = delta_list(l, 1.0);
    b_list.insert(b_list.end(), tail.begin(), tail.end());
  }
  MeijerSpec spec(k, k, std::move(a_list), std::move(b_list), z);
  const double g = eval_meijer_g(spec, cfg);

  const double ln_pref = 2.0 * std::log(static_cast<double>(k)) -
                         alpha * std::log(static_cast<double>(l)) + (2.0 - alpha) * M_LN2 -
                         (k - l) * kLnTwoPi + std::log(p) / alpha +
                         (1.0 / alpha - 1.0) * std::log(1.0 - p);
  return std::exp(ln_pref) * g / w_plus_x * std::pow(w_minus_x, alpha - 1.0);
}

double z_kernel_meijer(const RationalIndex& idx, double p, double w, double x,
                       const QuadConfig& cfg, MeijerKernelStats* stats) {
  if (!std::isfinite(w) || !std::isfinite(x) || !(w > std::fabs(x)))
    throw domain_error("kernel needs finite arguments with w > |x|");
  return z_kernel_meijer_sums(idx, p, w + x, w - x, cfg, stats);
}

double pdf_wait_first_meijer(const RationalIndex& idx, double p, EvalPoint pt,
                             const QuadConfig& cfg, MeijerKernelStats* stats) {
  const ModelParams params(idx.alpha(), p);
  QuadConfig kcfg = cfg;
  kcfg.abs_tol = std::max(cfg.abs_tol * 0.1, 1e-14);
  kcfg.rel_tol = std::max(cfg.rel_tol * 0.1, 1e-11);
  return pdf_wait_first_outer(params, pt, cfg, [&](double wpx, double wmx) {
    return z_kernel_meijer_sums(idx, p, wpx, wmx, kcfg, stats);
  });
}

DensityCurve curve_wait_first_meijer(const RationalIndex& idx, double p, double t,
                                     const std::vector<double>& grid, const QuadConfig& cfg,
                                     MeijerKernelStats* stats) {
  if (!(t > 0.0)) throw domain_error("curve needs t > 0");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw domain_error("grid values must be finite");
    if (i > 0 && !(grid[i - 1] < grid[i])) throw domain_error("grid must be strictly increasing");
  }

  DensityCurve curve;
  curve.process = ProcessKind::wait_first;
  curve.alpha = idx.alpha();
  curve.p = p;
  curve.t = t;
  curve.method = Method::meijer;
  curve.abscissas = grid;
  curve.values.assign(grid.size(), 0.0);
  curve.error_estimates.assign(grid.size(), 0.0);
  curve.divergent.assign(grid.size(), 0);

  std::vector<MeijerKernelStats> local(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    double v = 0.0, e = 0.0;
    try {
      v = pdf_wait_first_meijer(idx, p, {t, grid[i]}, cfg, &local[i]);
      e = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(v));
    } catch (const convergence_error& ce) {
      v = ce.best_value;
      e = ce.error_estimate;
    } catch (const numeric_error&) {
      v = std::numeric_limits<double>::quiet_NaN();
      e = std::numeric_limits<double>::infinity();
    }
    curve.values[i] = v;
    curve.error_estimates[i] = e;
    if (!(std::fabs(v) <= 1e12)) curve.divergent[i] = 1;
  });
  if (stats) {
    for (const MeijerKernelStats& s : local) {
      stats->g_nodes += s.g_nodes;
      stats->fallback_nodes += s.fallback_nodes;
    }
  }
  return curve;
}

}  // namespace levywalk
