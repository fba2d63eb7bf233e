#include "levywalk/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "levywalk/stable.hpp"

namespace levywalk {

namespace {

std::uint64_t double_bits(double v) {
  std::uint64_t out;
  std::memcpy(&out, &v, sizeof(out));
  return out;
}

void check_kernel_args(double w, double x) {
  if (!std::isfinite(w) || !std::isfinite(x) || !(w > std::fabs(x)))
    throw domain_error("kernel needs finite arguments with w > |x|");
}

void check_kernel_sums(double s, double d) {
  if (!std::isfinite(s) || !std::isfinite(d) || !(s > 0.0) || !(d > 0.0))
    throw domain_error("kernel needs finite positive w+x and w-x");
}

// K with the smaller-scale factor deep in the power tail of the other one.
// For R = c_big/c_ref large, r(c_big z) is in its tail series across the
// whole support of r(c_ref z), and each term integrates against a closed
// negative stable moment E[T^{-s}] = Gamma(s/alpha + 1) / Gamma(s + 1):
//   K = c_ref^{2a-1} c_big^{-1-a} sum_{n>=1} b_n R^{-(n-1)a},
//   b_n = (-1)^{n+1} sin(pi n a) Gamma(n a + 1) (n+1) / (pi Gamma((n+1)a + 1)).
// The leading term reproduces the (w-|x|)^{2 alpha - 1} edge law, which is
// why this region must not be truncated: for alpha < 1/2 it carries mass.
double kernel_tail_series(double alpha, double c_ref, double c_big) {
  const double ln_ratio = std::log(c_big) - std::log(c_ref);
  const double ln_scale =
      (2.0 * alpha - 1.0) * std::log(c_ref) - (1.0 + alpha) * std::log(c_big);
  double sum = 0.0;
  for (int n = 1; n <= 200; ++n) {
    const double y = n * alpha;
    const double k = std::nearbyint(y);
    const double frac = y - k;
    if (std::fabs(frac) < 1e-12) continue;  // exact zero of sin(pi n alpha)
    const double s = std::sin(M_PI * frac);
    double sign = (n % 2 == 0) ? -1.0 : 1.0;
    if (static_cast<long long>(k) % 2 != 0) sign = -sign;
    if (s < 0.0) sign = -sign;
    const double ln_mag = std::log(std::fabs(s)) + std::lgamma(y + 1.0) + std::log1p(n) -
                          std::log(M_PI) - std::lgamma(y + alpha + 1.0) -
                          (n - 1) * alpha * ln_ratio;
    const double term = sign * std::exp(ln_mag);
    sum += term;
    if (n >= 3 && std::fabs(term) <= 1e-14 * std::fabs(sum)) return std::exp(ln_scale) * sum;
  }
  throw convergence_error("kernel tail series did not converge", std::exp(ln_scale) * sum,
                          std::fabs(std::exp(ln_scale) * sum) * 1e-6);
}

// ratio above which the tail series beats quadrature and is known accurate:
// terms fall like R^{-n alpha}, so small alpha needs a larger ratio before
// 200 terms reach 1e-14
double tail_ratio_threshold(double alpha) {
  return std::max(1e4, std::pow(10.0, 0.15 / alpha));
}

// Rescaling z by c_ref = min(c1, c2) reduces the kernel to one shape function
// of the scale ratio alone:
//   K = c_ref^{alpha-2} H(R),  H(R) = int_0^inf v^{1-alpha} r(v) r(R v) dv,
// with R = c_big/c_ref in [1, tail handoff). H depends on alpha only, not on
// p or the individual scales, so the outer integrals that hammer the kernel
// with millions of nearby arguments can share one fit of log H against log R
// per alpha instead of running a fresh z-quadrature each call.

IntegralResult profile_quad(StableIndex ai, double ratio, const QuadConfig& cfg) {
  const double alpha = ai.alpha;
  auto integrand = [&](double v) {
    if (!(v > 0.0)) return 0.0;
    const double f1 = r_alpha_cached(ai, v);
    if (f1 == 0.0) return 0.0;
    const double f2 = r_alpha_cached(ai, ratio * v);
    if (f2 == 0.0) return 0.0;
    return std::pow(v, 1.0 - alpha) * f1 * f2;
  };
  // both r factors decay like v^{-alpha-1}, so the product integrand falls
  // off as v^{-1-3 alpha}
  return integrate_semiinfinite(integrand, 0.0, cfg, 1.0 + 3.0 * alpha);
}

constexpr int kChebDegree = 24;

struct ChebPanel {
  double lo, hi;  // in u = log R
  double coef[kChebDegree + 1];
};

struct ProfileTable {
  double u_hi = 0.0;  // log of the tail-series handoff ratio
  std::vector<double> starts;
  std::vector<ChebPanel> panels;
};

double exact_log_profile(StableIndex ai, double u) {
  QuadConfig cfg;
  cfg.abs_tol = 1e-300;  // converge on relative error whatever the magnitude
  cfg.rel_tol = 1e-12;
  cfg.max_evals = 2000000;
  IntegralResult res = profile_quad(ai, std::exp(u), cfg);
  if (!res.converged) {
    cfg.rel_tol = 1e-11;
    res = profile_quad(ai, std::exp(u), cfg);
    if (!res.converged)
      throw convergence_error("kernel profile fit node did not converge", res.value, res.error);
  }
  return std::log(res.value);
}

double clenshaw(const ChebPanel& p, double u) {
  const double s = (2.0 * u - p.lo - p.hi) / (p.hi - p.lo);
  double b1 = 0.0, b2 = 0.0;
  for (int k = kChebDegree; k >= 1; --k) {
    const double b0 = 2.0 * s * b1 - b2 + p.coef[k];
    b2 = b1;
    b1 = b0;
  }
  return s * b1 - b2 + 0.5 * p.coef[0];
}

// Fit one panel; recurse on halves until the Chebyshev tail and three
// off-node spot checks agree with the quadrature to ~1e-11 on log H.
void fit_panel(StableIndex ai, double lo, double hi, int depth, std::vector<ChebPanel>& out) {
  ChebPanel p;
  p.lo = lo;
  p.hi = hi;
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double vals[kChebDegree + 1];
  for (int j = 0; j <= kChebDegree; ++j)
    vals[j] = exact_log_profile(ai, mid + half * std::cos(M_PI * j / kChebDegree));
  for (int k = 0; k <= kChebDegree; ++k) {
    double s = 0.0;
    for (int j = 0; j <= kChebDegree; ++j) {
      const double w = (j == 0 || j == kChebDegree) ? 0.5 : 1.0;
      s += w * vals[j] * std::cos(M_PI * k * j / kChebDegree);
    }
    p.coef[k] = 2.0 / kChebDegree * s;
  }
  p.coef[kChebDegree] *= 0.5;  // trapezoidal DCT halves the last mode

  const double tail =
      std::fabs(p.coef[kChebDegree]) + std::fabs(p.coef[kChebDegree - 1]) +
      std::fabs(p.coef[kChebDegree - 2]);
  bool ok = tail <= 3e-12;
  for (int j = 0; ok && j < 3; ++j) {
    const double u = mid + half * (0.31 * (j - 1) + 0.52 * (j == 2 ? -0.3 : 0.4));
    const double g = exact_log_profile(ai, u);
    ok = std::fabs(clenshaw(p, u) - g) <= 5e-12 + 1e-13 * std::fabs(g);
  }
  if (ok || depth >= 10) {
    out.push_back(p);
    return;
  }
  fit_panel(ai, lo, mid, depth + 1, out);
  fit_panel(ai, mid, hi, depth + 1, out);
}

ProfileTable build_profile(StableIndex ai) {
  ProfileTable t;
  t.u_hi = std::log(tail_ratio_threshold(ai.alpha));
  const int seeds = static_cast<int>(std::ceil(t.u_hi));
  for (int i = 0; i < seeds; ++i)
    fit_panel(ai, t.u_hi * i / seeds, t.u_hi * (i + 1) / seeds, 0, t.panels);
  t.starts.reserve(t.panels.size());
  for (const ChebPanel& p : t.panels) t.starts.push_back(p.lo);
  return t;
}

const ProfileTable& profile_table(double alpha) {
  static std::mutex mu;
  static std::map<double, std::unique_ptr<const ProfileTable>> cache;
  std::unique_lock<std::mutex> lock(mu);
  auto it = cache.find(alpha);
  if (it != cache.end()) return *it->second;
  lock.unlock();
  auto built = std::make_unique<const ProfileTable>(build_profile(StableIndex(alpha)));
  lock.lock();
  // a racing builder may have won; keep whichever landed first
  return *cache.emplace(alpha, std::move(built)).first->second;
}

// fit error is a few 1e-12 on log H; leave a decade of headroom before
// letting the table stand in for the quadrature
constexpr double kProfileRelCut = 1e-10;

}  // namespace

double z_kernel_half_sums(double p, double w_plus_x, double w_minus_x) {
  check_kernel_sums(w_plus_x, w_minus_x);
  if (!(p > 0.0) || !(p < 1.0)) throw domain_error("kernel needs p in (0,1)");
  const double q = 1.0 - p;
  const double den = p * p * w_minus_x + q * q * w_plus_x;
  const double pq3 = (p * q) * (p * q) * (p * q);
  return 2.0 * M_SQRT2 / std::sqrt(M_PI) * pq3 / (den * std::sqrt(den));
}

double z_kernel_half(double p, double w, double x) {
  check_kernel_args(w, x);
  return z_kernel_half_sums(p, w + x, w - x);
}

double z_kernel_quad_sums(const ModelParams& params, double w_plus_x, double w_minus_x,
                          const QuadConfig& cfg) {
  check_kernel_sums(w_plus_x, w_minus_x);
  const double alpha = params.alpha.alpha;
  const double c1 = w_plus_x / (2.0 * std::pow(params.p, 1.0 / alpha));
  const double c2 = w_minus_x / (2.0 * std::pow(1.0 - params.p, 1.0 / alpha));
  const double c_ref = std::min(c1, c2);
  const double c_big = std::max(c1, c2);
  if (!std::isfinite(c_big)) throw numeric_error("kernel scale overflow");
  if (c_big >= tail_ratio_threshold(alpha) * c_ref)
    return kernel_tail_series(alpha, c_ref, c_big);

  const double scale = std::pow(c_ref, alpha - 2.0);
  if (cfg.rel_tol >= kProfileRelCut) {
    thread_local double memo_alpha = -1.0;
    thread_local const ProfileTable* memo = nullptr;
    if (memo_alpha != alpha) {
      memo = &profile_table(alpha);
      memo_alpha = alpha;
    }
    const ProfileTable& t = *memo;
    double u = std::log(c_big) - std::log(c_ref);
    if (u < 0.0) u = 0.0;
    if (u > t.u_hi) u = t.u_hi;  // rounding spill at the tail handoff
    auto it = std::upper_bound(t.starts.begin(), t.starts.end(), u);
    const std::size_t idx =
        it == t.starts.begin() ? 0 : static_cast<std::size_t>(it - t.starts.begin() - 1);
    return scale * std::exp(clenshaw(t.panels[idx], u));
  }

  IntegralResult res = profile_quad(params.alpha, c_big / c_ref, cfg);
  if (!res.converged)
    throw convergence_error(
        "kernel quadrature did not converge at w+x = " + std::to_string(w_plus_x) +
            ", w-x = " + std::to_string(w_minus_x),
        scale * res.value, scale * res.error);
  return scale * res.value;
}

double z_kernel_quad(const ModelParams& params, double w, double x, const QuadConfig& cfg) {
  check_kernel_args(w, x);
  return z_kernel_quad_sums(params, w + x, w - x, cfg);
}

double z_kernel_sums(const ModelParams& params, double w_plus_x, double w_minus_x,
                     const QuadConfig& cfg) {
  if (params.alpha.alpha == 0.5) return z_kernel_half_sums(params.p, w_plus_x, w_minus_x);
  return z_kernel_quad_sums(params, w_plus_x, w_minus_x, cfg);
}

double z_kernel(const ModelParams& params, double w, double x, const QuadConfig& cfg) {
  check_kernel_args(w, x);
  return z_kernel_sums(params, w + x, w - x, cfg);
}

double KernelCache::operator()(double w_plus_x, double w_minus_x) {
  const Key key{double_bits(w_plus_x), double_bits(w_minus_x)};
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  const double value = z_kernel_sums(params_, w_plus_x, w_minus_x, cfg_);
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(key, value);
  return value;
}

std::size_t KernelCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return memo_.size();
}

}  // namespace levywalk
