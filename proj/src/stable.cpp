#include "levywalk/stable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "levywalk/special.hpp"

namespace levywalk {

namespace {

constexpr int kSeriesCap = 200;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLogPi = 1.1447298858494001741;

// Per-alpha series data: term n carries
//   (-1)^{n+1} Gamma(n alpha + 1) sin(pi n alpha) / (pi n!) * x^{-n alpha - 1},
// stored as log-magnitude and sign so huge gamma values never materialize.
struct SeriesTable {
  std::vector<double> ln_mag;
  std::vector<int> sign;
};

const SeriesTable& series_table(double alpha) {
  static std::mutex mu;
  static std::map<double, SeriesTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(alpha);
  if (it != cache.end()) return it->second;

  SeriesTable t;
  t.ln_mag.resize(kSeriesCap);
  t.sign.resize(kSeriesCap);
  for (int n = 1; n <= kSeriesCap; ++n) {
    const double na = n * alpha;
    // sin(pi na) through the fractional part; snap near-integers to an exact
    // zero (rational alpha) instead of keeping an O(eps) residue
    double frac = na - std::floor(na);
    int sgn;
    double sin_mag;
    if (frac < 1e-12 || frac > 1.0 - 1e-12) {
      sin_mag = 0.0;
      sgn = 0;
    } else {
      const double s = std::sin(M_PI * frac);
      sin_mag = s;
      sgn = static_cast<long>(std::floor(na)) % 2 == 0 ? 1 : -1;
      if (n % 2 == 0) sgn = -sgn;
    }
    if (sgn == 0) {
      t.ln_mag[n - 1] = -std::numeric_limits<double>::infinity();
      t.sign[n - 1] = 0;
    } else {
      t.ln_mag[n - 1] =
          std::lgamma(na + 1.0) - std::lgamma(n + 1.0) + std::log(sin_mag) - kLogPi;
      t.sign[n - 1] = sgn;
    }
  }
  return cache.emplace(alpha, std::move(t)).first->second;
}

}  // namespace

double r_half_closed(double x) {
  if (!(x > 0.0)) {
    if (std::isnan(x)) throw domain_error("r_half_closed needs a real argument");
    return 0.0;
  }
  return 0.5 / std::sqrt(M_PI) * std::pow(x, -1.5) * std::exp(-0.25 / x);
}

double r_alpha_series(StableIndex ai, double x, double tol) {
  if (!std::isfinite(x) || !(x > 0.0))
    throw domain_error("series representation needs x > 0");
  if (!(tol > 0.0)) tol = 1e-12;

  const SeriesTable& tab = series_table(ai.alpha);
  const double lnx = std::log(x);
  const double alpha = ai.alpha;

  double sum = 0.0;
  double max_abs = 0.0;
  int small_run = 0;
  bool settled = false;
  double last_mag = 0.0;
  for (int n = 1; n <= kSeriesCap; ++n) {
    double mag = 0.0;
    if (tab.sign[n - 1] != 0) {
      mag = std::exp(tab.ln_mag[n - 1] - (n * alpha + 1.0) * lnx);
      sum += tab.sign[n - 1] > 0 ? mag : -mag;
      max_abs = std::max(max_abs, mag);
      // the last nonzero term is the truncation-error proxy; terms whose sine
      // factor vanishes identically carry no information about it
      last_mag = mag;
    }
    if (mag <= tol * std::fabs(sum)) {
      if (++small_run >= 2) {
        settled = true;
        break;
      }
    } else {
      small_run = 0;
    }
  }

  const double floor_abs = std::max(std::fabs(sum), kEps * max_abs);
  if (!settled)
    throw convergence_error("stable-density series hit the term cap at x = " + std::to_string(x),
                            sum, std::max(last_mag, kEps * max_abs) / floor_abs);
  const double cancel = kEps * max_abs / floor_abs;
  if (cancel > std::max(tol, 1e-13) || !(sum > 0.0))
    throw convergence_error("stable-density series cancelled below the requested accuracy", sum,
                            cancel);
  return sum;
}

double r_alpha_integral(StableIndex ai, double x, const QuadConfig& cfg) {
  if (!std::isfinite(x) || !(x > 0.0))
    throw domain_error("integral representation needs x > 0");

  const double alpha = ai.alpha;
  const double om = 1.0 - alpha;
  // r(x) = pref * int_0^pi A(phi) exp(-lambda A(phi)) dphi, all in logs:
  // lambda = x^{-alpha/om}, pref = alpha / (om pi x^{1/om})
  const double ln_lambda = -(alpha / om) * std::log(x);
  const double ln_pref = std::log(alpha) - std::log(om) - kLogPi - std::log(x) / om;

  // peak of A e^{-lambda A} over the reachable range A >= A(0+); if even the
  // peak underflows the result is an exact double 0
  const double ln_a0 = (alpha / om) * std::log(alpha) + std::log(om);
  double ln_peak;
  if (ln_a0 + ln_lambda >= 0.0)
    ln_peak = ln_a0 - std::exp(ln_a0 + ln_lambda);
  else
    ln_peak = -1.0 - ln_lambda;
  if (ln_pref + kLogPi + ln_peak < -745.0) return 0.0;

  // integrate the peak-normalized integrand so the tolerances act on O(1)
  // values; with the raw magnitude e^{ln_peak} as small as e^{-700}, any
  // absolute tolerance would otherwise declare victory after one panel
  auto integrand = [alpha, ln_lambda, ln_peak](double phi) {
    const double la = zolotarev_log_a(alpha, phi);
    const double expo = la + ln_lambda;
    if (expo > 700.0) return 0.0;  // A huge near pi: e^{-lambda A} kills the term
    return std::exp(la - std::exp(expo) - ln_peak);
  };

  // split at pi/2 so the first refinements land near the peak, wherever the
  // exponential puts it
  const double clip = 1e-10;
  IntegralResult left =
      integrate_finite(integrand, clip, M_PI / 2.0, cfg);
  IntegralResult right =
      integrate_finite(integrand, M_PI / 2.0, M_PI - clip, cfg);
  const double scale = std::exp(ln_pref + ln_peak);
  const double value = scale * (left.value + right.value);
  if (!left.converged || !right.converged)
    throw convergence_error("stable-density integral did not converge at x = " + std::to_string(x),
                            value, scale * (left.error + right.error));
  return value;
}

double r_alpha(StableIndex ai, double x, const QuadConfig& cfg) {
  if (std::isnan(x)) throw domain_error("stable density needs a real argument");
  if (!(x > 0.0)) return 0.0;
  if (!std::isfinite(x)) throw domain_error("stable density needs a finite argument");
  if (ai.alpha == 0.5) return r_half_closed(x);
  const double x_star = ai.alpha <= 0.5 ? 1.0 : 2.0;
  if (x >= x_star) return r_alpha_series(ai, x, 1e-12);
  return r_alpha_integral(ai, x, cfg);
}

namespace {

// ---- cached evaluator ----
//
// Kernel quadratures evaluate r at millions of points for one fixed alpha, so
// the integral representation (an adaptive quadrature per call) is far too
// slow there. Instead fit log r against log x once per alpha with piecewise
// Chebyshev panels; an absolute fit error on log r is a relative error on r.

constexpr int kChebDegree = 24;

struct ChebPanel {
  double lo, hi;  // in u = log x
  double coef[kChebDegree + 1];
};

struct StableTable {
  double x_lo = 0.0, x_hi = 0.0;
  std::vector<double> starts;  // panel lower edges for the binary search
  std::vector<ChebPanel> panels;
};

double exact_log_r(StableIndex ai, double u) {
  QuadConfig cfg;
  cfg.abs_tol = 1e-300;  // magnitudes span 300 decades: converge on relative error
  cfg.rel_tol = 1e-13;
  const double x = std::exp(u);
  const double x_star = ai.alpha <= 0.5 ? 1.0 : 2.0;
  const double v = x >= x_star ? r_alpha_series(ai, x, 1e-12) : r_alpha_integral(ai, x, cfg);
  return std::log(v);
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
// off-node spot checks agree with the exact values to ~1e-11 on log r.
void fit_panel(StableIndex ai, double lo, double hi, int depth, std::vector<ChebPanel>& out) {
  ChebPanel p;
  p.lo = lo;
  p.hi = hi;
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double vals[kChebDegree + 1];
  for (int j = 0; j <= kChebDegree; ++j)
    vals[j] = exact_log_r(ai, mid + half * std::cos(M_PI * j / kChebDegree));
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
    const double g = exact_log_r(ai, u);
    ok = std::fabs(clenshaw(p, u) - g) <= 5e-12 + 1e-13 * std::fabs(g);
  }
  if (ok || depth >= 14) {
    out.push_back(p);
    return;
  }
  fit_panel(ai, lo, mid, depth + 1, out);
  fit_panel(ai, mid, hi, depth + 1, out);
}

StableTable build_table(StableIndex ai) {
  const double x_star = ai.alpha <= 0.5 ? 1.0 : 2.0;
  const double u_hi = std::log(32.0 * x_star);
  // walk down until log r leaves double range; below x_lo the cached value is
  // an exact 0 (true density under 1e-250 there)
  double u_lo = std::log(x_star);
  while (exact_log_r(ai, u_lo - 0.5) > -690.0) u_lo -= 0.5;

  StableTable t;
  t.x_lo = std::exp(u_lo);
  t.x_hi = std::exp(u_hi);
  const int seeds = static_cast<int>(std::ceil(u_hi - u_lo));
  for (int i = 0; i < seeds; ++i) {
    const double a = u_lo + (u_hi - u_lo) * i / seeds;
    const double b = u_lo + (u_hi - u_lo) * (i + 1) / seeds;
    fit_panel(ai, a, b, 0, t.panels);
  }
  t.starts.reserve(t.panels.size());
  for (const ChebPanel& p : t.panels) t.starts.push_back(p.lo);
  return t;
}

const StableTable& stable_table(double alpha) {
  static std::mutex mu;
  static std::map<double, std::unique_ptr<const StableTable>> cache;
  std::unique_lock<std::mutex> lock(mu);
  auto it = cache.find(alpha);
  if (it != cache.end()) return *it->second;
  lock.unlock();
  auto built = std::make_unique<const StableTable>(build_table(StableIndex(alpha)));
  lock.lock();
  // a racing builder may have won; keep whichever landed first
  return *cache.emplace(alpha, std::move(built)).first->second;
}

}  // namespace

double r_alpha_cached(StableIndex ai, double x) {
  if (std::isnan(x)) throw domain_error("stable density needs a real argument");
  if (!(x > 0.0)) return 0.0;
  if (!std::isfinite(x)) throw domain_error("stable density needs a finite argument");
  if (ai.alpha == 0.5) return r_half_closed(x);

  thread_local double memo_alpha = -1.0;
  thread_local const StableTable* memo = nullptr;
  if (memo_alpha != ai.alpha) {
    memo = &stable_table(ai.alpha);
    memo_alpha = ai.alpha;
  }
  const StableTable& t = *memo;
  if (x >= t.x_hi) return r_alpha_series(ai, x, 1e-12);
  if (x <= t.x_lo) return 0.0;
  const double u = std::log(x);
  auto it = std::upper_bound(t.starts.begin(), t.starts.end(), u);
  const std::size_t idx = it == t.starts.begin() ? 0 : static_cast<std::size_t>(it - t.starts.begin() - 1);
  return std::exp(clenshaw(t.panels[idx], u));
}

}  // namespace levywalk
