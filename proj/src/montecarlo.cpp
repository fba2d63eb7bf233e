#include "levywalk/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "levywalk/jump_first.hpp"
#include "levywalk/parallel.hpp"
#include "levywalk/special.hpp"

namespace levywalk {

double sample_positive_stable(double alpha, SplitMix64& rng) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw domain_error("stable sampler needs alpha in (0,1)");
  // Kanter: Z = (A(U)/W)^{(1-alpha)/alpha}, U uniform on (0,pi), W unit
  // exponential. next_open() never returns 0 or 1, so both logs are finite;
  // the exponent clamp turns the (astronomically rare) overflow draw into a
  // huge finite step, which the walk treats the same way.
  const double u = rng.next_open() * M_PI;
  const double w = -std::log(rng.next_open());
  double ln_z = (1.0 - alpha) / alpha * (zolotarev_log_a(alpha, u) - std::log(w));
  if (ln_z > 700.0) ln_z = 700.0;
  return std::exp(ln_z);
}

void simulate_endpoints(const WalkConfig& cfg, std::vector<double>* wait_first,
                        std::vector<double>* jump_first) {
  const std::size_t count = static_cast<std::size_t>(cfg.samples);
  if (wait_first) wait_first->assign(count, 0.0);
  if (jump_first) jump_first->assign(count, 0.0);

  const double n = static_cast<double>(cfg.n);
  const double horizon = n * cfg.t;  // scaled time budget, one rounding of n*t

  parallel_for(count, [&](std::size_t i) {
    // a private substream per sample makes the walk independent of worker
    // count and evaluation order
    SplitMix64 rng(substream_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    double elapsed = 0.0;
    double pos = 0.0;
    double pending = 0.0;
    for (;;) {
      const double step = sample_positive_stable(cfg.alpha, rng);
      const double dir = rng.next_double() < cfg.p ? 1.0 : -1.0;
      const double advanced = elapsed + step;
      if (!(advanced <= horizon)) {
        // the step in progress at the horizon: its full jump is what the
        // jump-first endpoint adds
        pending = dir * step;
        break;
      }
      elapsed = advanced;
      pos += dir * step;
    }
    if (wait_first) {
      // |pos| <= elapsed holds exactly in floating point (each update obeys
      // |fl(pos +- step)| <= fl(elapsed + step) by monotone, sign-symmetric
      // rounding), so pos/n <= horizon/n can overshoot t by at most one
      // rounding of the division; clamp that last ulp
      double r = pos / n;
      r = std::clamp(r, -cfg.t, cfg.t);
      (*wait_first)[i] = r;
    }
    if (jump_first) (*jump_first)[i] = (pos + pending) / n;
  });
}

std::vector<double> simulate_wait_first(const WalkConfig& cfg) {
  std::vector<double> out;
  simulate_endpoints(cfg, &out, nullptr);
  return out;
}

std::vector<double> simulate_jump_first(const WalkConfig& cfg) {
  std::vector<double> out;
  simulate_endpoints(cfg, nullptr, &out);
  return out;
}

EmpiricalDensity empirical_density(const std::vector<double>& endpoints,
                                   const std::vector<double>& edges) {
  if (endpoints.empty()) throw domain_error("empirical density needs at least one endpoint");
  if (edges.size() < 2) throw domain_error("empirical density needs at least one bin");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i])) throw domain_error("bin edges must be finite");
    if (i > 0 && !(edges[i - 1] < edges[i]))
      throw domain_error("bin edges must be strictly increasing");
  }

  EmpiricalDensity out;
  out.bin_edges = edges;
  out.total_samples = static_cast<long>(endpoints.size());
  std::vector<long> counts(edges.size() - 1, 0);
  long clipped = 0;
  for (double v : endpoints) {
    if (!(v >= edges.front()) || !(v < edges.back())) {
      ++clipped;
      continue;
    }
    const std::size_t idx =
        static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) -
                                 edges.begin()) -
        1;
    ++counts[idx];
  }
  out.masses.resize(counts.size());
  const double total = static_cast<double>(endpoints.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    out.masses[i] = static_cast<double>(counts[i]) / (total * (edges[i + 1] - edges[i]));
  out.clipped_fraction = static_cast<double>(clipped) / total;
  return out;
}

namespace {

// Analytic mass of one bin, integrating the density with splits at its
// singular or kinked points: x = 0 and the support boundary for wait-first,
// y = +-t for jump-first. Point values of the curve cannot resolve bins that
// touch x = 0, hence the fresh quadrature.
double law_bin_mass(ProcessKind process, const ModelParams& params, double t, double lo,
                    double hi, const QuadConfig& cfg) {
  const double alpha = params.alpha.alpha;
  auto density = [&](double x) {
    return process == ProcessKind::wait_first ? pdf_wait_first(params, {t, x}, cfg)
                                              : pdf_jump_first(params, t, x, cfg);
  };

  std::vector<double> cuts;
  cuts.push_back(lo);
  auto add_cut = [&](double c) {
    if (c > cuts.back() && c < hi) cuts.push_back(c);
  };
  if (process == ProcessKind::wait_first) {
    if (hi <= -t || lo >= t) return 0.0;
    if (lo < -t) cuts.back() = -t;
    add_cut(0.0);
    add_cut(t);
    if (hi > t) {
      // clamp below; the segment beyond t carries no mass
    }
  } else {
    add_cut(-t);
    add_cut(0.0);
    add_cut(t);
  }
  cuts.push_back(process == ProcessKind::wait_first ? std::min(hi, t) : hi);

  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(a < b)) continue;
    if (process == ProcessKind::wait_first && (a == 0.0 || b == 0.0)) {
      // integrable |x|^{alpha-1} blowup at the origin; the cut sits exactly
      // at 0, so the hinted distance d is the evaluation point itself
      const bool from_below = b == 0.0;
      auto g = [&](double x, double d) {
        (void)x;
        return density(from_below ? -d : d);
      };
      const SingularityHint hint = from_below ? SingularityHint::upper(alpha - 1.0)
                                              : SingularityHint::lower(alpha - 1.0);
      mass += integrate_finite(g, a, b, hint, cfg).value;
    } else {
      mass += integrate_finite(density, a, b, cfg).value;
    }
  }
  return mass;
}

}  // namespace

ComparisonStats compare_to_law(const EmpiricalDensity& empirical, ProcessKind process,
                               const ModelParams& params, double t, const QuadConfig& cfg) {
  if (!(t > 0.0)) throw domain_error("comparison needs t > 0");
  const std::size_t bins = empirical.masses.size();
  if (bins == 0 || empirical.bin_edges.size() != bins + 1)
    throw domain_error("histogram is empty or inconsistent");

  std::vector<double> emp_mass(bins), law_mass(bins);
  double emp_total = 0.0, law_total = 0.0;
  ComparisonStats stats;
  for (std::size_t i = 0; i < bins; ++i) {
    const double lo = empirical.bin_edges[i], hi = empirical.bin_edges[i + 1];
    const double width = hi - lo;
    emp_mass[i] = empirical.masses[i] * width;
    law_mass[i] = law_bin_mass(process, params, t, lo, hi, cfg);
    emp_total += emp_mass[i];
    law_total += law_mass[i];
    stats.l1_distance += std::fabs(emp_mass[i] - law_mass[i]);
    stats.max_bin_abs_err =
        std::max(stats.max_bin_abs_err, std::fabs(empirical.masses[i] - law_mass[i] / width));
  }
  if (!(law_total > 0.0))
    throw domain_error("histogram window carries no analytic mass");

  // window-conditional KS: both mass vectors renormalized within the window
  double emp_cdf = 0.0, law_cdf = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    emp_cdf += emp_mass[i] / (emp_total > 0.0 ? emp_total : 1.0);
    law_cdf += law_mass[i] / law_total;
    stats.ks_distance = std::max(stats.ks_distance, std::fabs(emp_cdf - law_cdf));
  }
  return stats;
}

ComparisonStats compare(const EmpiricalDensity& empirical, const DensityCurve& analytic,
                        const QuadConfig& cfg) {
  if (analytic.abscissas.empty()) throw domain_error("analytic curve has no points");
  if (empirical.bin_edges.size() < 2) throw domain_error("histogram has no bins");

  // coverage check: the curve must span the part of the window that can carry
  // mass, with half-open grids granted one bin of slack at either end
  const std::size_t bins = empirical.bin_edges.size() - 1;
  double need_lo = empirical.bin_edges.front();
  double need_hi = empirical.bin_edges.back();
  if (analytic.process == ProcessKind::wait_first) {
    need_lo = std::max(need_lo, -analytic.t);
    need_hi = std::min(need_hi, analytic.t);
  }
  if (need_lo < need_hi) {
    const double slack_lo = empirical.bin_edges[1] - empirical.bin_edges[0];
    const double slack_hi = empirical.bin_edges[bins] - empirical.bin_edges[bins - 1];
    if (analytic.abscissas.front() > need_lo + slack_lo ||
        analytic.abscissas.back() < need_hi - slack_hi)
      throw domain_error("analytic curve does not cover the histogram window");
  }
  return compare_to_law(empirical, analytic.process, ModelParams(analytic.alpha, analytic.p),
                        analytic.t, cfg);
}

}  // namespace levywalk
