#pragma once

#include <cstdint>
#include <vector>

#include "levywalk/common.hpp"
#include "levywalk/rng.hpp"
#include "levywalk/wait_first.hpp"

namespace levywalk {

// Discrete-walk simulation setup. p may be 0 or 1 (all jumps one way); the
// scaling step count n and the sample count must be positive.
struct WalkConfig {
  double alpha;
  double p;
  double t;
  long n;
  long samples;
  std::uint64_t seed;

  WalkConfig(double alpha_, double p_, double t_, long n_, long samples_, std::uint64_t seed_)
      : alpha(alpha_), p(p_), t(t_), n(n_), samples(samples_), seed(seed_) {
    StableIndex check(alpha_);
    if (!(p_ >= 0.0) || !(p_ <= 1.0)) throw domain_error("direction probability must lie in [0,1]");
    if (!(t_ > 0.0)) throw domain_error("horizon t must be positive");
    if (n_ < 1) throw domain_error("step scale n must be at least 1");
    if (samples_ < 1) throw domain_error("sample count must be at least 1");
  }
};

// Positive stable variate with Laplace transform exp(-u^alpha), by Kanter's
// method: Z = (A(U)/W)^{(1-alpha)/alpha} with U uniform on (0,pi) and W unit
// exponential, evaluated in log space so extreme draws saturate instead of
// overflowing.
double sample_positive_stable(double alpha, SplitMix64& rng);

// One walk runs i.i.d. waits T_i with |jump| = T_i and signs +1 w.p. p.
// Both scaled endpoints come from the same trajectory: the wait-first
// endpoint is the position after the last complete step that fits in the
// budget n*t, the jump-first endpoint additionally takes the jump of the
// step in progress. Sample i draws from substream_seed(seed, i), so results
// are independent of scheduling; |wait-first endpoint| <= t holds exactly in
// floating point, not just in expectation.
void simulate_endpoints(const WalkConfig& cfg, std::vector<double>* wait_first,
                        std::vector<double>* jump_first);

std::vector<double> simulate_wait_first(const WalkConfig& cfg);
std::vector<double> simulate_jump_first(const WalkConfig& cfg);

// Histogram on [edges.front(), edges.back()) normalized to density scale:
// masses[i] = count_i / (samples * bin_width). Samples outside the window are
// counted in clipped_fraction, never binned.
struct EmpiricalDensity {
  std::vector<double> bin_edges;
  std::vector<double> masses;
  long total_samples = 0;
  double clipped_fraction = 0.0;
};

EmpiricalDensity empirical_density(const std::vector<double>& endpoints,
                                   const std::vector<double>& edges);

struct ComparisonStats {
  double l1_distance = 0.0;      // sum over bins of |empirical - analytic| mass
  double ks_distance = 0.0;      // sup gap of the within-window normalized CDFs
  double max_bin_abs_err = 0.0;  // worst bin gap on density scale
};

// Compares a histogram against the analytic law identified by the curve's
// metadata (process, alpha, p, t). Analytic bin masses are integrated fresh
// with singularity-aware splits rather than read off the curve samples, since
// bins touching x = 0 or the support boundary are not resolvable from point
// values. The curve's abscissas must cover the histogram window.
ComparisonStats compare(const EmpiricalDensity& empirical, const DensityCurve& analytic,
                        const QuadConfig& cfg = {});

// Same, without requiring a sampled curve.
ComparisonStats compare_to_law(const EmpiricalDensity& empirical, ProcessKind process,
                               const ModelParams& params, double t, const QuadConfig& cfg = {});

}  // namespace levywalk
