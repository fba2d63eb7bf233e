#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "levywalk/montecarlo.hpp"

using namespace levywalk;

namespace {

std::vector<double> uniform_edges(double a, double b, int nb) {
  std::vector<double> e(nb + 1);
  for (int i = 0; i <= nb; ++i) e[i] = a + (b - a) * i / nb;
  return e;
}

}  // namespace

TEST_CASE("positive stable sampler has the right Laplace transform") {
  // E[e^{-T}] = e^{-1} for every alpha; 2e5 draws put the CLT noise near 1e-3
  for (double alpha : {0.25, 0.5, 0.75}) {
    SplitMix64 rng(12345);
    const long n = 200000;
    double acc = 0.0;
    for (long i = 0; i < n; ++i) acc += std::exp(-sample_positive_stable(alpha, rng));
    CHECK(std::fabs(acc / n - std::exp(-1.0)) < 3e-3);
  }
}

TEST_CASE("half-index sampler matches its closed distribution function") {
  // at alpha = 1/2 the variate has distribution function erfc(1/(2 sqrt x))
  SplitMix64 rng(777);
  const long n = 100000;
  std::vector<double> xs(n);
  for (long i = 0; i < n; ++i) {
    xs[i] = sample_positive_stable(0.5, rng);
    CHECK(xs[i] > 0.0);
  }
  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  for (long i = 0; i < n; ++i) {
    const double F = std::erfc(1.0 / (2.0 * std::sqrt(xs[i])));
    ks = std::max(ks, std::max(std::fabs(F - double(i) / n), std::fabs(F - double(i + 1) / n)));
  }
  CHECK(ks < 0.005);
}

TEST_CASE("endpoints respect the support and the seeding is scheduling-proof") {
  WalkConfig cfg(0.75, 0.25, 1.0, 500, 4000, 99);
  setenv("LEVYWALK_THREADS", "3", 1);
  std::vector<double> a = simulate_wait_first(cfg);
  setenv("LEVYWALK_THREADS", "1", 1);
  std::vector<double> b = simulate_wait_first(cfg);
  unsetenv("LEVYWALK_THREADS");
  REQUIRE(a.size() == 4000);
  REQUIRE(b.size() == 4000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(std::fabs(a[i]) <= cfg.t);
  }
  // a different seed draws a different sample
  WalkConfig other(0.75, 0.25, 1.0, 500, 4000, 100);
  std::vector<double> c = simulate_wait_first(other);
  long same = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (a[i] == c[i]) ++same;
  CHECK(same < 40);
  // one-sided walks stay on their side
  for (double r : simulate_wait_first(WalkConfig(0.5, 1.0, 1.0, 1000, 5000, 3))) {
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
  }
  for (double r : simulate_wait_first(WalkConfig(0.5, 0.0, 1.0, 1000, 5000, 3))) {
    CHECK(r <= 0.0);
    CHECK(r >= -1.0);
  }
}

TEST_CASE("endpoint histograms match the limit laws") {
  WalkConfig cfg(0.5, 0.25, 1.0, 10000, 100000, 42);
  std::vector<double> wf, jf;
  simulate_endpoints(cfg, &wf, &jf);
  double mean = 0.0;
  for (double r : wf) mean += r;
  // p = 1/4 sends three quarters of the jumps down
  CHECK(mean / double(wf.size()) < -0.1);
  ComparisonStats sw = compare_to_law(empirical_density(wf, uniform_edges(-1, 1, 40)),
                                      ProcessKind::wait_first, ModelParams(0.5, 0.25), 1.0);
  CHECK(sw.l1_distance < 0.05);
  CHECK(sw.ks_distance < 0.02);
  EmpiricalDensity ej = empirical_density(jf, uniform_edges(-3, 3, 60));
  ComparisonStats sj = compare_to_law(ej, ProcessKind::jump_first, ModelParams(0.5, 0.25), 1.0);
  CHECK(sj.l1_distance < 0.05);
  // the jump-first tails hold a third of the mass outside (-3, 3)
  CHECK(ej.clipped_fraction > 0.2);
  CHECK(ej.clipped_fraction < 0.5);
  // away from the half index the comparison runs the double-integral law
  WalkConfig c75(0.75, 0.4, 1.0, 2000, 20000, 11);
  ComparisonStats s75 =
      compare_to_law(empirical_density(simulate_wait_first(c75), uniform_edges(-1, 1, 24)),
                     ProcessKind::wait_first, ModelParams(0.75, 0.4), 1.0);
  CHECK(s75.l1_distance < 0.08);
  WalkConfig cj(0.5, 0.7, 1.0, 2000, 20000, 13);
  ComparisonStats sj7 =
      compare_to_law(empirical_density(simulate_jump_first(cj), uniform_edges(-3, 3, 36)),
                     ProcessKind::jump_first, ModelParams(0.5, 0.7), 1.0);
  CHECK(sj7.l1_distance < 0.08);
}

TEST_CASE("histogram normalization and the two comparison entries agree") {
  WalkConfig cfg(0.5, 0.25, 1.0, 2000, 20000, 5);
  std::vector<double> wf = simulate_wait_first(cfg);
  EmpiricalDensity h = empirical_density(wf, uniform_edges(-1, 1, 20));
  double binned = 0.0;
  for (std::size_t i = 0; i < h.masses.size(); ++i)
    binned += h.masses[i] * (h.bin_edges[i + 1] - h.bin_edges[i]);
  CHECK(std::fabs(binned + h.clipped_fraction - 1.0) < 1e-12);
  CHECK(h.total_samples == 20000);
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(-1.0 + 0.05 * i);
  DensityCurve curve = curve_wait_first(ModelParams(0.5, 0.25), 1.0, grid);
  ComparisonStats a = compare(h, curve);
  ComparisonStats b =
      compare_to_law(h, ProcessKind::wait_first, ModelParams(0.5, 0.25), 1.0);
  CHECK(a.l1_distance == b.l1_distance);
  CHECK(a.ks_distance == b.ks_distance);
  CHECK(a.max_bin_abs_err == b.max_bin_abs_err);
}

TEST_CASE("the discrete walk approaches the limit law as the step scale grows") {
  auto l1_at = [](long n) {
    WalkConfig cfg(0.5, 0.25, 1.0, n, 40000, 21);
    return compare_to_law(empirical_density(simulate_wait_first(cfg), uniform_edges(-1, 1, 24)),
                          ProcessKind::wait_first, ModelParams(0.5, 0.25), 1.0)
        .l1_distance;
  };
  const double coarse = l1_at(50);
  const double fine = l1_at(20000);
  CHECK(fine < 0.06);
  CHECK(coarse > 2.0 * fine);
}

TEST_CASE("domain rules") {
  CHECK_THROWS_AS(WalkConfig(1.2, 0.5, 1.0, 100, 100, 1), domain_error);
  CHECK_THROWS_AS(WalkConfig(0.5, -0.1, 1.0, 100, 100, 1), domain_error);
  CHECK_THROWS_AS(WalkConfig(0.5, 1.1, 1.0, 100, 100, 1), domain_error);
  CHECK_THROWS_AS(WalkConfig(0.5, 0.5, 0.0, 100, 100, 1), domain_error);
  CHECK_THROWS_AS(WalkConfig(0.5, 0.5, 1.0, 0, 100, 1), domain_error);
  CHECK_THROWS_AS(WalkConfig(0.5, 0.5, 1.0, 100, 0, 1), domain_error);
  // the closed endpoints of the direction probability are legal
  CHECK_NOTHROW(WalkConfig(0.5, 0.0, 1.0, 100, 100, 1));
  CHECK_NOTHROW(WalkConfig(0.5, 1.0, 1.0, 100, 100, 1));
}
