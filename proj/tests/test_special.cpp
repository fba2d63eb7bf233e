#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "levywalk/special.hpp"

using namespace levywalk;
using cplx = std::complex<double>;

namespace {

double rel_gap(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

}  // namespace

TEST_CASE("real log-gamma matches the library reference across the range") {
  CHECK(std::fabs(log_gamma(1.0)) < 1e-14);
  CHECK(std::fabs(log_gamma(2.0)) < 1e-14);
  CHECK(rel_gap(log_gamma(0.5), 0.5 * std::log(M_PI)) < 1e-14);
  CHECK(rel_gap(std::exp(log_gamma(5.0)), 24.0) < 1e-13);
  for (double x = 0.05; x < 30.0; x *= 1.37) {
    CHECK(std::fabs(log_gamma(x) - std::lgamma(x)) < 1e-12 * std::max(1.0, std::fabs(std::lgamma(x))));
  }
}

TEST_CASE("complex log-gamma satisfies recurrence and reflection") {
  const cplx zs[] = {{1.0, 2.0}, {0.3, -0.7}, {2.5, 0.5}, {-1.3, 0.4}, {0.1, 5.0}};
  for (cplx z : zs) {
    // Gamma(z+1) = z Gamma(z), compared through exponentials to dodge branch
    // offsets in the logarithm
    cplx lhs = std::exp(log_gamma(z + 1.0) - log_gamma(z));
    CHECK(std::abs(lhs - z) < 1e-12 * std::abs(z));

    // Gamma(z) Gamma(1-z) sin(pi z) = pi
    cplx prod = std::exp(log_gamma(z) + log_gamma(1.0 - z) + log_sin_pi(z));
    CHECK(std::abs(prod - M_PI) < 1e-11);
  }

  // agreement with the real branch on the real axis
  for (double x : {0.3, 1.7, 6.25}) {
    cplx v = log_gamma(cplx(x, 0.0));
    CHECK(std::fabs(v.real() - log_gamma(x)) < 1e-13 * std::max(1.0, std::fabs(v.real())));
    CHECK(std::fabs(v.imag()) < 1e-13);
  }
}

TEST_CASE("log sin pi tracks the direct formula and survives large imaginary parts") {
  // moderate arguments: direct comparison
  const cplx zs[] = {{0.3, 0.2}, {0.75, -1.5}, {1.4, 3.0}, {-0.6, 0.8}};
  for (cplx z : zs) {
    cplx direct = std::log(std::sin(M_PI * z));
    cplx got = log_sin_pi(z);
    CHECK(std::abs(std::exp(got - direct) - 1.0) < 1e-12);
  }

  // the asymptotic branch takes over near |Im z| = 20, where sin(pi z) is
  // still comfortably inside double range: check both sides against it
  for (double sgn : {1.0, -1.0}) {
    for (double y : {19.9999, 20.0001}) {
      cplx z(0.4, sgn * y);
      cplx direct = std::log(std::sin(M_PI * z));
      CHECK(std::abs(std::exp(log_sin_pi(z) - direct) - 1.0) < 1e-11);
    }

    // |sin(pi(x+iy))| ~ e^{pi |y|}/2: the log must keep growing linearly far
    // beyond the overflow point of sin itself
    cplx far = log_sin_pi(cplx(0.4, sgn * 500.0));
    CHECK(rel_gap(far.real(), M_PI * 500.0 - std::log(2.0)) < 1e-12);
  }
}

TEST_CASE("zolotarev A-factor reproduces pinned values") {
  // A(phi) = (sin(alpha phi)/sin phi)^{alpha/(1-alpha)} sin((1-alpha) phi)/sin phi
  CHECK(rel_gap(std::exp(zolotarev_log_a(0.75, 1.0)), 0.156283416570777786) < 1e-12);
  CHECK(rel_gap(std::exp(zolotarev_log_a(0.25, 2.0)), 0.88622329261701199649) < 1e-12);
  CHECK(rel_gap(std::exp(zolotarev_log_a(0.5, M_PI / 2.0)), 0.5) < 1e-12);
  // finite limit at phi -> 0+: alpha^{alpha/(1-alpha)} (1-alpha)
  CHECK(rel_gap(std::exp(zolotarev_log_a(0.6, 1e-12)), 0.18590320061795601049) < 1e-9);
}

TEST_CASE("zolotarev A-factor is increasing and diverges toward pi") {
  for (double alpha : {0.25, 0.5, 0.9}) {
    double prev = zolotarev_log_a(alpha, 1e-9);
    for (double phi = 0.2; phi < 3.1; phi += 0.2) {
      double cur = zolotarev_log_a(alpha, phi);
      CHECK(cur > prev);
      prev = cur;
    }
    CHECK(zolotarev_log_a(alpha, M_PI - 1e-9) > 15.0);
  }
}
