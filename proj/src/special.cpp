#include "levywalk/special.hpp"

#include <cmath>

namespace levywalk {

namespace {

// Lanczos coefficients, g = 7, 9 terms. Relative accuracy ~1e-13 over the
// half-plane Re z >= 0.5 after the shift below.
const double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7};

constexpr double kLnTwoPi = 1.8378770664093454836;
constexpr double kLnPi = 1.1447298858494001741;

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw domain_error("log_gamma needs a positive real argument");
  return std::lgamma(x);
}

std::complex<double> log_sin_pi(std::complex<double> z) {
  const double im = z.imag();
  // sin(pi z) ~ exp(-+ i pi z) / (2 -+ i...) once |Im z| is large; switching to
  // the asymptote at 20 keeps exp() comfortably inside double range while the
  // dropped term is already e^{-2 pi 20} ~ 1e-55
  if (im > 20.0)
    return std::complex<double>(0.0, -M_PI) * z + std::complex<double>(-M_LN2, M_PI / 2.0);
  if (im < -20.0)
    return std::complex<double>(0.0, M_PI) * z + std::complex<double>(-M_LN2, -M_PI / 2.0);
  return std::log(std::sin(M_PI * z));
}

std::complex<double> log_gamma(std::complex<double> z) {
  if (z.real() < 0.5) {
    // reflection; the branch of log_sin_pi only shifts the imaginary part by
    // multiples of 2 pi, invisible after exponentiation
    return kLnPi - log_sin_pi(z) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  std::complex<double> acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + static_cast<double>(i));
  const std::complex<double> t = z + 7.5;
  return 0.5 * kLnTwoPi + (z + 0.5) * std::log(t) - t + std::log(acc);
}

double zolotarev_log_a(double alpha, double phi) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw domain_error("zolotarev_log_a needs alpha in (0,1)");
  const double clip = 1e-10;
  phi = std::min(std::max(phi, clip), M_PI - clip);
  const double om = 1.0 - alpha;
  const double ls = std::log(std::sin(phi));
  return (alpha / om) * (std::log(std::sin(alpha * phi)) - ls) +
         std::log(std::sin(om * phi)) - ls;
}

}  // namespace levywalk
