#pragma once

#include <numeric>
#include <vector>

#include "levywalk/common.hpp"
#include "levywalk/quadrature.hpp"
#include "levywalk/wait_first.hpp"

namespace levywalk {

// Rational stability index alpha = l/k in lowest terms, 0 < l < k.
struct RationalIndex {
  int l, k;
  RationalIndex(int l_, int k_) : l(l_), k(k_) {
    if (l_ < 1 || k_ < 2 || l_ >= k_ || std::gcd(l_, k_) != 1)
      throw domain_error("rational index needs coprime integers 0 < l < k");
  }
  double alpha() const { return static_cast<double>(l) / static_cast<double>(k); }
};

// {(a+j)/k : j = 0..k-1}, the arithmetic parameter block that rational-index
// G-functions are built from.
std::vector<double> delta_list(int k, double a);

// A Meijer G^{m,n}_{p,q} instance with real parameters and positive argument.
// The constructor cancels numerator/denominator gamma factors that match to
// 1e-12 (exactly equal parameters in intent; bit equality is too strict for
// values like l*(1/k) vs l/k), checks that the left poles stay left of the
// right poles, and fixes the contour abscissa in the gap.
struct MeijerSpec {
  int m, n;
  std::vector<double> a_list, b_list;  // sizes p and q; leading n and m entries
                                       // are the principal groups
  double argument;

  // derived, post-cancellation: gamma(b - s) and gamma(1 - a + s) upstairs,
  // gamma(a - s) and gamma(1 - b + s) downstairs
  std::vector<double> num_minus, num_plus, den_minus, den_plus;
  double sigma;

  MeijerSpec(int m_, int n_, std::vector<double> a, std::vector<double> b, double z);
};

// Evaluates the G-function by integrating the gamma-ratio integrand along the
// vertical contour Re s = sigma. Uses conjugate symmetry (all parameters
// real, z > 0) to fold the contour onto T >= 0, truncates where the gamma
// envelope has decayed by e^{-40}, and throws convergence_error if the
// envelope has not decayed by T = 64 or the quadrature misses its target.
double eval_meijer_g(const MeijerSpec& spec, const QuadConfig& cfg = {});

// One-sided stable density at alpha = l/k through its G-function form.
double r_rational(const RationalIndex& idx, double x, const QuadConfig& cfg = {});

struct MeijerKernelStats {
  long g_nodes = 0;         // kernel evaluations served by the G-function
  long fallback_nodes = 0;  // served by the quadrature kernel near Z = 1
};

// Coupling kernel K(w,x) in G-function form. The G argument is
// Z = ((1-p)/p)^k ((w+x)/(w-x))^l; within |Z-1| < 0.05 the contour integrand
// decays too slowly to be cheap, so those nodes fall back to z_kernel. Like
// the quadrature kernel it depends on (w,x) only through w+x and w-x, and the
// _sums form takes them directly for callers that hold the small one exactly.
double z_kernel_meijer_sums(const RationalIndex& idx, double p, double w_plus_x,
                            double w_minus_x, const QuadConfig& cfg = {},
                            MeijerKernelStats* stats = nullptr);
double z_kernel_meijer(const RationalIndex& idx, double p, double w, double x,
                       const QuadConfig& cfg = {}, MeijerKernelStats* stats = nullptr);

// Wait-first density with the kernel evaluated through the G-function form;
// same outer w-integral as the quadrature path.
double pdf_wait_first_meijer(const RationalIndex& idx, double p, EvalPoint pt,
                             const QuadConfig& cfg = {}, MeijerKernelStats* stats = nullptr);

DensityCurve curve_wait_first_meijer(const RationalIndex& idx, double p, double t,
                                     const std::vector<double>& grid, const QuadConfig& cfg = {},
                                     MeijerKernelStats* stats = nullptr);

}  // namespace levywalk
