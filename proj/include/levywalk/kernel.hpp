#pragma once

#include <cstdint>
#include <mutex>
#include <unordered_map>

#include "levywalk/common.hpp"
#include "levywalk/quadrature.hpp"

namespace levywalk {

// The coupling kernel shared by both walk densities:
//   K(w,x) = int_0^infty z^{1-alpha} r(c1 z) r(c2 z) dz,
//   c1 = (w+x) / (2 p^{1/alpha}),  c2 = (w-x) / (2 (1-p)^{1/alpha}),
// defined for w > |x|. Swapping (p, x) -> (1-p, -x) swaps c1 and c2 and
// leaves K unchanged.
//
// K depends on (w,x) only through the sums w+x and w-x, and every outer
// integral approaches w = |x| where one of those sums vanishes. The _sums
// entry points take them directly so callers sitting in a singularity-removing
// substitution can pass the small one exactly instead of letting it cancel.

// Closed form at alpha = 1/2.
double z_kernel_half_sums(double p, double w_plus_x, double w_minus_x);
double z_kernel_half(double p, double w, double x);

// Defining integral evaluated after rescaling z by the smaller of c1, c2,
// which reduces it to c_ref^{alpha-2} H(R) with H a function of the scale
// ratio R = c_big/c_ref alone. Tolerance requests at rel_tol >= 1e-10 are
// served from a per-alpha Chebyshev fit of log H (built once, accurate to a
// few 1e-12); tighter requests run the adaptive quadrature directly. Once c1
// and c2 are several decades apart the far factor is in its power tail
// everywhere the near factor lives, and the integral switches to that tail
// series summed against closed negative stable moments; this keeps the
// (w-|x|)^{2 alpha - 1} edge exact however small the gap w - |x| gets.
double z_kernel_quad_sums(const ModelParams& params, double w_plus_x, double w_minus_x,
                          const QuadConfig& cfg = {});
double z_kernel_quad(const ModelParams& params, double w, double x, const QuadConfig& cfg = {});

// Dispatcher: closed form at alpha = 1/2, quadrature otherwise.
double z_kernel_sums(const ModelParams& params, double w_plus_x, double w_minus_x,
                     const QuadConfig& cfg = {});
double z_kernel(const ModelParams& params, double w, double x, const QuadConfig& cfg = {});

// Memoizes z_kernel_sums on exact (w+x, w-x) bit patterns. Outer integrals
// re-request identical nodes when tolerances are retried or when several
// densities share one parameter set, and kernel values are the expensive part.
class KernelCache {
 public:
  KernelCache(const ModelParams& params, const QuadConfig& cfg)
      : params_(params), cfg_(cfg) {}

  double operator()(double w_plus_x, double w_minus_x);
  std::size_t size() const;

 private:
  struct Key {
    std::uint64_t s_bits, d_bits;
    bool operator==(const Key& o) const { return s_bits == o.s_bits && d_bits == o.d_bits; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = k.s_bits * 0x9e3779b97f4a7c15ull;
      h ^= k.d_bits + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h * 0xbf58476d1ce4e5b9ull);
    }
  };

  ModelParams params_;
  QuadConfig cfg_;
  mutable std::mutex mu_;
  std::unordered_map<Key, double, KeyHash> memo_;
};

}  // namespace levywalk
