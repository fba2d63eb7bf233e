#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace levywalk {

inline constexpr const char* version_string = "0.1.0";

// Caller violated a documented precondition.
class domain_error : public std::invalid_argument {
 public:
  explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical routine failed to reach its accuracy target. Carries the best
// value found and an estimate of its error so callers can degrade gracefully.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double best, double estimate)
      : std::runtime_error(what), best_value(best), error_estimate(estimate) {}
  double best_value;
  double error_estimate;
};

// An intermediate computation produced a non-finite or inconsistent value.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Stability index, restricted to the open interval (0,1).
struct StableIndex {
  double alpha;
  explicit StableIndex(double a) : alpha(a) {
    if (!std::isfinite(a) || !(a > 0.0) || !(a < 1.0))
      throw domain_error("stable index must lie in (0,1), got " + std::to_string(a));
  }
};

// Stability index plus up-probability p in (0,1).
struct ModelParams {
  StableIndex alpha;
  double p;
  ModelParams(StableIndex a, double p_) : alpha(a), p(p_) {
    if (!std::isfinite(p_) || !(p_ > 0.0) || !(p_ < 1.0))
      throw domain_error("up-probability must lie in (0,1), got " + std::to_string(p_));
  }
  ModelParams(double a, double p_) : ModelParams(StableIndex(a), p_) {}
};

// Shared quadrature budget. At least one tolerance must be positive.
struct QuadConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_depth = 30;
  long max_evals = 200000;
};

}  // namespace levywalk
