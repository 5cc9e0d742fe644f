#pragma once

// Hand-rolled generators for property tests. Fixed seeds keep failures
// reproducible; each property draws its own stream.

#include <cmath>
#include <numbers>
#include <random>

#include "ctxprob/contextual.hpp"

namespace ctxprob::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  /// (0, 1], never exactly zero.
  double probability() { return 1.0 - uniform(0.0, 1.0); }
  SplittingCoefficients coeffs() {
    const double c1 = uniform(0.0, 1.0);
    return {c1, 1.0 - c1};
  }
  double open_phase() {
    double t = 0.0;
    while (t == 0.0) t = uniform(0.0, std::numbers::pi);
    return t;
  }
  int sign() { return uniform(0.0, 1.0) < 0.5 ? -1 : 1; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ctxprob::testing
