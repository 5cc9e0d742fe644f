#pragma once

// Linear representations of contextual probabilities.
//
// Trigonometric transitions are carried by ordinary complex amplitudes whose
// squared modulus reproduces the transform (the Born contract). Hyperbolic
// transitions use split-complex numbers x + j y with j^2 = +1, whose
// indefinite modulus x^2 - y^2 turns e^{j theta} = cosh + j sinh into the
// cosh interference law.

#include <complex>
#include <vector>

#include "ctxprob/contextual.hpp"

namespace ctxprob {

using ComplexAmplitude = std::complex<double>;

class SplitComplex {
 public:
  constexpr SplitComplex() = default;
  constexpr SplitComplex(double x, double y = 0.0) : x_(x), y_(y) {}

  /// e^{j theta} = cosh(theta) + j sinh(theta).
  static SplitComplex exp_j(double theta);

  constexpr double x() const noexcept { return x_; }
  constexpr double y() const noexcept { return y_; }
  constexpr SplitComplex conj() const noexcept { return {x_, -y_}; }

  friend constexpr SplitComplex operator+(SplitComplex a, SplitComplex b) { return {a.x_ + b.x_, a.y_ + b.y_}; }
  friend constexpr SplitComplex operator-(SplitComplex a, SplitComplex b) { return {a.x_ - b.x_, a.y_ - b.y_}; }
  friend constexpr SplitComplex operator*(SplitComplex a, SplitComplex b) {
    return {a.x_ * b.x_ + a.y_ * b.y_, a.x_ * b.y_ + a.y_ * b.x_};
  }
  friend constexpr bool operator==(SplitComplex, SplitComplex) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
};

/// x^2 - y^2; may be negative.
double split_modulus(const SplitComplex& z);

struct CosIdentity {
  double lhs;  // a^2 + b^2 + 2ab cos(theta)
  double rhs;  // |a + b e^{i theta}|^2
};

CosIdentity cos_identity(double a, double b, double theta);

/// Gauge for the two branch phases: theta1 - theta2 = theta, theta2 fixed.
struct PhaseConvention {
  double theta2 = 0.0;
};

/// e^{i theta2} (sqrt(c1 p1) e^{i theta} + sqrt(c2 p2)); |result|^2 == forward_trig(...).
ComplexAmplitude synthesize_wave(const SplittingCoefficients& coeffs, double p1, double p2, double theta,
                                 PhaseConvention convention = {});

/// Per-bin complex amplitudes for the two-slit screen with coefficients 1/2.
struct ProbabilityWave {
  OutcomeSpace space;
  std::vector<ComplexAmplitude> amp;
  // theta1 = theta(x), theta2 = 0. xi_j = theta_j / h; h only enters there.
  std::vector<double> theta1;
  std::vector<double> theta2;
  std::vector<double> xi1;
  std::vector<double> xi2;
  double h = 1.0;

  std::vector<double> born() const;
};

/// phi(x) = (e^{i theta1(x)} sqrt(p1) + e^{i theta2(x)} sqrt(p2)) / sqrt(2).
/// Throws NormalizationError if sum |phi|^2 differs from 1 by more than 1e-9.
ProbabilityWave synthesize_two_slit_wave(const OutcomeSpace& space, const std::vector<double>& p1,
                                         const std::vector<double>& p2, const std::vector<double>& theta,
                                         double h = 1.0);

/// sqrt(c1 p1) + sign sqrt(c2 p2) e^{j theta}; split modulus == forward_hyp(...).
/// Throws OutOfRange under the same conditions as forward_hyp.
SplitComplex synthesize_hyperbolic(const SplittingCoefficients& coeffs, double p1, double p2, double theta,
                                   int sign);

}  // namespace ctxprob
