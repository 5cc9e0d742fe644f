#include "ctxprob/amplitudes.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ctxprob/errors.hpp"
#include "ctxprob/interference.hpp"

namespace ctxprob {

SplitComplex SplitComplex::exp_j(double theta) { return {std::cosh(theta), std::sinh(theta)}; }

double split_modulus(const SplitComplex& z) { return z.x() * z.x() - z.y() * z.y(); }

std::vector<double> ProbabilityWave::born() const {
  std::vector<double> out;
  out.reserve(amp.size());
  for (const auto& a : amp) out.push_back(std::norm(a));
  return out;
}

CosIdentity cos_identity(double a, double b, double theta) {
  const double lhs = a * a + b * b + 2.0 * a * b * std::cos(theta);
  const double rhs = std::norm(ComplexAmplitude{a} + b * std::polar(1.0, theta));
  return {lhs, rhs};
}

ComplexAmplitude synthesize_wave(const SplittingCoefficients& coeffs, double p1, double p2, double theta,
                                 PhaseConvention convention) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw InvariantError("trigonometric phase must lie in [0, pi]");
  const ComplexAmplitude branch1 = std::sqrt(coeffs.c1 * p1) * std::polar(1.0, theta);
  const ComplexAmplitude branch2 = std::sqrt(coeffs.c2 * p2);
  return std::polar(1.0, convention.theta2) * (branch1 + branch2);
}

ProbabilityWave synthesize_two_slit_wave(const OutcomeSpace& space, const std::vector<double>& p1,
                                         const std::vector<double>& p2, const std::vector<double>& theta,
                                         double h) {
  const std::size_t n = space.size();
  if (p1.size() != n || p2.size() != n || theta.size() != n)
    throw InvariantError("envelopes and phase table must match the outcome space");
  if (!(h > 0.0)) throw InvariantError("scaling factor h must be positive");

  ProbabilityWave wave;
  wave.space = space;
  wave.h = h;
  wave.amp.reserve(n);
  double total = 0.0;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t1 = theta[i];
    const double t2 = 0.0;
    const ComplexAmplitude phi =
        inv_sqrt2 * (std::polar(std::sqrt(p1[i]), t1) + std::polar(std::sqrt(p2[i]), t2));
    wave.amp.push_back(phi);
    wave.theta1.push_back(t1);
    wave.theta2.push_back(t2);
    wave.xi1.push_back(t1 / h);
    wave.xi2.push_back(t2 / h);
    total += std::norm(phi);
  }
  if (!(std::abs(total - 1.0) <= kNormalizationTol)) {
    std::ostringstream os;
    os.precision(17);
    os << "probability wave is not normalized: sum |phi|^2 = " << total;
    throw NormalizationError(os.str());
  }
  return wave;
}

SplitComplex synthesize_hyperbolic(const SplittingCoefficients& coeffs, double p1, double p2, double theta,
                                   int sign) {
  forward_hyp(coeffs, p1, p2, theta, sign);
  const SplitComplex a{std::sqrt(coeffs.c1 * p1)};
  const SplitComplex b = SplitComplex{std::sqrt(coeffs.c2 * p2)} * SplitComplex::exp_j(theta);
  // Conjugating e^{j theta} leaves the split modulus unchanged, so the
  // negative branch flips the sign of the second term instead.
  return sign > 0 ? a + b : a - b;
}

}  // namespace ctxprob
