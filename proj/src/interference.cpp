#include "ctxprob/interference.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ctxprob/errors.hpp"

namespace ctxprob {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double branch_scale(const SplittingCoefficients& c, double p1, double p2) {
  return 2.0 * std::sqrt(c.c1 * p1 * c.c2 * p2);
}

}  // namespace

std::string_view kind_name(const InterferenceKind& kind) {
  return std::visit(overloaded{[](const Trigonometric&) { return std::string_view{"trigonometric"}; },
                               [](const Hyperbolic&) { return std::string_view{"hyperbolic"}; },
                               [](const Boundary&) { return std::string_view{"boundary"}; }},
                    kind);
}

std::optional<double> kind_theta(const InterferenceKind& kind) {
  return std::visit(overloaded{[](const Trigonometric& t) -> std::optional<double> { return t.theta; },
                               [](const Hyperbolic& h) -> std::optional<double> { return h.theta; },
                               [](const Boundary&) -> std::optional<double> { return std::nullopt; }},
                    kind);
}

double total_probability(const SplittingCoefficients& coeffs, double p1, double p2) {
  return coeffs.c1 * p1 + coeffs.c2 * p2;
}

double perturbation_delta(const SplittingCoefficients& coeffs, double pS, double p1, double p2) {
  if (!(std::abs(coeffs.sum() - 1.0) <= kAlternativeTol)) {
    std::ostringstream os;
    os.precision(17);
    os << "splitting coefficients violate c1 + c2 = 1: sum " << coeffs.sum();
    throw InvariantError(os.str());
  }
  const double delta = coeffs.c1 * (pS - p1) + coeffs.c2 * (pS - p2);
  const double residual = pS - total_probability(coeffs, p1, p2);
  if (!(std::abs(delta - residual) <= kAlternativeTol)) {
    std::ostringstream os;
    os.precision(17);
    os << "perturbation forms disagree: " << delta << " vs " << residual;
    throw InvariantError(os.str());
  }
  return delta;
}

double lambda_coefficient(const SplittingCoefficients& coeffs, double pS, double p1, double p2) {
  if (!(coeffs.c1 * p1 > 0.0) || !(coeffs.c2 * p2 > 0.0))
    throw DegenerateBranch("lambda undefined: a weighted branch probability is zero");
  return perturbation_delta(coeffs, pS, p1, p2) / branch_scale(coeffs, p1, p2);
}

InterferenceKind classify(double lambda, double tol) {
  if (!(tol > 0.0)) throw InvariantError("classification tolerance must be positive");
  const double mag = std::abs(lambda);
  if (mag < 1.0 - tol) return Trigonometric{std::acos(lambda)};
  if (mag > 1.0 + tol) return Hyperbolic{std::acosh(mag), lambda < 0.0 ? -1 : 1};
  return Boundary{};
}

InterferenceDecomposition decompose(const ContextualModel& model, double tol) {
  if (auto violations = validate_model(model); !violations.empty())
    throw InvariantError("invalid contextual model: " + violations.front().describe());

  InterferenceDecomposition out{model.coeffs, tol, {}};
  const auto& c = model.coeffs;
  const std::size_t n = model.space.size();
  out.bins.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pS = model.dist_S.probs[i];
    const double p1 = model.dist_S1.probs[i];
    const double p2 = model.dist_S2.probs[i];
    BinDecomposition bin;
    bin.classical_part = total_probability(c, p1, p2);
    bin.delta = perturbation_delta(c, pS, p1, p2);
    bin.interference_scale = branch_scale(c, p1, p2);
    if (c.c1 * p1 > 0.0 && c.c2 * p2 > 0.0) {
      bin.lambda = bin.delta / bin.interference_scale;
      bin.kind = classify(*bin.lambda, tol);
    }
    out.bins.push_back(bin);
  }
  return out;
}

double forward_trig(const SplittingCoefficients& coeffs, double p1, double p2, double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw InvariantError("trigonometric phase must lie in [0, pi]");
  const double value = total_probability(coeffs, p1, p2) + branch_scale(coeffs, p1, p2) * std::cos(theta);
  // Bounded above by p1 + p2 (not by 1) via Cauchy-Schwarz.
  // Exact arithmetic gives |sqrt(c1 p1) + sqrt(c2 p2) e^{i theta}|^2 >= 0;
  // cancellation at theta = pi may leave a few ulps below zero.
  return value < 0.0 ? 0.0 : value;
}

double forward_hyp(const SplittingCoefficients& coeffs, double p1, double p2, double theta, int sign) {
  if (!(theta >= 0.0)) throw InvariantError("hyperbolic phase must be >= 0");
  if (sign != 1 && sign != -1) throw InvariantError("hyperbolic sign must be +1 or -1");
  const double value =
      total_probability(coeffs, p1, p2) + sign * branch_scale(coeffs, p1, p2) * std::cosh(theta);
  if (!(value >= 0.0 && value <= 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "hyperbolic transition is not realizable as a probability: " << value;
    throw OutOfRange(os.str(), value);
  }
  return value;
}

}  // namespace ctxprob
