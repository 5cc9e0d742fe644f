#pragma once

// Context-transition calculus: the perturbation delta, the normalized
// coefficient lambda, trigonometric/hyperbolic classification and the
// forward transforms that generalize the formula of total probability.
//
//   P_S(E) = c1 P_S1(E) + c2 P_S2(E) + 2 sqrt(c1 P_S1(E) c2 P_S2(E)) lambda
//
// with lambda = cos(theta) when |lambda| <= 1 and lambda = +-cosh(theta)
// otherwise. The denominator of lambda uses c1 = P(S->S1); the source
// formula prints that factor as P_{S1/S}, which we read as the same
// splitting coefficient.

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "ctxprob/contextual.hpp"

namespace ctxprob {

inline constexpr double kDefaultClassifyTol = 1e-9;

struct Trigonometric {
  double theta;  // [0, pi]
};

struct Hyperbolic {
  double theta;  // [0, inf)
  int sign;      // +1 or -1, taken from sign(lambda)
};

/// |lambda| = 1 within the classification tolerance; no phase is assigned.
struct Boundary {};

using InterferenceKind = std::variant<Trigonometric, Hyperbolic, Boundary>;

std::string_view kind_name(const InterferenceKind& kind);
/// Phase carried by the kind, empty for Boundary.
std::optional<double> kind_theta(const InterferenceKind& kind);

struct BinDecomposition {
  double classical_part = 0.0;   // c1 p1 + c2 p2
  double delta = 0.0;
  double interference_scale = 0.0;  // 2 sqrt(c1 p1 c2 p2)
  std::optional<double> lambda;     // empty on degenerate bins
  std::optional<InterferenceKind> kind;

  bool degenerate() const noexcept { return !lambda.has_value(); }
};

struct InterferenceDecomposition {
  SplittingCoefficients coeffs;
  double tol = kDefaultClassifyTol;
  std::vector<BinDecomposition> bins;
};

/// c1 p1 + c2 p2.
double total_probability(const SplittingCoefficients& coeffs, double p1, double p2);

/// c1 (pS - p1) + c2 (pS - p2). Requires |c1 + c2 - 1| <= 1e-12 and checks
/// the result against pS - total_probability; throws InvariantError otherwise.
double perturbation_delta(const SplittingCoefficients& coeffs, double pS, double p1, double p2);

/// delta / (2 sqrt(c1 p1 c2 p2)). Throws DegenerateBranch if c1 p1 or c2 p2 is zero.
double lambda_coefficient(const SplittingCoefficients& coeffs, double pS, double p1, double p2);

InterferenceKind classify(double lambda, double tol = kDefaultClassifyTol);

/// Per-bin decomposition of a validated model. Degenerate bins are marked,
/// never fatal. Throws InvariantError when validate_model reports violations.
InterferenceDecomposition decompose(const ContextualModel& model, double tol = kDefaultClassifyTol);

/// Trigonometric transform; theta in [0, pi]. The result lies in [0, p1 + p2];
/// values above 1 mean the inputs are not jointly realizable.
double forward_trig(const SplittingCoefficients& coeffs, double p1, double p2, double theta);

/// Hyperbolic transform; theta >= 0, sign = +-1. Throws OutOfRange when the
/// result is not a probability.
double forward_hyp(const SplittingCoefficients& coeffs, double p1, double p2, double theta, int sign);

}  // namespace ctxprob
