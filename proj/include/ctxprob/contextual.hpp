#pragma once

// Domain types for contexts, outcome spaces and contextual distributions.
//
// A context is a complete set of experimental conditions. Each context owns
// its own distribution over a shared, finite outcome space; nothing here
// assumes the three distributions come from a single probability space.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ctxprob {

inline constexpr double kNormalizationTol = 1e-9;
inline constexpr double kAlternativeTol = 1e-12;

/// Ordered, unique outcome labels. One label is one registration event.
struct OutcomeSpace {
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return labels.size(); }
};

/// Probabilities indexed in the same order as the owning OutcomeSpace.
struct ContextualDistribution {
  std::string context_id;
  std::vector<double> probs;
};

/// Sharing ratios P(S->S1), P(S->S2). For exact models c1 + c2 = 1.
struct SplittingCoefficients {
  double c1 = 0.5;
  double c2 = 0.5;

  double sum() const noexcept { return c1 + c2; }
};

/// The context-transition triple S -> S1, S -> S2.
struct ContextualModel {
  OutcomeSpace space;
  ContextualDistribution dist_S;
  ContextualDistribution dist_S1;
  ContextualDistribution dist_S2;
  SplittingCoefficients coeffs;
};

/// Detector counts collected under one context during one collection period.
struct EnsembleCounts {
  std::string context_id;
  std::vector<std::uint64_t> counts;
  std::uint64_t total_emitted = 0;

  std::uint64_t detected() const noexcept;
};

struct Violation {
  std::string invariant;
  std::string context;             // empty for model-wide violations
  double value = 0.0;
  std::optional<std::size_t> bin;  // set when the violation is bin-local

  std::string describe() const;
};

/// Checks every invariant of the model and its parts. Violations are data.
std::vector<Violation> validate_model(const ContextualModel& model);

/// Violations of a single distribution against a space of `bins` outcomes.
std::vector<Violation> validate_distribution(const ContextualDistribution& dist, std::size_t bins);

struct SplittingEstimate {
  SplittingCoefficients coeffs;  // (N1/N, N2/N), never renormalized
  double deviation = 0.0;        // |N1/N + N2/N - 1|
};

/// Splitting coefficients from detected totals. Throws ZeroEnsemble if N = 0.
SplittingEstimate estimate_splitting(const EnsembleCounts& counts_S1, const EnsembleCounts& counts_S2,
                                     const EnsembleCounts& counts_S);

/// Relative frequencies. Throws ZeroEnsemble if every count is zero.
ContextualDistribution empirical_distribution(const EnsembleCounts& counts);

}  // namespace ctxprob
