#pragma once

// Monte Carlo two-slit experiment on a one-dimensional screen.
//
// Three contexts are simulated independently: both slits open (S) and one
// slit open (S1, S2). Under S every emitted particle is registered with the
// analytic pattern p(x) = [p1 + p2 + 2 sqrt(p1 p2) cos theta(x)] / 2. Under
// S_j each emission is accepted with probability 1/2 and then registered
// with the envelope p_j, so N_j / N estimates the splitting coefficient 1/2.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctxprob/contextual.hpp"
#include "ctxprob/interference.hpp"

namespace ctxprob {

struct UniformGrid {
  std::size_t bins = 0;
  double x_min = 0.0;
  double x_max = 0.0;

  double width() const noexcept { return (x_max - x_min) / static_cast<double>(bins); }
  double midpoint(std::size_t i) const noexcept { return x_min + (static_cast<double>(i) + 0.5) * width(); }
  /// Labels are midpoints rendered with 15 significant digits.
  OutcomeSpace space() const;
};

std::vector<double> gaussian_envelope(const UniformGrid& grid, double mean, double sigma);
std::vector<double> uniform_envelope(const UniformGrid& grid);

struct ExplicitPhase {
  std::vector<double> theta;
};

/// theta(x) = (momentum1 - momentum2) x / h.
struct FreeWavePhase {
  double momentum1 = 0.0;
  double momentum2 = 0.0;
  double h = 1.0;
};

using PhaseModel = std::variant<ExplicitPhase, FreeWavePhase>;

struct TwoSlitScenario {
  static constexpr SplittingCoefficients kCoefficients{0.5, 0.5};

  UniformGrid grid;
  std::vector<double> envelope1;
  std::vector<double> envelope2;
  PhaseModel phase;
  std::uint64_t n_emitted = 0;  // per context per run
  std::uint64_t seed = 0;
  std::uint32_t runs = 1;

  /// Human-readable invariant violations; empty when valid.
  std::vector<std::string> validate() const;
  double theta_at(std::size_t bin) const;
  std::vector<double> theta_table() const;
};

/// Representative of theta modulo 2 pi reflected into [0, pi]; this is the
/// phase a decomposition can recover.
double principal_phase(double theta);

enum class Context : std::uint8_t { S = 0, S1 = 1, S2 = 2 };

std::string_view context_label(Context which);

struct AnalyticPattern {
  ContextualDistribution dist;   // renormalized to sum 1
  std::vector<double> raw;       // bin-wise formula before renormalization
  double normalization = 1.0;    // sum of raw; deviation from 1 reflects grid truncation
};

AnalyticPattern analytic_pattern(const TwoSlitScenario& scenario);

struct SimulationOptions {
  double acceptance = 0.5;  // per-emission acceptance under S1 and S2
  unsigned threads = 1;     // 0 selects hardware concurrency
};

/// Counts for one context and one collection period, deterministic in
/// (seed, which, run).
EnsembleCounts simulate_context(const TwoSlitScenario& scenario, Context which, std::uint32_t run = 0,
                                const SimulationOptions& options = {});

struct EmpiricalBin {
  double p_S = 0.0;
  double p_1 = 0.0;
  double p_2 = 0.0;
  double se_S = 0.0;
  double se_1 = 0.0;
  double se_2 = 0.0;
  BinDecomposition decomposition;
  double se_delta = 0.0;
  std::optional<double> se_lambda;
  std::optional<double> theta;
  std::optional<double> se_theta;
  std::optional<double> z_score;  // |delta| / se_delta
};

/// Decomposition of three observed ensembles with binomial standard errors.
struct EmpiricalAnalysis {
  OutcomeSpace space;
  EnsembleCounts counts_S;
  EnsembleCounts counts_S1;
  EnsembleCounts counts_S2;
  SplittingEstimate splitting;           // raw N_j / N and alternative deviation
  SplittingCoefficients model_coeffs;    // N_j / (N1 + N2), used for the decomposition
  double tol = kDefaultClassifyTol;
  std::vector<EmpiricalBin> bins;
  double violation_statistic = 0.0;      // max_bin |p_S - total probability| / se
  std::optional<std::size_t> violation_bin;
};

EmpiricalAnalysis analyze_counts(const OutcomeSpace& space, const EnsembleCounts& counts_S,
                                 const EnsembleCounts& counts_S1, const EnsembleCounts& counts_S2,
                                 double tol = kDefaultClassifyTol);

struct RunTotals {
  std::uint64_t detected_S = 0;
  std::uint64_t detected_S1 = 0;
  std::uint64_t detected_S2 = 0;
};

struct ExperimentReport {
  EmpiricalAnalysis analysis;
  std::vector<RunTotals> runs;
  double pattern_normalization = 1.0;
};

/// Simulates every (context, run), pools counts per context and analyzes them.
/// The result does not depend on options.threads.
ExperimentReport run_experiment(const TwoSlitScenario& scenario, double tol = kDefaultClassifyTol,
                                const SimulationOptions& options = {});

struct AlternativeCheck {
  bool pass = false;
  double deviation = 0.0;  // |N1 + N2 - N| / sqrt(N)
};

AlternativeCheck alternative_condition_check(const EmpiricalAnalysis& analysis, double n_sigma);
AlternativeCheck alternative_condition_check(const ExperimentReport& report, double n_sigma);

struct PhaseComparison {
  std::size_t checked = 0;
  std::vector<std::size_t> failing_bins;

  bool pass() const noexcept { return failing_bins.empty(); }
};

/// Compares recovered phases against the principal value of `theta_true` on
/// bins where every context registered at least `min_counts` particles. A bin
/// passes when cos(theta_true) lies within n_sigma standard errors of the
/// estimated lambda, i.e. theta_true lies inside the n_sigma band of lambda
/// mapped through arccos.
PhaseComparison compare_phases(const EmpiricalAnalysis& analysis, const std::vector<double>& theta_true,
                               std::uint64_t min_counts = 100, double n_sigma = 3.0);

}  // namespace ctxprob
