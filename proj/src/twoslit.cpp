#include "ctxprob/twoslit.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <thread>

#include "ctxprob/errors.hpp"
#include "ctxprob/rng.hpp"

namespace ctxprob {
namespace {

std::string format_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string describe_sum(std::string_view what, double total) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.*s sums to %.17g, expected 1 within 1e-9", static_cast<int>(what.size()),
                what.data(), total);
  return buf;
}

void check_envelope(std::string_view name, const std::vector<double>& env, std::size_t bins,
                    std::vector<std::string>& out) {
  if (env.size() != bins) {
    out.push_back(std::string(name) + " has " + std::to_string(env.size()) + " values, grid has " +
                  std::to_string(bins) + " bins");
    return;
  }
  for (std::size_t i = 0; i < env.size(); ++i) {
    if (!(env[i] >= 0.0 && env[i] <= 1.0)) {
      out.push_back(std::string(name) + "[" + std::to_string(i) + "] = " + format_label(env[i]) +
                    " is not a probability");
    }
  }
  const double total = std::accumulate(env.begin(), env.end(), 0.0);
  if (!(std::abs(total - 1.0) <= kNormalizationTol)) out.push_back(describe_sum(name, total));
}

double safe_sqrt_ratio(double p, double n) { return n > 0.0 ? std::sqrt(p * (1.0 - p) / n) : 0.0; }

}  // namespace

OutcomeSpace UniformGrid::space() const {
  OutcomeSpace s;
  s.labels.reserve(bins);
  for (std::size_t i = 0; i < bins; ++i) s.labels.push_back(format_label(midpoint(i)));
  return s;
}

std::vector<double> gaussian_envelope(const UniformGrid& grid, double mean, double sigma) {
  if (!(sigma > 0.0)) throw InvariantError("gaussian envelope needs sigma > 0");
  std::vector<double> env(grid.bins);
  for (std::size_t i = 0; i < grid.bins; ++i) {
    const double z = (grid.midpoint(i) - mean) / sigma;
    env[i] = std::exp(-0.5 * z * z);
  }
  const double total = std::accumulate(env.begin(), env.end(), 0.0);
  if (!(total > 0.0)) throw InvariantError("gaussian envelope has no mass on the grid");
  for (auto& v : env) v /= total;
  return env;
}

std::vector<double> uniform_envelope(const UniformGrid& grid) {
  return std::vector<double>(grid.bins, 1.0 / static_cast<double>(grid.bins));
}

std::vector<std::string> TwoSlitScenario::validate() const {
  std::vector<std::string> out;
  if (grid.bins == 0) out.emplace_back("grid.bins must be at least 1");
  if (!(grid.x_max > grid.x_min)) out.emplace_back("grid.x_max must exceed grid.x_min");
  check_envelope("envelope1", envelope1, grid.bins, out);
  check_envelope("envelope2", envelope2, grid.bins, out);
  if (const auto* ex = std::get_if<ExplicitPhase>(&phase)) {
    if (ex->theta.size() != grid.bins) out.emplace_back("explicit phase table length differs from grid.bins");
    for (double t : ex->theta)
      if (!std::isfinite(t)) {
        out.emplace_back("explicit phase table has a non-finite value");
        break;
      }
  } else {
    const auto& fw = std::get<FreeWavePhase>(phase);
    if (!(fw.h > 0.0)) out.emplace_back("free-wave scaling factor h must be positive");
    if (!std::isfinite(fw.momentum1) || !std::isfinite(fw.momentum2))
      out.emplace_back("free-wave momenta must be finite");
  }
  if (runs == 0) out.emplace_back("sampling.runs must be positive");
  return out;
}

double TwoSlitScenario::theta_at(std::size_t bin) const {
  if (const auto* ex = std::get_if<ExplicitPhase>(&phase)) return ex->theta.at(bin);
  const auto& fw = std::get<FreeWavePhase>(phase);
  return (fw.momentum1 - fw.momentum2) * grid.midpoint(bin) / fw.h;
}

std::vector<double> TwoSlitScenario::theta_table() const {
  std::vector<double> out(grid.bins);
  for (std::size_t i = 0; i < grid.bins; ++i) out[i] = theta_at(i);
  return out;
}

double principal_phase(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(theta, two_pi);
  if (r < 0.0) r += two_pi;
  return r > std::numbers::pi ? two_pi - r : r;
}

std::string_view context_label(Context which) {
  switch (which) {
    case Context::S: return "S";
    case Context::S1: return "S1";
    case Context::S2: return "S2";
  }
  return "?";
}

AnalyticPattern analytic_pattern(const TwoSlitScenario& scenario) {
  if (auto errors = scenario.validate(); !errors.empty())
    throw InvariantError("invalid two-slit scenario: " + errors.front());
  AnalyticPattern out;
  out.dist.context_id = "S";
  const std::size_t n = scenario.grid.bins;
  out.raw.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p1 = scenario.envelope1[i];
    const double p2 = scenario.envelope2[i];
    const double v = 0.5 * (p1 + p2 + 2.0 * std::sqrt(p1 * p2) * std::cos(scenario.theta_at(i)));
    // Mathematically |sqrt(p1) e^{i theta} + sqrt(p2)|^2 / 2 >= 0.
    out.raw[i] = std::max(v, 0.0);
  }
  out.normalization = std::accumulate(out.raw.begin(), out.raw.end(), 0.0);
  if (!(out.normalization > 0.0)) throw NormalizationError("analytic pattern has no mass on the grid");
  out.dist.probs.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.dist.probs[i] = out.raw[i] / out.normalization;
  return out;
}

EnsembleCounts simulate_context(const TwoSlitScenario& scenario, Context which, std::uint32_t run,
                                const SimulationOptions& options) {
  if (auto errors = scenario.validate(); !errors.empty())
    throw InvariantError("invalid two-slit scenario: " + errors.front());
  EnsembleCounts out;
  out.context_id = std::string(context_label(which));
  out.counts.assign(scenario.grid.bins, 0);
  out.total_emitted = scenario.n_emitted;
  if (scenario.n_emitted == 0) return out;

  StreamRng rng(scenario.seed, static_cast<std::uint64_t>(which), run);
  if (which == Context::S) {
    const auto pattern = analytic_pattern(scenario);
    const DiscreteSampler sample(pattern.dist.probs);
    for (std::uint64_t k = 0; k < scenario.n_emitted; ++k) ++out.counts[sample(rng.uniform())];
    return out;
  }
  const auto& envelope = which == Context::S1 ? scenario.envelope1 : scenario.envelope2;
  const DiscreteSampler sample(envelope);
  for (std::uint64_t k = 0; k < scenario.n_emitted; ++k) {
    const double accept = rng.uniform();
    const double where = rng.uniform();
    if (accept < options.acceptance) ++out.counts[sample(where)];
  }
  return out;
}

EmpiricalAnalysis analyze_counts(const OutcomeSpace& space, const EnsembleCounts& counts_S,
                                 const EnsembleCounts& counts_S1, const EnsembleCounts& counts_S2, double tol) {
  const std::size_t n = space.size();
  for (const auto* c : {&counts_S, &counts_S1, &counts_S2}) {
    if (c->counts.size() != n)
      throw InvariantError("counts for context " + c->context_id + " do not match the outcome space");
  }

  EmpiricalAnalysis out;
  out.space = space;
  out.counts_S = counts_S;
  out.counts_S1 = counts_S1;
  out.counts_S2 = counts_S2;
  out.tol = tol;
  out.splitting = estimate_splitting(counts_S1, counts_S2, counts_S);

  ContextualModel model;
  model.space = space;
  model.dist_S = empirical_distribution(counts_S);
  model.dist_S1 = empirical_distribution(counts_S1);
  model.dist_S2 = empirical_distribution(counts_S2);
  const double n1 = static_cast<double>(counts_S1.detected());
  const double n2 = static_cast<double>(counts_S2.detected());
  model.coeffs = {n1 / (n1 + n2), n2 / (n1 + n2)};
  out.model_coeffs = model.coeffs;

  const auto decomposition = decompose(model, tol);
  const double nS = static_cast<double>(counts_S.detected());
  const double c1 = model.coeffs.c1;
  const double c2 = model.coeffs.c2;

  out.bins.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    EmpiricalBin bin;
    bin.p_S = model.dist_S.probs[i];
    bin.p_1 = model.dist_S1.probs[i];
    bin.p_2 = model.dist_S2.probs[i];
    bin.se_S = safe_sqrt_ratio(bin.p_S, nS);
    bin.se_1 = safe_sqrt_ratio(bin.p_1, n1);
    bin.se_2 = safe_sqrt_ratio(bin.p_2, n2);
    bin.decomposition = decomposition.bins[i];
    const double var_S = bin.se_S * bin.se_S;
    const double var_1 = bin.se_1 * bin.se_1;
    const double var_2 = bin.se_2 * bin.se_2;
    bin.se_delta = std::sqrt(var_S + c1 * c1 * var_1 + c2 * c2 * var_2);
    if (bin.se_delta > 0.0) {
      bin.z_score = std::abs(bin.decomposition.delta) / bin.se_delta;
      if (!out.violation_bin || *bin.z_score > out.violation_statistic) {
        out.violation_statistic = *bin.z_score;
        out.violation_bin = i;
      }
    }
    if (const auto& lambda = bin.decomposition.lambda) {
      // Delta method with independent binomial proportions.
      const double scale = bin.decomposition.interference_scale;
      const double d_S = 1.0 / scale;
      const double d_1 = c1 / scale + *lambda / (2.0 * bin.p_1);
      const double d_2 = c2 / scale + *lambda / (2.0 * bin.p_2);
      const double se_lambda = std::sqrt(d_S * d_S * var_S + d_1 * d_1 * var_1 + d_2 * d_2 * var_2);
      bin.se_lambda = se_lambda;
      bin.theta = kind_theta(*bin.decomposition.kind);
      if (std::holds_alternative<Trigonometric>(*bin.decomposition.kind)) {
        bin.se_theta = se_lambda / std::sqrt(1.0 - *lambda * *lambda);
      } else if (const auto* h = std::get_if<Hyperbolic>(&*bin.decomposition.kind)) {
        bin.se_theta = se_lambda / std::sinh(h->theta);
      }
    }
    out.bins.push_back(std::move(bin));
  }
  return out;
}

ExperimentReport run_experiment(const TwoSlitScenario& scenario, double tol, const SimulationOptions& options) {
  if (auto errors = scenario.validate(); !errors.empty())
    throw InvariantError("invalid two-slit scenario: " + errors.front());

  constexpr std::array contexts{Context::S, Context::S1, Context::S2};
  const std::size_t tasks = contexts.size() * scenario.runs;
  std::vector<EnsembleCounts> results(tasks);
  auto work = [&](std::size_t t) {
    results[t] = simulate_context(scenario, contexts[t % contexts.size()],
                                  static_cast<std::uint32_t>(t / contexts.size()), options);
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks));
  if (threads <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) work(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < tasks; t = next++) work(t);
      });
    }
  }

  ExperimentReport report;
  std::array<EnsembleCounts, 3> pooled;
  for (std::size_t c = 0; c < contexts.size(); ++c) {
    pooled[c].context_id = std::string(context_label(contexts[c]));
    pooled[c].counts.assign(scenario.grid.bins, 0);
  }
  report.runs.resize(scenario.runs);
  for (std::size_t t = 0; t < tasks; ++t) {
    const std::size_t c = t % contexts.size();
    const auto& r = results[t];
    for (std::size_t i = 0; i < r.counts.size(); ++i) pooled[c].counts[i] += r.counts[i];
    pooled[c].total_emitted += r.total_emitted;
    auto& totals = report.runs[t / contexts.size()];
    (c == 0 ? totals.detected_S : c == 1 ? totals.detected_S1 : totals.detected_S2) = r.detected();
  }

  report.pattern_normalization = analytic_pattern(scenario).normalization;
  report.analysis = analyze_counts(scenario.grid.space(), pooled[0], pooled[1], pooled[2], tol);
  return report;
}

AlternativeCheck alternative_condition_check(const EmpiricalAnalysis& analysis, double n_sigma) {
  const std::uint64_t n = analysis.counts_S.detected();
  const std::uint64_t shared = analysis.counts_S1.detected() + analysis.counts_S2.detected();
  if (n == 0) throw ZeroEnsemble("context S detected no particles");
  const double diff = static_cast<double>(shared > n ? shared - n : n - shared);
  AlternativeCheck out;
  out.deviation = diff / std::sqrt(static_cast<double>(n));
  out.pass = out.deviation <= n_sigma;
  return out;
}

AlternativeCheck alternative_condition_check(const ExperimentReport& report, double n_sigma) {
  return alternative_condition_check(report.analysis, n_sigma);
}

PhaseComparison compare_phases(const EmpiricalAnalysis& analysis, const std::vector<double>& theta_true,
                               std::uint64_t min_counts, double n_sigma) {
  if (theta_true.size() != analysis.bins.size())
    throw InvariantError("phase table length differs from the analysis");
  PhaseComparison out;
  for (std::size_t i = 0; i < analysis.bins.size(); ++i) {
    if (analysis.counts_S.counts[i] < min_counts || analysis.counts_S1.counts[i] < min_counts ||
        analysis.counts_S2.counts[i] < min_counts)
      continue;
    const auto& bin = analysis.bins[i];
    ++out.checked;
    if (!bin.decomposition.lambda || !bin.se_lambda) {
      out.failing_bins.push_back(i);
      continue;
    }
    const double expected = std::cos(principal_phase(theta_true[i]));
    if (!(std::abs(*bin.decomposition.lambda - expected) <= n_sigma * *bin.se_lambda))
      out.failing_bins.push_back(i);
  }
  return out;
}

}  // namespace ctxprob
