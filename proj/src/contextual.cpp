#include "ctxprob/contextual.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "ctxprob/errors.hpp"

namespace ctxprob {

std::uint64_t EnsembleCounts::detected() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::string Violation::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << invariant;
  if (!context.empty()) os << " [context " << context << "]";
  if (bin) os << " [bin " << *bin << "]";
  os << ": value " << value;
  return os.str();
}

std::vector<Violation> validate_distribution(const ContextualDistribution& dist, std::size_t bins) {
  std::vector<Violation> out;
  if (dist.probs.size() != bins) {
    out.push_back({"distribution defined over the model's outcome space", dist.context_id,
                   static_cast<double>(dist.probs.size()), std::nullopt});
    return out;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    const double p = dist.probs[i];
    if (!(p >= 0.0 && p <= 1.0)) out.push_back({"probability in range [0,1]", dist.context_id, p, i});
    total += p;
  }
  // The sum is only meaningful once every entry is a probability.
  if (out.empty() && !(std::abs(total - 1.0) <= kNormalizationTol))
    out.push_back({"probabilities sum to 1 within 1e-9", dist.context_id, total, std::nullopt});
  return out;
}

std::vector<Violation> validate_model(const ContextualModel& model) {
  std::vector<Violation> out;
  const auto& labels = model.space.labels;
  if (labels.empty()) out.push_back({"outcome space has at least one bin", "", 0.0, std::nullopt});
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!seen.insert(labels[i]).second) out.push_back({"outcome labels are unique", "", 0.0, i});
  }
  for (const auto* dist : {&model.dist_S, &model.dist_S1, &model.dist_S2}) {
    auto v = validate_distribution(*dist, labels.size());
    out.insert(out.end(), v.begin(), v.end());
  }
  const auto& c = model.coeffs;
  if (!(c.c1 >= 0.0)) out.push_back({"splitting coefficient c1 >= 0", "", c.c1, std::nullopt});
  if (!(c.c2 >= 0.0)) out.push_back({"splitting coefficient c2 >= 0", "", c.c2, std::nullopt});
  if (!(std::abs(c.sum() - 1.0) <= kAlternativeTol))
    out.push_back({"statistical alternative condition c1 + c2 = 1", "", c.sum(), std::nullopt});
  return out;
}

SplittingEstimate estimate_splitting(const EnsembleCounts& counts_S1, const EnsembleCounts& counts_S2,
                                     const EnsembleCounts& counts_S) {
  const std::uint64_t n = counts_S.detected();
  if (n == 0) throw ZeroEnsemble("context " + counts_S.context_id + " detected no particles");
  const double total = static_cast<double>(n);
  SplittingEstimate est;
  est.coeffs.c1 = static_cast<double>(counts_S1.detected()) / total;
  est.coeffs.c2 = static_cast<double>(counts_S2.detected()) / total;
  // Integer arithmetic so the deviation is exactly 0 when N1 + N2 = N.
  const std::uint64_t shared = counts_S1.detected() + counts_S2.detected();
  const std::uint64_t diff = shared > n ? shared - n : n - shared;
  est.deviation = static_cast<double>(diff) / total;
  return est;
}

ContextualDistribution empirical_distribution(const EnsembleCounts& counts) {
  const std::uint64_t n = counts.detected();
  if (n == 0) throw ZeroEnsemble("context " + counts.context_id + " detected no particles");
  ContextualDistribution dist{counts.context_id, {}};
  dist.probs.reserve(counts.counts.size());
  const double total = static_cast<double>(n);
  for (auto c : counts.counts) dist.probs.push_back(static_cast<double>(c) / total);
  return dist;
}

}  // namespace ctxprob
