#include "ctxprob/rng.hpp"

#include <algorithm>

#include "ctxprob/errors.hpp"

namespace ctxprob {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t context, std::uint64_t run) noexcept {
  std::uint64_t state = seed;
  std::uint64_t key = splitmix64(state);
  state = key ^ (context + 0x632be59bd9b4e019ULL);
  key = splitmix64(state);
  state = key ^ (run + 0x85157af5ULL);
  return splitmix64(state);
}

DiscreteSampler::DiscreteSampler(std::span<const double> probs) {
  if (probs.empty()) throw InvariantError("cannot sample from an empty distribution");
  cdf_.reserve(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0)) throw InvariantError("negative probability in sampler");
    acc += probs[i];
    cdf_.push_back(acc);
    if (probs[i] > 0.0) last_positive_ = i;
  }
  if (!(acc > 0.0)) throw InvariantError("sampler distribution has no mass");
  for (auto& c : cdf_) c /= acc;
}

std::size_t DiscreteSampler::operator()(double u) const noexcept {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto idx = static_cast<std::size_t>(it - cdf_.begin());
  // Rounding can leave cdf.back() a hair below 1.
  return std::min(idx, last_positive_);
}

}  // namespace ctxprob
