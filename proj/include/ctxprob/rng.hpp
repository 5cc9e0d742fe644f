#pragma once

// Keyed random streams. Each (seed, context, run) triple maps to its own
// mt19937_64 state through a SplitMix64 hash, so streams can be generated in
// any order or on any thread without changing the draws.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ctxprob {

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t context, std::uint64_t run) noexcept;

class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t context, std::uint64_t run)
      : engine_(stream_key(seed, context, run)) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Inverse-CDF sampler over a finite distribution. Zero-probability bins are
/// never returned.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::span<const double> probs);

  std::size_t operator()(double u) const noexcept;
  std::size_t size() const noexcept { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
  std::size_t last_positive_ = 0;
};

}  // namespace ctxprob
