#pragma once

#include <cstdint>

namespace randgame {

// Identifies one reproducible random stream. Child streams are obtained with
// derive_stream(); the pair (base, stream_index) fully determines the output.
struct RandomSeed {
  std::uint64_t base = 0;
  std::uint64_t stream_index = 0;

  friend bool operator==(const RandomSeed&, const RandomSeed&) = default;
};

// Child seed for `index`. Injective in `index` for a fixed parent, and a pure
// function of (parent, index).
RandomSeed derive_stream(RandomSeed seed, std::uint64_t index);

/// Counter-based generator.
///
/// The stream key is fmix64(base) xor fmix64(stream_index + golden), and the
/// k-th 64-bit output is the SplitMix64 finalizer applied to
/// key + (k + 1) * 0x9E3779B97F4A7C15. Uniform doubles take the top 53 bits
/// and are offset by half an ulp so they lie strictly inside (0, 1).
/// Gaussian variates use the Box-Muller transform, consuming two uniforms per
/// pair of outputs.
class StreamRng {
 public:
  explicit StreamRng(RandomSeed seed);

  std::uint64_t next_u64();
  double uniform();
  double gaussian();
  double exponential();
  bool bernoulli(double p);

  // Skips the cached second Box-Muller variate, if any.
  void discard_cached() { has_cached_ = false; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t fmix64(std::uint64_t x);
std::uint64_t splitmix64_mix(std::uint64_t x);

}  // namespace randgame
