#include "randgame/rng.hpp"

#include <cmath>
#include <numbers>

namespace randgame {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// MurmurHash3 finalizer.
std::uint64_t fmix64(std::uint64_t k) {
  k ^= k >> 33;
  k *= 0xFF51AFD7ED558CCDULL;
  k ^= k >> 33;
  k *= 0xC4CEB9FE1A85EC53ULL;
  k ^= k >> 33;
  return k;
}

RandomSeed derive_stream(RandomSeed seed, std::uint64_t index) {
  // fixed offset per parent plus index: injective in index
  const std::uint64_t offset = fmix64(seed.stream_index ^ 0xD1B54A32D192ED03ULL);
  return {seed.base, offset + index};
}

StreamRng::StreamRng(RandomSeed seed)
    : key_(fmix64(seed.base) ^ fmix64(seed.stream_index + kGolden)) {}

std::uint64_t StreamRng::next_u64() {
  ++counter_;
  return splitmix64_mix(key_ + counter_ * kGolden);
}

double StreamRng::uniform() {
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(next_u64() >> 11) + 0.5) * kScale;
}

double StreamRng::gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

double StreamRng::exponential() { return -std::log(uniform()); }

bool StreamRng::bernoulli(double p) { return uniform() < p; }

}  // namespace randgame
