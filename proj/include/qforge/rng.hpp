#pragma once

#include <cstdint>

namespace qforge {

/// One SplitMix64 output step for state `x` (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Per-sample seed: splitmix64(master XOR index).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ index);
}

/// SplitMix64 stream. Every derived quantity below is defined bit-for-bit
/// so other implementations can reproduce the same draws:
///   next():        state += 0x9E3779B97F4A7C15, output = mix(state)
///   uniform01():   (next() >> 11) * 2^-53, in [0, 1)
///   uniform_int(): rejection sampling on next() % span
///   normal():      Box-Muller, u1 = 1 - uniform01(), u2 = uniform01(),
///                  returns r*cos(2 pi u2) then caches r*sin(2 pi u2)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    const std::uint64_t out = splitmix64(state_);
    state_ += 0x9E3779B97F4A7C15ULL;
    return out;
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Inclusive bounds; requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  double normal();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qforge
