#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace mmt {

/// Portable seedable generator: xoshiro256** (Blackman & Vigna), state
/// expanded from a 64-bit seed with splitmix64. Every derived draw below is
/// defined bit-for-bit here so that streams reproduce on any platform; the
/// standard <random> distributions are implementation-defined and are not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  /// Next raw 64-bit output.
  std::uint64_t next_u64();

  /// Uniform double in [0, 1): top 53 bits of next_u64() scaled by 2^-53.
  double uniform();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);

  /// Uniform integer in [0, bound) by rejection on the top bits; bound > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal via Box-Muller on two uniform() draws (no caching).
  double normal();

  /// Independent child stream: seeds a new generator from next_u64().
  Rng split();

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      const auto j = below(i);
      using std::swap;
      swap(first[i - 1], first[j]);
    }
  }

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace mmt
