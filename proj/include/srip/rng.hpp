#pragma once

#include <cstdint>

namespace srip {

/// SplitMix64 (Steele, Lea, Flood 2014): a counter-based generator whose state
/// advances by the golden-ratio increment 0x9E3779B97F4A7C15 and is finalized
/// by the mixer below. Streams for independent trials are opened with
/// SplitMix64(seed + trial_index), which keeps trials order-independent.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const std::uint64_t limit = max() - max() % bound;
    for (;;) {
      const std::uint64_t x = (*this)();
      if (x < limit) return x % bound;
    }
  }

  /// Standard normal via Box-Muller.
  double normal() noexcept;

 private:
  std::uint64_t state_;
};

}  // namespace srip
