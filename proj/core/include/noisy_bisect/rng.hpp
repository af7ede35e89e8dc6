#pragma once

#include <cstdint>

namespace noisy_bisect {

// Counter-based pseudo-random stream built on the splitmix64 mixer.
// stream_value(seed, i) is a pure function of (seed, i), so any draw can be
// reproduced without replaying the draws before it.  That property is what
// makes trial-level seeding in the harness order-independent: trial t always
// sees the same oracle randomness no matter which trials ran before it.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t stream_value(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

// Uniform double in [0, 1) with 53 bits of mantissa.
inline double uniform01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Stateful view over a counter stream: next() walks the indices in order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next() { return stream_value(seed_, index_++); }
  double next_uniform() { return uniform01(next()); }

  // Uniform integer in [lo, hi] by rejection (no modulo bias).
  std::uint64_t next_in_range(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return next();  // full 64-bit range
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span + 1) % span;
    std::uint64_t v = next();
    while (v > limit) v = next();
    return lo + v % span;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t index() const { return index_; }

 private:
  std::uint64_t seed_;
  std::uint64_t index_ = 0;
};

}  // namespace noisy_bisect
