#pragma once

#include <cstdint>

namespace pfm::rng {

// splitmix64 finalizer. Bijective on 64-bit words.
inline constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Counter-addressable stream: value k of the stream with the given seed.
// Each (seed, counter) pair maps to one fixed 64-bit word, so consumers
// may be evaluated in any order (or in parallel) without changing results.
inline constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t counter) noexcept {
  return mix(seed + (counter + 1) * kGolden);
}

// Uniform double in [0, 1) from the 53 high bits.
inline constexpr double uniform01(std::uint64_t seed, std::uint64_t counter) noexcept {
  return static_cast<double>(at(seed, counter) >> 11) * 0x1.0p-53;
}

// Stable seed for the index-th child stream (replicates, restarts, ...).
inline constexpr std::uint64_t derive(std::uint64_t master, std::uint64_t index) noexcept {
  return at(master ^ 0xD1B54A32D192ED03ull, index);
}

// Sequential convenience wrapper over the counter stream.
class Sequence {
 public:
  explicit Sequence(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() { return at(seed_, counter_++); }
  double next_uniform() { return uniform01(seed_, counter_++); }
  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_uniform(); }
  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % bound;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace pfm::rng
