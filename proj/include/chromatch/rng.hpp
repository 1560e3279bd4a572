#pragma once

#include <cstdint>
#include <stdexcept>

namespace chromatch {

// 64-bit finalizer used for seed derivation (splitmix64 mixing function).
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Derives an independent stream seed from (base, index). Used everywhere a
// run fans out into per-trial or per-restart streams, so results do not
// depend on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return mix64(base + 0x9E3779B97F4A7C15ULL * (index + 1));
}

/// Seedable, splittable 64-bit generator (splitmix64). All randomized code
/// in the library draws from this engine only, never from std distributions,
/// so every result is bit-reproducible across platforms given the seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  // Unbiased draw from [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Derived independent stream. Does not disturb this generator's state.
  Rng split(std::uint64_t salt) const { return Rng(derive_seed(state_, salt)); }

 private:
  std::uint64_t state_;
};

}  // namespace chromatch
