#pragma once

#include <cstdint>
#include <random>

namespace kd {

// Stable 64-bit mix (splitmix64 finalizer); used for child-seed derivation.
std::uint64_t mix64(std::uint64_t x);

// Deterministic random source. All randomness in the system flows from one
// of these, seeded from RunConfig::seed; per-purpose streams use child() so
// that stream contents do not depend on consumption order elsewhere. The
// uniform mapping uses the top 53 bits of std::mt19937_64 output, so draw
// sequences are stable across platforms and restarts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  // Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n);

  // Standard normal via Box-Muller; caches the spare draw.
  double normal();

  // Child source derived from (seed, index); equal pairs give equal streams.
  Rng child(std::uint64_t index) const {
    return Rng(mix64(seed_ ^ mix64(index + 0x9e3779b97f4a7c15ull)));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Factory mirroring the public contract: equal seeds, equal streams.
inline Rng seeded_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace kd
