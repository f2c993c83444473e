#pragma once

#include <cstdint>

namespace spsnav {

// SplitMix64 (Steele, Lea & Flood 2014). Every stochastic choice in the
// library draws from this generator, so results do not depend on the
// platform's <random> distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Independent child stream; the parent advances by one draw.
  SplitMix64 split() { return SplitMix64(next() ^ 0x6a09e667f3bcc909ULL); }

 private:
  std::uint64_t state_;
};

}  // namespace spsnav
