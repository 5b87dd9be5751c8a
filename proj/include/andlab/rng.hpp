#pragma once

#include <cmath>
#include <cstdint>

// Counter-based random numbers.  Every draw is a pure function of
// (seed, realization, site, lane), so results do not depend on how work is
// scheduled across threads and any single draw can be reproduced in isolation.

namespace andlab::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer.  Full-avalanche, so nearby counter values map to
// statistically independent outputs.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Chains the finalizer over the four counters.  Each stage absorbs one
// counter; the golden-ratio offset keeps the all-zero input away from the
// mixer's fixed point at 0.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t realization,
                            std::uint64_t site, std::uint64_t lane = 0) {
  std::uint64_t z = mix64(seed + kGolden);
  z = mix64(z ^ (realization + kGolden));
  z = mix64(z ^ (site + kGolden));
  z = mix64(z ^ (lane + kGolden));
  return z;
}

// Uniform double in [0, 1), using the top 53 bits.
inline double uniform01(std::uint64_t seed, std::uint64_t realization,
                        std::uint64_t site, std::uint64_t lane = 0) {
  return static_cast<double>(derive(seed, realization, site, lane) >> 11) *
         0x1.0p-53;
}

// Standard normal via Box-Muller.  Consumes lanes 2*lane and 2*lane+1.
inline double gaussian(std::uint64_t seed, std::uint64_t realization,
                       std::uint64_t site, std::uint64_t lane = 0) {
  double u1 = uniform01(seed, realization, site, 2 * lane);
  double u2 = uniform01(seed, realization, site, 2 * lane + 1);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace andlab::rng
