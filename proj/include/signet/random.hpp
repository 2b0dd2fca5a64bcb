#pragma once

#include <cstdint>
#include <cstddef>

#include "signet/matrix.hpp"

namespace signet {

// splitmix64. Update constants (documented so trials reproduce across
// implementations): increment 0x9E3779B97F4A7C15, mix multipliers
// 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB, shifts 30/27/31.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53-bit resolution
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  bool coin() { return (next() & 1ULL) != 0; }

 private:
  std::uint64_t state_;
};

inline Vector random_vector(std::size_t n, SplitMix64& rng, double lo = -1.0,
                            double hi = 1.0) {
  Vector v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace signet
