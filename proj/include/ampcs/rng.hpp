#pragma once

#include <cmath>
#include <cstdint>

namespace ampcs {

// SplitMix64 (Steele, Lea & Flood 2014). A std engine would tie the byte-level
// reproducibility contract to the standard library implementation; this one is
// pinned entirely by the code below.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform on [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1]
  double uniform_pos() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  bool coin() { return next() >> 63; }

  // Box-Muller, cosine branch only. Two uniforms per draw keeps the stream
  // layout independent of any cached state.
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925287 * u2);
  }

  // integer in [0, bound), bound > 0; modulo bias is < bound / 2^64
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

// Stable (seed, stream) -> seed mixing so each trial owns an independent
// generator reachable in O(1).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 g(seed ^ (0xA0761D6478BD642FULL * (stream + 1)));
  g.next();
  return g.next();
}

}  // namespace ampcs
