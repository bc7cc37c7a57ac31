#pragma once

#include <cstdint>
#include <random>

namespace uniscale {

// Finalizer step of splitmix64; bijective, good avalanche.
// https://prng.di.unimi.it/splitmix64.c
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// mt19937_64 wrapper with two guarantees the std facilities don't give:
//  - substream(seed, i) is a pure function of (seed, i), so work split into
//    fixed blocks reproduces bit-identically for any worker count;
//  - uniform01() maps engine output to [0,1) the same way on every platform
//    (std::uniform_real_distribution is implementation-defined).
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : eng_(mix64(seed)) {}

  static RandomStream substream(std::uint64_t seed, std::uint64_t stream) {
    return RandomStream(mix64(seed) ^ mix64(stream * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL));
  }

  std::uint64_t next_u64() { return eng_(); }

  // 53-bit mantissa draw in [0, 1).
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
  std::mt19937_64 eng_;
};

}  // namespace uniscale
