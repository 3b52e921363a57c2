#pragma once

#include <cstdint>
#include <random>

namespace lxe {

using Rng = std::mt19937_64;

/// Independent random streams. Each purpose draws from its own generator so
/// that switching one source of randomness on or off leaves the others intact.
enum class Stream : std::uint64_t {
  Structure = 0x51,
  NoisePlacement = 0x52,
  NoiseBranch = 0x53,
  Outcomes = 0x54,
  Gates = 0x55,
  Scrambler = 0x56,
  Bonds = 0x57,
  Bootstrap = 0x58,
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s = h ^ (tag * 0xD1B54A32D192ED03ULL);
  h = splitmix64(s);
  s = h ^ (index * 0x8CB92BA72F3D8DD7ULL);
  return splitmix64(s);
}

inline Rng make_stream(std::uint64_t seed, Stream tag, std::uint64_t index = 0) {
  return Rng(derive_seed(seed, static_cast<std::uint64_t>(tag), index));
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double u01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng& rng, double p) { return u01(rng) < p; }

/// Unbiased integer in [0, n).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = std::uint64_t(0) - (std::uint64_t(0) - n) % n;  // largest multiple of n, mod 2^64
  for (;;) {
    const std::uint64_t r = rng();
    if (limit == 0 || r < limit) return r % n;
  }
}

}  // namespace lxe
