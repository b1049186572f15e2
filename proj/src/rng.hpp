#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace satcs {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Sub-stream ids. Each (seed, trial, stream) triple seeds an independent
// engine, so e.g. changing the noise level never perturbs the matrix draw.
enum class Stream : std::uint64_t {
  kSignal = 1,
  kMatrix = 2,
  kNoise = 3,
  kFolds = 4,
  kLambda = 5,
};

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t trial,
                                   Stream stream) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ (0xbf58476d1ce4e5b9ULL * (trial + 1)));
  s = splitmix64(s ^ (0x94d049bb133111ebULL *
                      (static_cast<std::uint64_t>(stream) + 1)));
  return std::mt19937_64{s};
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) by rejection; avoids the modulo bias and the
// implementation-defined layout of std::uniform_int_distribution.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

// Box-Muller, one deviate per call. Hand-rolled so seeded runs reproduce
// across standard libraries.
inline double standard_normal(std::mt19937_64& rng) {
  const double two_pi = 6.283185307179586476925287;
  double u1 = 1.0 - uniform01(rng);  // (0, 1]
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace satcs
