#pragma once

#include <cstdint>
#include <random>

namespace mcrowds {

// std::uniform_real_distribution is implementation-defined, so we draw the
// 53 mantissa bits ourselves to keep sampled layouts identical across
// standard libraries.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

/// Independent stream seed for a (base seed, stream tag) pair (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace streams {
inline constexpr std::uint64_t kMarkers = 1;
inline constexpr std::uint64_t kSpawns = 2;
}  // namespace streams

}  // namespace mcrowds
