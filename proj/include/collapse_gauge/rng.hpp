#pragma once

#include <cstdint>
#include <random>

namespace collapse_gauge {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent generator for sub-stream `stream` of a run seeded with `seed`.
///
/// Stream derivation: the engine is seeded with
///   splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019)).
/// Every sample loop in the library assigns a fixed stream to each block of
/// work (never to a thread), so results do not depend on how blocks are
/// scheduled.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace collapse_gauge
