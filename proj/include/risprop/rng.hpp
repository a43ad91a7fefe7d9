#pragma once

#include <cstdint>
#include <random>

namespace risprop {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; decorrelates nearby seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for an independent stream identified by (seed, stream, index).
/// Every trial / run gets its own generator so results do not depend on
/// scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index,
                                    std::uint64_t stream = 0) noexcept {
  return mix64(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL)) + index);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t index = 0,
                    std::uint64_t stream = 0) {
  return Rng(derive_seed(seed, index, stream));
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace risprop
