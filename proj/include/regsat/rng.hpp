#pragma once

#include <cstdint>
#include <random>

namespace regsat {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer: a bijective 64-bit avalanche mix.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of replicate `index` under `master_seed`. Depends only on the pair,
/// never on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  return mix64(master_seed ^ mix64(index));
}

inline Rng make_stream(std::uint64_t master_seed, std::uint64_t index) {
  return Rng(derive_seed(master_seed, index));
}

}  // namespace regsat
