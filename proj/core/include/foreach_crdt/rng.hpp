#pragma once

#include <cstdint>
#include <random>

namespace foreach_crdt {

// Deterministic across standard libraries, unlike std::uniform_int_distribution.
using Rng = std::mt19937_64;

inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) { return n == 0 ? 0 : rng() % n; }

inline bool chance(Rng& rng, std::uint64_t numerator, std::uint64_t denominator) {
  return uniform_below(rng, denominator) < numerator;
}

// Mixes a base seed with a stream index so derived streams do not overlap.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace foreach_crdt
