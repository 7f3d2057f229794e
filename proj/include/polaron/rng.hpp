#pragma once

#include <cstdint>
#include <random>

namespace polaron {

// splitmix64 step; used both as a stand-alone mixer and to derive
// independent substream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic seed for substream `index` of master seed `seed`.
// Distinct (seed, index) pairs give decorrelated streams, so parallel
// workers can be seeded independently of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0x2545f4914f6cdd1dULL * (index + 1));
  splitmix64(s);
  return splitmix64(s);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

}  // namespace polaron
