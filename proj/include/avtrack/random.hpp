#pragma once

#include <cstdint>
#include <random>

namespace avtrack {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream for (seed, purpose, id). Keeps draws for one purpose
/// unaffected by how many draws another purpose consumed.
inline Rng derived_rng(std::uint64_t seed, std::uint64_t purpose, std::uint64_t id = 0) {
  return Rng(splitmix64(splitmix64(seed ^ splitmix64(purpose)) + id));
}

}  // namespace avtrack

namespace avtrack {

/// Counter-based uniform in [0, 1): a pure function of its arguments.
inline double hash_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                           std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Counter-based standard normal (Box-Muller over two hashed uniforms).
double hash_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

}  // namespace avtrack
