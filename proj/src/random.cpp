#include "avtrack/random.hpp"

#include <cmath>
#include <numbers>

namespace avtrack {

double hash_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  const double u1 = hash_uniform(seed, a, b, c * 2 + 1);
  const double u2 = hash_uniform(seed, a, b, c * 2 + 2);
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace avtrack
