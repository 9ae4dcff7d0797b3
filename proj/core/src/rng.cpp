#include "regspec/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace regspec {

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
  return mix64(h ^ (mix64(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

std::uint64_t hash_double(double x) noexcept {
  if (x == 0.0) x = 0.0;  // fold -0.0
  return mix64(std::bit_cast<std::uint64_t>(x));
}

double CounterRng::normal() noexcept {
  const double u1 = uniform_open_low();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace regspec
