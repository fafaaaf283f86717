#include "odpca/random.hpp"

#include <cmath>
#include <numbers>

namespace odpca {

namespace {

// 53 random bits mapped to the open interval (0, 1).
double to_open_unit(std::uint64_t x) noexcept {
  return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t SeededStream::bits(std::uint64_t counter, std::uint64_t lane) const {
  const std::uint64_t key = mix64(seed_ ^ 0xd1b54a32d192ed03ULL);
  return mix64(key ^ mix64(counter * 4 + lane));
}

double SeededStream::next_uniform() { return to_open_unit(bits(counter_++)); }

double SeededStream::next_gaussian() {
  // Box-Muller on two lanes of the same draw; cosine branch only.
  const std::uint64_t c = counter_++;
  const double u1 = to_open_unit(bits(c, 0));
  const double u2 = to_open_unit(bits(c, 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double SeededStream::next_signed_half_normal() {
  const std::uint64_t c = counter_++;
  const double u1 = to_open_unit(bits(c, 0));
  const double u2 = to_open_unit(bits(c, 1));
  const double magnitude = std::abs(std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2));
  const bool negative = (bits(c, 2) & 1ULL) != 0;
  return negative ? -magnitude : magnitude;
}

std::uint64_t SeededStream::next_below(std::uint64_t bound) {
  const std::uint64_t x = bits(counter_++);
  // Lemire's multiply-shift; the bias is below 2^-64 * bound.
  __extension__ using u128 = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<u128>(x) * bound) >> 64);
}

}  // namespace odpca
