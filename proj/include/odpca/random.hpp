#pragma once

#include <cstdint>

namespace odpca {

/// Counter-based random stream. Draw number `c` under `seed` is a pure function
/// of (seed, c), so disjoint counter ranges can be generated independently and
/// in any order with identical results on every platform.
class SeededStream {
 public:
  SeededStream() = default;
  explicit SeededStream(std::uint64_t seed, std::uint64_t counter = 0) : seed_(seed), counter_(counter) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  /// A copy positioned at `counter`.
  SeededStream at(std::uint64_t counter) const { return SeededStream(seed_, counter); }
  void skip(std::uint64_t draws) { counter_ += draws; }

  /// Raw 64 bits for draw `counter`, lane selects an independent word.
  std::uint64_t bits(std::uint64_t counter, std::uint64_t lane = 0) const;

  /// Uniform on (0, 1); advances the counter by one.
  double next_uniform();
  /// Standard normal; advances the counter by one.
  double next_gaussian();
  /// Uniform integer in [0, bound); advances the counter by one.
  std::uint64_t next_below(std::uint64_t bound);
  /// +1 or -1 together with |g| for a standard normal g, from one draw.
  double next_signed_half_normal();

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t counter_ = 0;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministic child seed for replication `index` of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace odpca
