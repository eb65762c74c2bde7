#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "static_maps/hash_core.hpp"

namespace static_maps {

/// 64-bit xorshift with the (13, 7, 17) triple. Used only for seed search, so
/// the sequence must be identical on every platform for a given seed.
class xorshift64 {
 public:
  using result_type = std::uint64_t;

  /// Substituted whenever a seed would otherwise be zero, the fixed point.
  static constexpr std::uint64_t zero_seed_fallback = 0x9e3779b97f4a7c15ULL;

  constexpr explicit xorshift64(std::uint64_t seed) noexcept : state_(seed ? seed : zero_seed_fallback) {}

  static constexpr result_type min() noexcept { return 1; }
  static constexpr result_type max() noexcept { return ~std::uint64_t{0}; }

  static constexpr std::uint64_t step(std::uint64_t x) noexcept {
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    return x;
  }

  constexpr result_type operator()() noexcept {
    state_ = step(state_);
    return state_;
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

  friend constexpr bool operator==(const xorshift64&, const xorshift64&) = default;

 private:
  std::uint64_t state_;
};

/// Seed derived from build-timestamp strings in the __DATE__ / __TIME__
/// formats. The strings are hashed as-is, never parsed.
constexpr std::uint64_t seed_from_timestamp(std::string_view date, std::string_view time) noexcept {
  const std::uint64_t h = fnv1a_append(raw_hash(date), time);
  return h ? h : xorshift64::zero_seed_fallback;
}

/// Seed for this translation unit's build time.
constexpr std::uint64_t build_timestamp_seed() noexcept { return seed_from_timestamp(__DATE__, __TIME__); }

}  // namespace static_maps
