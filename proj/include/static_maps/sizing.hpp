#pragma once

// Closed-form sizing for the two-level table.
//
// With r_primary >= delta * n, a random primary seed gives E[C] <= n / (2 delta)
// pairwise collisions, so by Markov a seed with C < tau * n / (2 delta) turns up
// with probability >= 1 - 1/tau per trial. Since sum n_j^2 = n + 2C, the same
// acceptance bound caps the total quadratic secondary space at n + tau * n / delta.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <stdexcept>
#include <string>
#include <vector>

#include "static_maps/errors.hpp"
#include "static_maps/hash_core.hpp"
#include "static_maps/prng.hpp"

namespace static_maps {

inline constexpr double default_delta = 1.0;
inline constexpr double default_tau = 1.5;
inline constexpr std::size_t default_max_secondary_trials = 64;

/// Per-primary-index key counts n_j.
using bucket_sizes = std::vector<std::size_t>;

namespace detail {

inline void check_params(double delta, double tau) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(tau > 1.0)) throw std::invalid_argument("tau must be greater than 1, got " + std::to_string(tau));
}

}  // namespace detail

inline double collision_threshold(std::size_t n, double delta, double tau) {
  detail::check_params(delta, tau);
  return tau * static_cast<double>(n) / (2.0 * delta);
}

/// Mean number of primary seeds drawn before one meets the threshold.
inline double expected_trials(double tau) {
  if (!(tau > 1.0)) throw std::invalid_argument("tau must be greater than 1, got " + std::to_string(tau));
  return 1.0 / (1.0 - 1.0 / tau);
}

/// C = sum over buckets of n_j choose 2.
inline std::uint64_t count_collisions(std::span<const std::size_t> counts) noexcept {
  std::uint64_t c = 0;
  for (std::size_t nj : counts) c += std::uint64_t{nj} * (nj ? nj - 1 : 0) / 2;
  return c;
}

/// Upper bound on sum n_j^2 for any accepted primary seed.
///
/// Unlike the other bounds this one accepts tau == 1, where it is still the
/// tight limit for C < n / (2 delta).
inline std::uint64_t secondary_total_size_bound(std::size_t n, double delta, double tau) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(tau >= 1.0)) throw std::invalid_argument("tau must be at least 1");
  const double nd = static_cast<double>(n);
  return static_cast<std::uint64_t>(std::ceil(nd + tau * nd / delta));
}

/// Smallest power of two >= delta * n.
inline std::uint64_t primary_table_size(std::size_t n, double delta) {
  if (n == 0) throw std::invalid_argument("primary table needs at least one key");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const double want = std::ceil(delta * static_cast<double>(n));
  if (want >= 0x1p63) throw std::invalid_argument("primary table size overflows 64 bits");
  return std::bit_ceil(std::max<std::uint64_t>(1, static_cast<std::uint64_t>(want)));
}

/// Width used when no hash-based inference runs: smallest w with 2^w > 4n.
inline index_width index_width_for_count(std::size_t n) noexcept {
  for (index_width w : {index_width::w8, index_width::w16, index_width::w32}) {
    if (n < (std::uint64_t{1} << (bits(w) - 2))) return w;
  }
  return index_width::w64;
}

inline std::size_t max_primary_trials_for(double tau) {
  return static_cast<std::size_t>(std::ceil(32.0 * expected_trials(tau)));
}

/// Everything needed to run construction for one keyset.
struct table_config {
  std::size_t n = 0;
  double delta = default_delta;
  double tau = default_tau;
  std::uint64_t r_primary = 0;
  double collision_threshold = 0;
  std::uint64_t r_secondary_total = 0;
  index_width width = index_width::w64;
  static_maps::salt salt{};
  std::size_t max_primary_trials = 0;
  std::size_t max_secondary_trials = default_max_secondary_trials;

  friend bool operator==(const table_config&, const table_config&) = default;
};

inline table_config make_table_config(std::size_t n, double delta, double tau, index_width width,
                                      static_maps::salt s = {}) {
  detail::check_params(delta, tau);
  table_config cfg;
  cfg.n = n;
  cfg.delta = delta;
  cfg.tau = tau;
  cfg.r_primary = primary_table_size(n, delta);
  cfg.collision_threshold = collision_threshold(n, delta, tau);
  cfg.r_secondary_total = secondary_total_size_bound(n, delta, tau);
  cfg.width = width;
  cfg.salt = s;
  cfg.max_primary_trials = max_primary_trials_for(tau);
  return cfg;
}

// ---------------------------------------------------------------------------
// Index width and salt inference

/// Indices (into the input) of two hashes that are indistinguishable after
/// salting and truncation.
using hash_pair = std::pair<std::size_t, std::size_t>;

namespace detail {

inline std::vector<std::pair<std::uint64_t, std::size_t>> sorted_truncations(std::span<const std::uint64_t> raw,
                                                                             index_width w, salt s) {
  std::vector<std::pair<std::uint64_t, std::size_t>> t;
  t.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) t.emplace_back(truncate_hash(apply_salt(raw[i], s), w), i);
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace detail

inline std::optional<hash_pair> find_truncation_collision(std::span<const std::uint64_t> raw, index_width w,
                                                          salt s = {}) {
  const auto t = detail::sorted_truncations(raw, w, s);
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i].first == t[i - 1].first) return hash_pair{t[i - 1].second, t[i].second};
  }
  return std::nullopt;
}

/// Two truncated hashes exactly P apart are congruent mod P, so every seed
/// maps them to the same slot. Only values below the deficit have a partner
/// that fits in w bits.
inline std::optional<hash_pair> find_prime_gap(std::span<const std::uint64_t> raw, index_width w, salt s = {}) {
  const auto prime = largest_prime_below(w);
  const auto t = detail::sorted_truncations(raw, w, s);
  for (const auto& [v, idx] : t) {
    if (v >= prime.deficit) break;
    const std::uint64_t partner = v + prime.value;
    auto it = std::lower_bound(t.begin(), t.end(), std::pair{partner, std::size_t{0}});
    if (it != t.end() && it->first == partner) return hash_pair{idx, it->second};
  }
  return std::nullopt;
}

inline constexpr std::size_t default_max_salt_trials = 64;

struct width_choice {
  index_width width;
  static_maps::salt salt;
};

/// Checks a single width: no truncation collision, and a salt (drawn from rng
/// when needed) that leaves no pair exactly P apart.
inline std::optional<static_maps::salt> salt_for_width(std::span<const std::uint64_t> raw, index_width w,
                                                        xorshift64& rng,
                                                        std::size_t max_salt_trials = default_max_salt_trials) {
  if (find_truncation_collision(raw, w)) return std::nullopt;
  if (!find_prime_gap(raw, w)) return static_maps::salt{};
  for (std::size_t trial = 0; trial < max_salt_trials; ++trial) {
    const static_maps::salt s{true, rng()};
    if (!find_prime_gap(raw, w, s)) return s;
  }
  return std::nullopt;
}

/// Smallest width whose truncations are pairwise distinct, with salt enabled
/// when some pair differs by exactly the width's prime.
inline width_choice infer_index_width(std::span<const std::uint64_t> raw, xorshift64& rng,
                                      std::size_t max_salt_trials = default_max_salt_trials) {
  if (auto dup = find_truncation_collision(raw, index_width::w64)) {
    throw build_error(build_errc::duplicate_key, "raw hashes of keys " + std::to_string(dup->first) + " and " +
                                                     std::to_string(dup->second) + " are identical",
                      *dup);
  }
  for (index_width w : {index_width::w8, index_width::w16, index_width::w32, index_width::w64}) {
    if (auto s = salt_for_width(raw, w, rng, max_salt_trials)) return {w, *s};
  }
  throw build_error(build_errc::raw_hash_collision, "no index width admits a collision-free truncation");
}

}  // namespace static_maps
