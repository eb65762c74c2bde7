#pragma once

// Two-level perfect hash construction.
//
//  1. Truncate the salted raw hashes to the index width.
//  2. Draw primary seeds until the bucket collision count C falls under
//     tau * n / (2 delta).
//  3. Group hashes by primary bucket; bucket j gets a secondary row of
//     bit_ceil(n_j^2) slots (1 slot for a singleton, none for an empty bucket).
//  4. Draw a secondary seed per multi-key bucket until it is injective on the
//     bucket's hashes.
//
// Only key bytes are consulted. Given the same hashes, config and seed the
// result is bit-for-bit reproducible.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "static_maps/errors.hpp"
#include "static_maps/hash_core.hpp"
#include "static_maps/prng.hpp"
#include "static_maps/sizing.hpp"

namespace static_maps {

/// Position of a key in the ragged secondary table.
struct slot {
  std::size_t row = 0;
  std::size_t column = 0;

  friend constexpr bool operator==(const slot&, const slot&) = default;
  friend constexpr auto operator<=>(const slot&, const slot&) = default;
};

template <index_type SizeT>
struct perfect_hash_params {
  table_config config;
  SizeT k_primary = 0;
  std::vector<SizeT> ks_secondary;      // one per primary index; 0 for rows of size <= 1
  bucket_sizes buckets;                 // n_j
  std::vector<std::size_t> row_sizes;   // secondary row sizes r_j
  std::vector<slot> slot_of_key;        // in input order
  std::size_t primary_trials = 0;
  std::vector<std::size_t> secondary_trials;  // per row; 0 where no search ran

  friend bool operator==(const perfect_hash_params&, const perfect_hash_params&) = default;
};

// ---------------------------------------------------------------------------

/// Draws a seed that is nonzero modulo P (a zero multiplier sends every key
/// to slot 0).
template <index_type SizeT>
SizeT draw_seed(xorshift64& rng) noexcept {
  for (;;) {
    const SizeT k = truncate_hash<SizeT>(rng());
    if (mod_near_max<SizeT>(k) != 0) return k;
  }
}

template <index_type SizeT>
std::vector<SizeT> truncated_hashes(std::span<const std::uint64_t> raw, salt s) {
  std::vector<SizeT> out;
  out.reserve(raw.size());
  for (std::uint64_t h : raw) out.push_back(truncate_hash<SizeT>(apply_salt(h, s)));
  return out;
}

template <index_type SizeT>
bucket_sizes primary_bucket_sizes(std::span<const SizeT> hashes, SizeT k, std::uint64_t r_primary) {
  bucket_sizes counts(static_cast<std::size_t>(r_primary), 0);
  const SizeT mask = SizeT(r_primary - 1);
  for (SizeT h : hashes) ++counts[universal_hash_masked<SizeT>(k, h, mask)];
  return counts;
}

template <index_type SizeT>
struct primary_seed_result {
  SizeT k;
  bucket_sizes buckets;
  std::size_t trials;
};

template <index_type SizeT>
primary_seed_result<SizeT> find_primary_seed(std::span<const SizeT> hashes, const table_config& cfg,
                                             xorshift64& rng) {
  for (std::size_t trial = 1; trial <= cfg.max_primary_trials; ++trial) {
    const SizeT k = draw_seed<SizeT>(rng);
    bucket_sizes counts = primary_bucket_sizes<SizeT>(hashes, k, cfg.r_primary);
    if (static_cast<double>(count_collisions(counts)) < cfg.collision_threshold) {
      return {k, std::move(counts), trial};
    }
  }
  throw build_error(build_errc::seed_search_exhausted,
                    "no primary seed met the collision threshold in " + std::to_string(cfg.max_primary_trials) +
                        " trials (n=" + std::to_string(cfg.n) + ", width=" + std::to_string(bits(cfg.width)) + ")");
}

/// Entry of a primary bucket: index into the input and the truncated hash.
template <index_type SizeT>
struct bucket_entry {
  std::size_t index;
  SizeT hash;
};

template <index_type SizeT>
std::vector<std::vector<bucket_entry<SizeT>>> group_by_primary(std::span<const SizeT> hashes, SizeT k_primary,
                                                               const table_config& cfg) {
  std::vector<std::vector<bucket_entry<SizeT>>> groups(static_cast<std::size_t>(cfg.r_primary));
  const SizeT mask = SizeT(cfg.r_primary - 1);
  for (std::size_t idx = 0; idx < hashes.size(); ++idx) {
    groups[universal_hash_masked<SizeT>(k_primary, hashes[idx], mask)].push_back({idx, hashes[idx]});
  }
  return groups;
}

/// Slots reserved for a bucket of n_j keys.
constexpr std::uint64_t secondary_row_size(std::size_t nj) noexcept {
  if (nj <= 1) return nj;
  return std::bit_ceil(std::uint64_t{nj} * nj);
}

template <index_type SizeT>
struct secondary_seed_result {
  SizeT k;
  std::size_t trials;
};

/// Seed making g_k(., r_j) injective on the bucket. Buckets of at most one
/// key need no search and get the sentinel seed 0.
template <index_type SizeT>
secondary_seed_result<SizeT> find_secondary_seed(std::span<const SizeT> bucket_hashes, std::uint64_t r_j,
                                                 const table_config& cfg, xorshift64& rng) {
  if (bucket_hashes.size() <= 1) return {0, 0};
  const SizeT mask = SizeT(r_j - 1);
  std::vector<std::uint8_t> taken(static_cast<std::size_t>(r_j));
  for (std::size_t trial = 1; trial <= cfg.max_secondary_trials; ++trial) {
    const SizeT k = draw_seed<SizeT>(rng);
    std::fill(taken.begin(), taken.end(), 0);
    bool injective = true;
    for (SizeT h : bucket_hashes) {
      auto& cell = taken[universal_hash_masked<SizeT>(k, h, mask)];
      if (cell) {
        injective = false;
        break;
      }
      cell = 1;
    }
    if (injective) return {k, trial};
  }
  throw build_error(build_errc::seed_search_exhausted,
                    "no secondary seed separated a bucket of " + std::to_string(bucket_hashes.size()) + " keys in " +
                        std::to_string(cfg.max_secondary_trials) + " trials");
}

/// Runs the full pipeline on raw hashes. cfg.width must match SizeT.
template <index_type SizeT>
perfect_hash_params<SizeT> build_perfect_hash(std::span<const std::uint64_t> raw, const table_config& cfg,
                                              xorshift64& rng) {
  if (cfg.width != width_of<SizeT>) throw std::invalid_argument("table_config width does not match index type");
  if (raw.empty()) throw build_error(build_errc::empty_keyset, "cannot hash an empty keyset");
  if (cfg.n != raw.size()) throw std::invalid_argument("table_config built for a different key count");
  if (cfg.r_primary - 1 > std::numeric_limits<SizeT>::max()) {
    throw build_error(build_errc::capacity_exceeded, "primary table of " + std::to_string(cfg.r_primary) +
                                                         " rows needs a wider index type");
  }
  if (auto c = find_truncation_collision(raw, cfg.width, cfg.salt)) {
    throw build_error(build_errc::width_collision, "keys " + std::to_string(c->first) + " and " +
                                                       std::to_string(c->second) + " collide at " +
                                                       std::to_string(bits(cfg.width)) + " bits",
                      *c);
  }
  if (auto c = find_prime_gap(raw, cfg.width, cfg.salt)) {
    throw build_error(build_errc::width_collision, "keys " + std::to_string(c->first) + " and " +
                                                       std::to_string(c->second) + " differ by exactly P at " +
                                                       std::to_string(bits(cfg.width)) + " bits",
                      *c);
  }

  const std::vector<SizeT> hashes = truncated_hashes<SizeT>(raw, cfg.salt);
  perfect_hash_params<SizeT> p;
  p.config = cfg;

  auto primary = find_primary_seed<SizeT>(hashes, cfg, rng);
  p.k_primary = primary.k;
  p.primary_trials = primary.trials;
  p.buckets = std::move(primary.buckets);

  const auto groups = group_by_primary<SizeT>(hashes, p.k_primary, cfg);
  const std::size_t rows = groups.size();
  // Row offsets, the guard row and the empty-slot marker all live in SizeT.
  std::uint64_t total = 1;
  for (const auto& g : groups) total += secondary_row_size(g.size());
  if (total > std::numeric_limits<SizeT>::max() || raw.size() >= std::numeric_limits<SizeT>::max()) {
    throw build_error(build_errc::capacity_exceeded, std::to_string(total) + " secondary slots for " +
                                                         std::to_string(raw.size()) + " keys need a wider index type");
  }
  p.ks_secondary.assign(rows, 0);
  p.row_sizes.resize(rows);
  p.secondary_trials.assign(rows, 0);
  p.slot_of_key.resize(raw.size());

  std::vector<SizeT> bucket_hashes;
  for (std::size_t j = 0; j < rows; ++j) {
    const auto& group = groups[j];
    const std::uint64_t r_j = secondary_row_size(group.size());
    p.row_sizes[j] = static_cast<std::size_t>(r_j);
    if (group.empty()) continue;
    if (group.size() == 1) {
      p.slot_of_key[group.front().index] = {j, 0};
      continue;
    }
    bucket_hashes.clear();
    for (const auto& e : group) bucket_hashes.push_back(e.hash);
    const auto secondary = find_secondary_seed<SizeT>(bucket_hashes, r_j, cfg, rng);
    p.ks_secondary[j] = secondary.k;
    p.secondary_trials[j] = secondary.trials;
    const SizeT mask = SizeT(r_j - 1);
    for (const auto& e : group) p.slot_of_key[e.index] = {j, universal_hash_masked<SizeT>(secondary.k, e.hash, mask)};
  }
  return p;
}

/// Distinguishes duplicate keys from distinct keys with equal raw hashes.
template <class K, class V>
void check_distinct_keys(std::span<const std::pair<K, V>> kv, std::span<const std::uint64_t> raw) {
  // Every pair of equal raw hashes is adjacent once sorted.
  std::vector<std::size_t> order(raw.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const std::size_t a = order[i - 1], b = order[i];
    if (raw[a] != raw[b]) continue;
    if (kv[a].first == kv[b].first) {
      throw build_error(build_errc::duplicate_key,
                        "entries " + std::to_string(std::min(a, b)) + " and " + std::to_string(std::max(a, b)) +
                            " share a key",
                        std::pair{std::min(a, b), std::max(a, b)});
    }
    throw build_error(build_errc::raw_hash_collision,
                      "distinct keys at entries " + std::to_string(std::min(a, b)) + " and " +
                          std::to_string(std::max(a, b)) + " have equal raw hashes",
                      std::pair{std::min(a, b), std::max(a, b)});
  }
}

template <class K, class V>
std::vector<std::uint64_t> raw_hashes_of(std::span<const std::pair<K, V>> kv) {
  std::vector<std::uint64_t> raw;
  raw.reserve(kv.size());
  for (const auto& [k, v] : kv) raw.push_back(hash_key(k));
  return raw;
}

template <index_type SizeT, class K, class V>
perfect_hash_params<SizeT> build_perfect_hash(std::span<const std::pair<K, V>> kv, const table_config& cfg,
                                              xorshift64& rng) {
  const auto raw = raw_hashes_of(kv);
  check_distinct_keys(kv, std::span<const std::uint64_t>(raw));
  return build_perfect_hash<SizeT>(std::span<const std::uint64_t>(raw), cfg, rng);
}

}  // namespace static_maps
