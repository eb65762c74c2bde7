#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "static_maps/construction.hpp"
#include "static_maps/errors.hpp"
#include "static_maps/maps.hpp"
#include "static_maps/prng.hpp"
#include "static_maps/sizing.hpp"

namespace static_maps {

/// Overrides for inferred construction parameters. Anything left empty is
/// inferred; the seed falls back to the build timestamp.
struct build_options {
  std::optional<double> delta = std::nullopt;
  std::optional<double> tau = std::nullopt;
  std::optional<index_width> width = std::nullopt;
  std::optional<static_maps::salt> salt = std::nullopt;
  std::optional<std::uint64_t> seed = std::nullopt;
};

/// Construction output at whichever width the factory settled on.
using any_params = std::variant<perfect_hash_params<std::uint8_t>, perfect_hash_params<std::uint16_t>,
                                perfect_hash_params<std::uint32_t>, perfect_hash_params<std::uint64_t>>;

namespace detail {

inline std::string pair_message(const std::string& what, hash_pair p) {
  return what + " (entries " + std::to_string(p.first) + " and " + std::to_string(p.second) + ")";
}

template <index_type SizeT>
perfect_hash_params<SizeT> build_at_width(std::span<const std::uint64_t> raw, const build_options& opts, salt s,
                                          xorshift64& rng) {
  const table_config cfg = make_table_config(raw.size(), opts.delta.value_or(default_delta),
                                             opts.tau.value_or(default_tau), width_of<SizeT>, s);
  return build_perfect_hash<SizeT>(raw, cfg, rng);
}

inline any_params build_at(index_width w, std::span<const std::uint64_t> raw, const build_options& opts, salt s,
                           xorshift64& rng) {
  switch (w) {
    case index_width::w8: return build_at_width<std::uint8_t>(raw, opts, s, rng);
    case index_width::w16: return build_at_width<std::uint16_t>(raw, opts, s, rng);
    case index_width::w32: return build_at_width<std::uint32_t>(raw, opts, s, rng);
    case index_width::w64: break;
  }
  return build_at_width<std::uint64_t>(raw, opts, s, rng);
}

/// Salt for an explicitly requested width, or a width_collision error naming
/// the offending entries.
inline salt salt_for_forced_width(std::span<const std::uint64_t> raw, index_width w, const build_options& opts,
                                  xorshift64& rng) {
  if (auto c = find_truncation_collision(raw, w)) {
    throw build_error(build_errc::width_collision,
                      pair_message("truncation to " + std::to_string(bits(w)) + " bits collides", *c), *c);
  }
  if (opts.salt) {
    if (auto c = find_prime_gap(raw, w, *opts.salt)) {
      throw build_error(build_errc::width_collision, pair_message("salted hashes differ by exactly P", *c), *c);
    }
    return *opts.salt;
  }
  if (auto s = salt_for_width(raw, w, rng)) return *s;
  throw build_error(build_errc::width_collision, "no salt separates hashes differing by exactly P at " +
                                                     std::to_string(bits(w)) + " bits");
}

}  // namespace detail

/// Infers width and salt from the raw hashes (smallest collision-free width),
/// then builds; a width whose seed search runs out is abandoned for the next
/// wider one. Overrides take precedence and disable the fallback.
inline any_params build_inferred(std::span<const std::uint64_t> raw, const build_options& opts = {}) {
  if (raw.empty()) throw build_error(build_errc::empty_keyset, "hash maps need at least one key");
  xorshift64 rng(opts.seed.value_or(build_timestamp_seed()));

  if (opts.width) {
    const salt s = detail::salt_for_forced_width(raw, *opts.width, opts, rng);
    return detail::build_at(*opts.width, raw, opts, s, rng);
  }

  const width_choice first = infer_index_width(raw, rng);
  std::optional<build_error> last_error;
  for (index_width w : {index_width::w8, index_width::w16, index_width::w32, index_width::w64}) {
    if (bits(w) < bits(first.width)) continue;
    std::optional<salt> s;
    if (opts.salt) {
      if (!find_truncation_collision(raw, w) && !find_prime_gap(raw, w, *opts.salt)) s = *opts.salt;
    } else {
      s = w == first.width ? std::optional<salt>(first.salt) : salt_for_width(raw, w, rng);
    }
    if (!s) continue;
    try {
      return detail::build_at(w, raw, opts, *s, rng);
    } catch (const build_error& e) {
      if (e.code() != build_errc::seed_search_exhausted && e.code() != build_errc::capacity_exceeded) throw;
      last_error = e;
    }
  }
  if (last_error) throw *last_error;
  throw build_error(build_errc::width_collision, "supplied salt leaves hashes exactly P apart at every width");
}

template <class K, class V>
any_params build_inferred(std::span<const std::pair<K, V>> kv, const build_options& opts = {}) {
  const auto raw = raw_hashes_of(kv);
  check_distinct_keys(kv, std::span<const std::uint64_t>(raw));
  return build_inferred(std::span<const std::uint64_t>(raw), opts);
}

/// A map variant instantiated at the width chosen during construction.
template <template <class, class, class> class Map, class K, class V>
class any_width_map {
 public:
  using key_type = K;
  using mapped_type = V;
  using variant_type = std::variant<Map<K, V, std::uint8_t>, Map<K, V, std::uint16_t>, Map<K, V, std::uint32_t>,
                                    Map<K, V, std::uint64_t>>;

  any_width_map(std::span<const std::pair<K, V>> kv, const any_params& params)
      : impl_(std::visit(
            [&](const auto& p) -> variant_type {
              using SizeT = std::remove_cvref_t<decltype(p.k_primary)>;
              return variant_type(std::in_place_type<Map<K, V, SizeT>>, kv, p);
            },
            params)) {}

  explicit any_width_map(variant_type impl) : impl_(std::move(impl)) {}

  index_width width() const noexcept {
    return std::visit([](const auto& m) { return width_of<typename std::decay_t<decltype(m)>::size_type>; }, impl_);
  }

  template <lookup_key_for<K> Q>
  decltype(auto) at(const Q& key) const {
    return std::visit([&](const auto& m) -> const V& { return m.at(key); }, impl_);
  }
  template <lookup_key_for<K> Q>
  const V& operator[](const Q& key) const {
    return std::visit([&](const auto& m) -> const V& { return m[key]; }, impl_);
  }
  template <lookup_key_for<K> Q>
  slot lookup_slot(const Q& key, lookup_probe* probe = nullptr) const {
    return std::visit([&](const auto& m) { return m.lookup_slot(key, probe); }, impl_);
  }
  std::size_t size() const noexcept {
    return std::visit([](const auto& m) { return m.size(); }, impl_);
  }

  /// Runs f on the concrete map so hot loops avoid per-call dispatch.
  template <class F>
  decltype(auto) visit(F&& f) const {
    return std::visit(std::forward<F>(f), impl_);
  }
  template <class F>
  decltype(auto) visit(F&& f) {
    return std::visit(std::forward<F>(f), impl_);
  }

 private:
  variant_type impl_;
};

/// Builds any map variant with width and salt inferred from the keyset.
template <template <class, class, class> class Map = unordered_map, class K, class V>
any_width_map<Map, K, V> make_unordered_map(std::span<const std::pair<K, V>> kv, const build_options& opts = {}) {
  return any_width_map<Map, K, V>(kv, build_inferred(kv, opts));
}

template <template <class, class, class> class Map = unordered_map, class K, class V>
any_width_map<Map, K, V> make_unordered_map(const std::vector<std::pair<K, V>>& kv, const build_options& opts = {}) {
  return make_unordered_map<Map>(std::span<const std::pair<K, V>>(kv), opts);
}

/// Constructor path: a fixed index type and no width inference.
template <template <class, class, class> class Map, index_type SizeT, class K, class V>
Map<K, V, SizeT> make_map_with_width(std::span<const std::pair<K, V>> kv, const build_options& opts = {}) {
  build_options o = opts;
  o.width = width_of<SizeT>;
  auto params = std::get<perfect_hash_params<SizeT>>(build_inferred(kv, o));
  return Map<K, V, SizeT>(kv, params);
}

}  // namespace static_maps
