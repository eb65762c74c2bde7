#pragma once

// Hash map variants over a fixed keyset.
//
//   dangerous_unordered_map       values inside the secondary table; no keys, not iterable
//   unordered_map_small_values    as above plus an ordered copy of the pairs for iteration
//   unordered_map                 secondary table holds indices into the ordered pairs
//   unordered_map_mutable_values  fixed key -> index mapping over a mutable value array
//
// operator[] never checks membership and never compares keys. at() on the
// first two only rejects keys landing in an empty bucket, so a foreign key can
// silently yield some valid value. at() on the indexed variants is exact.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "static_maps/construction.hpp"
#include "static_maps/errors.hpp"
#include "static_maps/hash_core.hpp"
#include "static_maps/ragged_array.hpp"

namespace static_maps {

/// Q can be looked up in a map keyed by K when both hash the same bytes.
template <class Q, class K>
concept lookup_key_for =
    (std::is_convertible_v<const Q&, std::string_view> && std::is_convertible_v<const K&, std::string_view>) ||
    std::same_as<std::remove_cvref_t<Q>, K>;

/// Counts universal-hash evaluations made by one lookup.
struct lookup_probe {
  std::size_t hash_evaluations = 0;
};

/// Numeric projection summed by cache(). Arithmetic values count as
/// themselves; strings count as the low 16 bits of their raw hash.
template <class V, class = void>
struct cache_projection {
  double operator()(const V& v) const noexcept {
    if constexpr (std::is_arithmetic_v<V>) {
      return static_cast<double>(v);
    } else if constexpr (std::is_convertible_v<const V&, std::string_view>) {
      return static_cast<double>(raw_hash(std::string_view(v)) & 0xffff);
    } else {
      static_assert(sizeof(V) == 0, "specialize cache_projection for this value type");
    }
  }
};

template <class... Ts>
struct cache_projection<std::variant<Ts...>> {
  double operator()(const std::variant<Ts...>& v) const noexcept {
    return std::visit([](const auto& x) { return cache_projection<std::decay_t<decltype(x)>>{}(x); }, v);
  }
};

namespace detail {

[[noreturn]] inline void throw_not_found() { throw key_not_found("key not in static map"); }

template <class K, class V>
std::vector<V> values_of(std::span<const std::pair<K, V>> kv) {
  std::vector<V> out;
  out.reserve(kv.size());
  for (const auto& p : kv) out.push_back(p.second);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------

template <class K, class V, index_type SizeT = std::uint32_t>
class dangerous_unordered_map {
 public:
  using key_type = K;
  using mapped_type = V;
  using size_type = SizeT;

  /// values[i] belongs to the key whose slot is params.slot_of_key[i];
  /// unused slots hold `fill`.
  dangerous_unordered_map(const perfect_hash_params<SizeT>& params, std::span<const V> values, const V& fill = V{})
      : salt_xor_(params.config.salt.enabled ? params.config.salt.value : 0),
        k_primary_(params.k_primary),
        primary_mask_(SizeT(params.config.r_primary - 1)),
        ks_secondary_(params.ks_secondary),
        table_(with_guard_row(params.row_sizes), fill),
        n_(params.slot_of_key.size()) {
    if (values.size() != params.slot_of_key.size()) throw std::invalid_argument("one value per key required");
    for (std::size_t i = 0; i < values.size(); ++i) {
      const slot s = params.slot_of_key[i];
      table_.at(s.row, s.column) = values[i];
    }
  }

  dangerous_unordered_map(std::span<const std::pair<K, V>> kv, const perfect_hash_params<SizeT>& params)
      : dangerous_unordered_map(params, detail::values_of(kv)) {}

  /// Rebuilds a map from a serialized table (see table_dump.hpp).
  dangerous_unordered_map(salt s, SizeT k_primary, std::uint64_t r_primary, std::vector<SizeT> ks_secondary,
                          ragged_array<V, SizeT> table, std::size_t n)
      : salt_xor_(s.enabled ? s.value : 0),
        k_primary_(k_primary),
        primary_mask_(SizeT(r_primary - 1)),
        ks_secondary_(std::move(ks_secondary)),
        table_(std::move(table)),
        n_(n) {
    if (ks_secondary_.size() != r_primary || table_.rows() != r_primary + 1) {
      throw std::invalid_argument("secondary seeds and table rows must match the primary size");
    }
  }

  template <lookup_key_for<K> Q>
  slot lookup_slot(const Q& key, lookup_probe* probe = nullptr) const noexcept {
    return locate(hash_key(key), probe);
  }

  template <lookup_key_for<K> Q>
  const V& operator[](const Q& key) const noexcept {
    const slot s = locate(hash_key(key), nullptr);
    return table_(s.row, s.column);
  }

  template <lookup_key_for<K> Q>
  const V& at(const Q& key) const {
    const slot s = locate(hash_key(key), nullptr);
    if (table_.row_size_unchecked(s.row) == 0) detail::throw_not_found();
    return table_(s.row, s.column);
  }

  std::size_t size() const noexcept { return n_; }
  SizeT k_primary() const noexcept { return k_primary_; }
  std::uint64_t r_primary() const noexcept { return std::uint64_t{primary_mask_} + 1; }
  std::span<const SizeT> ks_secondary() const noexcept { return ks_secondary_; }
  std::uint64_t salt_value() const noexcept { return salt_xor_; }
  /// Secondary rows followed by one guard row of a single slot.
  const ragged_array<V, SizeT>& table() const noexcept { return table_; }

 private:
  // The trailing single-slot row keeps offsets[j] + 0 inside storage even when
  // the last real rows are empty, so unchecked lookups never leave the array.
  static std::vector<std::size_t> with_guard_row(std::vector<std::size_t> rows) {
    rows.push_back(1);
    return rows;
  }

  slot locate(std::uint64_t raw, lookup_probe* probe) const noexcept {
    const SizeT h = truncate_hash<SizeT>(raw ^ salt_xor_);
    const SizeT j = universal_hash_masked<SizeT>(k_primary_, h, primary_mask_);
    const std::size_t r_j = table_.row_size_unchecked(j);
    if (probe) probe->hash_evaluations += r_j > 1 ? 2 : 1;
    if (r_j <= 1) return {j, 0};
    return {j, universal_hash_masked<SizeT>(ks_secondary_[j], h, SizeT(r_j - 1))};
  }

  std::uint64_t salt_xor_;
  SizeT k_primary_;
  SizeT primary_mask_;
  std::vector<SizeT> ks_secondary_;
  ragged_array<V, SizeT> table_;
  std::size_t n_;
};

// ---------------------------------------------------------------------------

namespace detail {

template <index_type SizeT>
std::vector<SizeT> iota_indices(std::size_t n) {
  if (n >= std::numeric_limits<SizeT>::max()) {
    throw build_error(build_errc::capacity_exceeded, std::to_string(n) + " keys leave no room for the empty-slot index");
  }
  std::vector<SizeT> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<SizeT>(i);
  return out;
}

template <class Map>
double cache_total(const Map& m) {
  using V = typename Map::mapped_type;
  volatile double sink = 0.0;
  for (const auto& [k, v] : m.items()) sink = sink + cache_projection<V>{}(m[k]);
  return sink;
}

}  // namespace detail

template <class K, class V, index_type SizeT = std::uint32_t>
class unordered_map_small_values {
 public:
  using key_type = K;
  using mapped_type = V;
  using value_type = std::pair<K, V>;
  using size_type = SizeT;
  using const_iterator = typename std::vector<value_type>::const_iterator;

  unordered_map_small_values(std::span<const value_type> kv, const perfect_hash_params<SizeT>& params)
      : inner_(params, detail::values_of(kv)), items_(kv.begin(), kv.end()) {}

  template <lookup_key_for<K> Q>
  const V& operator[](const Q& key) const noexcept {
    return inner_[key];
  }
  template <lookup_key_for<K> Q>
  const V& at(const Q& key) const {
    return inner_.at(key);
  }
  template <lookup_key_for<K> Q>
  slot lookup_slot(const Q& key, lookup_probe* probe = nullptr) const noexcept {
    return inner_.lookup_slot(key, probe);
  }

  const_iterator begin() const noexcept { return items_.begin(); }
  const_iterator end() const noexcept { return items_.end(); }
  std::span<const value_type> items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }

  /// Touches every key and value; returns the projected total.
  double cache() const { return detail::cache_total(*this); }

  const dangerous_unordered_map<K, V, SizeT>& inner() const noexcept { return inner_; }

 private:
  dangerous_unordered_map<K, V, SizeT> inner_;
  std::vector<value_type> items_;
};

template <class K, class V, index_type SizeT = std::uint32_t>
class unordered_map {
 public:
  using key_type = K;
  using mapped_type = V;
  using value_type = std::pair<K, V>;
  using size_type = SizeT;
  using const_iterator = typename std::vector<value_type>::const_iterator;

  /// Marks secondary slots that hold no key.
  static constexpr SizeT empty_index = std::numeric_limits<SizeT>::max();

  unordered_map(std::span<const value_type> kv, const perfect_hash_params<SizeT>& params)
      : index_(params, detail::iota_indices<SizeT>(kv.size()), empty_index), items_(kv.begin(), kv.end()) {}

  unordered_map(dangerous_unordered_map<K, SizeT, SizeT> index, std::vector<value_type> items)
      : index_(std::move(index)), items_(std::move(items)) {
    if (items_.empty() || items_.size() != index_.size()) throw std::invalid_argument("index and items disagree");
  }

  /// Unchecked. A foreign key yields some stored value; the index is clamped
  /// so it never reads outside the pair array.
  template <lookup_key_for<K> Q>
  const V& operator[](const Q& key) const noexcept {
    return items_[std::min<std::size_t>(index_[key], items_.size() - 1)].second;
  }

  /// Exact membership: an empty slot or a different stored key throws.
  template <lookup_key_for<K> Q>
  const V& at(const Q& key) const {
    return items_[checked_index(key)].second;
  }

  template <lookup_key_for<K> Q>
  bool contains(const Q& key) const {
    const SizeT idx = index_[key];
    return idx != empty_index && items_[idx].first == key;
  }

  template <lookup_key_for<K> Q>
  std::size_t checked_index(const Q& key) const {
    const SizeT idx = index_[key];
    if (idx == empty_index || !(items_[idx].first == key)) detail::throw_not_found();
    return idx;
  }

  template <lookup_key_for<K> Q>
  slot lookup_slot(const Q& key, lookup_probe* probe = nullptr) const noexcept {
    return index_.lookup_slot(key, probe);
  }

  const_iterator begin() const noexcept { return items_.begin(); }
  const_iterator end() const noexcept { return items_.end(); }
  std::span<const value_type> items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }

  double cache() const { return detail::cache_total(*this); }

  const dangerous_unordered_map<K, SizeT, SizeT>& index() const noexcept { return index_; }

 private:
  dangerous_unordered_map<K, SizeT, SizeT> index_;
  std::vector<value_type> items_;
};

/// Keys and their slots are frozen at construction; only values change.
/// Reads may run concurrently only while no thread writes.
template <class K, class V, index_type SizeT = std::uint32_t>
class unordered_map_mutable_values {
 public:
  using key_type = K;
  using mapped_type = V;
  using value_type = std::pair<K, V>;
  using size_type = SizeT;

  unordered_map_mutable_values(std::span<const value_type> kv, const perfect_hash_params<SizeT>& params)
      : index_(index_pairs(kv), params), values_(detail::values_of(kv)) {}

  template <lookup_key_for<K> Q>
  V& operator[](const Q& key) noexcept {
    return values_[index_[key]];
  }
  template <lookup_key_for<K> Q>
  const V& operator[](const Q& key) const noexcept {
    return values_[index_[key]];
  }

  template <lookup_key_for<K> Q>
  V& at(const Q& key) {
    return values_[index_.at(key)];
  }
  template <lookup_key_for<K> Q>
  const V& at(const Q& key) const {
    return values_[index_.at(key)];
  }

  /// Replaces the value of an existing key and returns the old one.
  template <lookup_key_for<K> Q>
  V set_value(const Q& key, V v) {
    return std::exchange(at(key), std::move(v));
  }

  template <lookup_key_for<K> Q>
  slot lookup_slot(const Q& key, lookup_probe* probe = nullptr) const noexcept {
    return index_.lookup_slot(key, probe);
  }

  /// Original-order (key, value) views.
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using difference_type = std::ptrdiff_t;
    using value_type = std::pair<const K&, const V&>;
    using reference = value_type;

    iterator() = default;
    iterator(const unordered_map_mutable_values* m, std::size_t i) : m_(m), i_(i) {}
    reference operator*() const { return {m_->index_.items()[i_].first, m_->values_[i_]}; }
    iterator& operator++() {
      ++i_;
      return *this;
    }
    iterator operator++(int) {
      auto t = *this;
      ++i_;
      return t;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.i_ == b.i_ && a.m_ == b.m_; }

   private:
    const unordered_map_mutable_values* m_ = nullptr;
    std::size_t i_ = 0;
  };

  iterator begin() const noexcept { return {this, 0}; }
  iterator end() const noexcept { return {this, values_.size()}; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const V> values() const noexcept { return values_; }
  std::span<V> values() noexcept { return values_; }
  const unordered_map<K, SizeT, SizeT>& index() const noexcept { return index_; }

  double cache() const {
    volatile double sink = 0.0;
    for (const auto& [k, idx] : index_.items()) sink = sink + cache_projection<V>{}((*this)[k]);
    return sink;
  }

 private:
  static std::vector<std::pair<K, SizeT>> index_pairs(std::span<const value_type> kv) {
    std::vector<std::pair<K, SizeT>> out;
    out.reserve(kv.size());
    for (std::size_t i = 0; i < kv.size(); ++i) out.emplace_back(kv[i].first, static_cast<SizeT>(i));
    return out;
  }

  unordered_map<K, SizeT, SizeT> index_;
  std::vector<V> values_;
};

}  // namespace static_maps
