#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "static_maps/errors.hpp"

namespace static_maps {

/// Fixed keyset kept as a sorted array; lookup is a lower_bound followed by
/// one equality check. Unlike the hash variants an empty keyset is fine.
template <class K, class V, class Compare = std::less<>>
class ordered_map {
 public:
  using key_type = K;
  using mapped_type = V;
  using value_type = std::pair<K, V>;
  using iterator = typename std::vector<value_type>::iterator;
  using const_iterator = typename std::vector<value_type>::const_iterator;

  ordered_map() = default;

  explicit ordered_map(std::span<const value_type> kv, Compare cmp = {}) : items_(kv.begin(), kv.end()), cmp_(cmp) {
    std::stable_sort(items_.begin(), items_.end(),
                     [&](const value_type& a, const value_type& b) { return cmp_(a.first, b.first); });
    for (std::size_t i = 1; i < items_.size(); ++i) {
      if (!cmp_(items_[i - 1].first, items_[i].first)) {
        throw build_error(build_errc::duplicate_key, "ordered_map: key repeated at sorted position " + std::to_string(i));
      }
    }
  }

  template <class Q>
  const_iterator find(const Q& key) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), key,
                               [&](const value_type& a, const Q& k) { return cmp_(a.first, k); });
    if (it != items_.end() && !cmp_(key, it->first)) return it;
    return items_.end();
  }

  /// Values may change in place; keys may not.
  template <class Q>
  iterator find(const Q& key) {
    return items_.begin() + (static_cast<const ordered_map&>(*this).find(key) - items_.cbegin());
  }

  template <class Q>
  const V& at(const Q& key) const {
    auto it = find(key);
    if (it == items_.end()) throw key_not_found("key not in ordered_map");
    return it->second;
  }
  template <class Q>
  V& at(const Q& key) {
    return const_cast<V&>(static_cast<const ordered_map&>(*this).at(key));
  }

  template <class Q>
  bool contains(const Q& key) const {
    return find(key) != items_.end();
  }

  const_iterator begin() const noexcept { return items_.begin(); }
  const_iterator end() const noexcept { return items_.end(); }
  std::span<const value_type> items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }

 private:
  std::vector<value_type> items_;
  [[no_unique_address]] Compare cmp_;
};

}  // namespace static_maps
