#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace static_maps {

/// Stage of table construction that failed.
enum class build_errc {
  duplicate_key,
  raw_hash_collision,
  width_collision,
  seed_search_exhausted,
  capacity_exceeded,
  empty_keyset,
};

constexpr std::string_view to_string(build_errc e) noexcept {
  switch (e) {
    case build_errc::duplicate_key: return "duplicate_key";
    case build_errc::raw_hash_collision: return "raw_hash_collision";
    case build_errc::width_collision: return "width_collision";
    case build_errc::seed_search_exhausted: return "seed_search_exhausted";
    case build_errc::capacity_exceeded: return "capacity_exceeded";
    case build_errc::empty_keyset: return "empty_keyset";
  }
  return "unknown";
}

class build_error : public std::runtime_error {
 public:
  using entry_pair = std::pair<std::size_t, std::size_t>;

  build_error(build_errc code, const std::string& what, std::optional<entry_pair> entries = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), entries_(entries) {}

  build_errc code() const noexcept { return code_; }
  /// Input positions of the two offending keys, when the failure has them.
  const std::optional<entry_pair>& entries() const noexcept { return entries_; }

 private:
  build_errc code_;
  std::optional<entry_pair> entries_;
};

/// Thrown by checked lookups; mirrors std::unordered_map::at.
class key_not_found : public std::out_of_range {
 public:
  explicit key_not_found(const std::string& what) : std::out_of_range(what) {}
};

}  // namespace static_maps
