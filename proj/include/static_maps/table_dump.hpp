#pragma once

// Serialized tables.
//
// Blob layout, all integers little-endian:
//
//   char[8]  magic "SMAPTBL\0"
//   u32      format version (1)
//   u8       index width in bits
//   u8       salt enabled
//   u8       value kind (0 float64, 1 int64, 2 char, 3 text)
//   u8       reserved, 0
//   u64      salt, k_primary, r_primary, n
//   f64      delta, tau (IEEE-754 bit patterns)
//   u64      ks_secondary[r_primary]
//   u64      offsets[r_primary + 2]   secondary rows plus a one-slot guard row
//   u64      slots[offsets[r_primary + 1]]   entry index, or all ones if empty
//   n x      (u32 length, bytes) keys, in input order
//   n x      values: f64 bits | i64 | u8 | (u32 length, bytes)

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "static_maps/construction.hpp"
#include "static_maps/factory.hpp"
#include "static_maps/keyset.hpp"
#include "static_maps/maps.hpp"
#include "static_maps/ragged_array.hpp"

namespace static_maps {

inline constexpr std::array<char, 8> blob_magic{'S', 'M', 'A', 'P', 'T', 'B', 'L', '\0'};
inline constexpr std::uint32_t blob_version = 1;
inline constexpr std::uint64_t blob_empty_slot = ~std::uint64_t{0};

class blob_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// In-memory form of a serialized table, independent of the index width.
struct table_dump {
  index_width width = index_width::w64;
  salt salt_value{};
  std::uint64_t k_primary = 0;
  std::uint64_t r_primary = 0;
  double delta = default_delta;
  double tau = default_tau;
  std::vector<std::uint64_t> ks_secondary;
  std::vector<std::uint64_t> offsets;
  std::vector<std::uint64_t> slots;
  value_kind kind = value_kind::text;
  std::vector<std::string> keys;
  std::vector<keyset_value> values;

  std::size_t n() const noexcept { return keys.size(); }

  friend bool operator==(const table_dump&, const table_dump&) = default;
};

/// Captures construction output together with the original-order pairs.
inline table_dump make_table_dump(const any_params& params,
                                  std::span<const std::pair<std::string, keyset_value>> pairs, value_kind kind) {
  table_dump d;
  std::visit(
      [&](const auto& p) {
        using SizeT = std::remove_cvref_t<decltype(p.k_primary)>;
        d.width = width_of<SizeT>;
        d.salt_value = p.config.salt;
        d.k_primary = p.k_primary;
        d.r_primary = p.config.r_primary;
        d.delta = p.config.delta;
        d.tau = p.config.tau;
        d.ks_secondary.assign(p.ks_secondary.begin(), p.ks_secondary.end());
        d.offsets.assign(1, 0);
        for (std::size_t rs : p.row_sizes) d.offsets.push_back(d.offsets.back() + rs);
        d.offsets.push_back(d.offsets.back() + 1);
        d.slots.assign(d.offsets.back(), blob_empty_slot);
        for (std::size_t i = 0; i < p.slot_of_key.size(); ++i) {
          d.slots[d.offsets[p.slot_of_key[i].row] + p.slot_of_key[i].column] = i;
        }
      },
      params);
  d.kind = kind;
  for (const auto& [k, v] : pairs) {
    d.keys.push_back(k);
    d.values.push_back(v);
  }
  return d;
}

namespace detail {

class blob_writer {
 public:
  void bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
  template <class T>
  void le(T v) {
    using U = std::make_unsigned_t<T>;
    const U u = static_cast<U>(v);
    for (std::size_t b = 0; b < sizeof(T); ++b) out_.push_back(static_cast<char>(static_cast<std::uint8_t>(u >> (8 * b))));
  }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    if (s.size() > std::numeric_limits<std::uint32_t>::max()) throw blob_error("string too long for blob");
    le(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class blob_reader {
 public:
  explicit blob_reader(std::string_view in) : in_(in) {}

  std::string_view bytes(std::size_t n) {
    if (in_.size() - pos_ < n) throw blob_error("blob truncated at byte " + std::to_string(pos_));
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  template <class T>
  T le() {
    const auto s = bytes(sizeof(T));
    std::make_unsigned_t<T> u = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      u |= static_cast<std::make_unsigned_t<T>>(static_cast<std::uint8_t>(s[b])) << (8 * b);
    }
    return static_cast<T>(u);
  }
  double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }
  std::string str() { return std::string(bytes(le<std::uint32_t>())); }
  /// Guards element counts read from the blob against the bytes left.
  std::size_t count(std::uint64_t n, std::size_t min_bytes_each) {
    if (min_bytes_each && n > (in_.size() - pos_) / min_bytes_each) throw blob_error("blob count exceeds its size");
    return static_cast<std::size_t>(n);
  }
  bool done() const noexcept { return pos_ == in_.size(); }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string serialize_blob(const table_dump& d) {
  detail::blob_writer w;
  w.bytes(blob_magic.data(), blob_magic.size());
  w.le(blob_version);
  w.le(static_cast<std::uint8_t>(bits(d.width)));
  w.le(static_cast<std::uint8_t>(d.salt_value.enabled));
  w.le(static_cast<std::uint8_t>(d.kind));
  w.le(std::uint8_t{0});
  w.le(d.salt_value.value);
  w.le(d.k_primary);
  w.le(d.r_primary);
  w.le(static_cast<std::uint64_t>(d.n()));
  w.f64(d.delta);
  w.f64(d.tau);
  for (auto k : d.ks_secondary) w.le(k);
  for (auto o : d.offsets) w.le(o);
  for (auto s : d.slots) w.le(s);
  for (const auto& k : d.keys) w.str(k);
  for (const auto& v : d.values) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, double>) w.f64(x);
          else if constexpr (std::is_same_v<T, std::int64_t>) w.le(x);
          else if constexpr (std::is_same_v<T, char>) w.le(static_cast<std::uint8_t>(x));
          else w.str(x);
        },
        v);
  }
  return w.take();
}

inline table_dump deserialize_blob(std::string_view blob) {
  detail::blob_reader r(blob);
  if (r.bytes(blob_magic.size()) != std::string_view(blob_magic.data(), blob_magic.size())) {
    throw blob_error("not a static_maps table (bad magic)");
  }
  if (const auto v = r.le<std::uint32_t>(); v != blob_version) {
    throw blob_error("unsupported table format version " + std::to_string(v));
  }
  table_dump d;
  try {
    d.width = index_width_from_bits(r.le<std::uint8_t>());
  } catch (const std::invalid_argument& e) {
    throw blob_error(e.what());
  }
  d.salt_value.enabled = r.le<std::uint8_t>() != 0;
  const auto kind = r.le<std::uint8_t>();
  if (kind > static_cast<std::uint8_t>(value_kind::text)) throw blob_error("unknown value kind");
  d.kind = static_cast<value_kind>(kind);
  r.le<std::uint8_t>();
  d.salt_value.value = r.le<std::uint64_t>();
  d.k_primary = r.le<std::uint64_t>();
  d.r_primary = r.le<std::uint64_t>();
  const std::uint64_t n = r.le<std::uint64_t>();
  d.delta = r.f64();
  d.tau = r.f64();

  if (d.r_primary > (std::uint64_t{1} << 62)) throw blob_error("primary size out of range");
  d.ks_secondary.resize(r.count(d.r_primary, 8));
  for (auto& k : d.ks_secondary) k = r.le<std::uint64_t>();
  d.offsets.resize(r.count(d.r_primary + 2, 8));
  for (auto& o : d.offsets) o = r.le<std::uint64_t>();
  d.slots.resize(r.count(d.offsets.back(), 8));
  for (auto& s : d.slots) s = r.le<std::uint64_t>();
  d.keys.resize(r.count(n, 4));
  for (auto& k : d.keys) k = r.str();
  d.values.reserve(r.count(n, 1));
  for (std::uint64_t i = 0; i < n; ++i) {
    switch (d.kind) {
      case value_kind::float64: d.values.emplace_back(r.f64()); break;
      case value_kind::int64: d.values.emplace_back(r.le<std::int64_t>()); break;
      case value_kind::character: d.values.emplace_back(static_cast<char>(r.le<std::uint8_t>())); break;
      case value_kind::text: d.values.emplace_back(r.str()); break;
    }
  }
  if (!r.done()) throw blob_error("trailing bytes after table");
  for (std::uint64_t s : d.slots) {
    if (s != blob_empty_slot && s >= n) throw blob_error("slot refers past the last entry");
  }
  return d;
}

using loaded_map = any_width_map<unordered_map, std::string, keyset_value>;

namespace detail {

template <index_type SizeT>
unordered_map<std::string, keyset_value, SizeT> load_at_width(const table_dump& d) {
  constexpr auto max = std::numeric_limits<SizeT>::max();
  auto narrow = [](std::uint64_t v) {
    if (v > max) throw blob_error("value does not fit the table's index width");
    return static_cast<SizeT>(v);
  };
  if (d.r_primary == 0 || !std::has_single_bit(d.r_primary) || d.r_primary - 1 > max) {
    throw blob_error("primary size must be a power of two that fits the index width");
  }
  std::vector<SizeT> ks;
  ks.reserve(d.ks_secondary.size());
  for (auto k : d.ks_secondary) ks.push_back(narrow(k));
  std::vector<SizeT> offsets;
  for (auto o : d.offsets) offsets.push_back(narrow(o));
  std::vector<SizeT> slots;
  for (auto s : d.slots) slots.push_back(s == blob_empty_slot ? unordered_map<std::string, keyset_value, SizeT>::empty_index : narrow(s));
  ragged_array<SizeT, SizeT> table;
  try {
    table = ragged_array<SizeT, SizeT>(std::move(offsets), std::move(slots));
  } catch (const std::invalid_argument& e) {
    throw blob_error(e.what());
  }
  dangerous_unordered_map<std::string, SizeT, SizeT> index(d.salt_value, narrow(d.k_primary), d.r_primary,
                                                           std::move(ks), std::move(table), d.n());
  std::vector<std::pair<std::string, keyset_value>> items;
  items.reserve(d.n());
  for (std::size_t i = 0; i < d.n(); ++i) items.emplace_back(d.keys[i], d.values[i]);
  return unordered_map<std::string, keyset_value, SizeT>(std::move(index), std::move(items));
}

}  // namespace detail

/// Rebuilds a lookup-ready map from a dump without rerunning construction.
inline loaded_map load_table(const table_dump& d) {
  if (d.values.size() != d.n() || d.n() == 0) throw blob_error("table has no entries or mismatched values");
  try {
    switch (d.width) {
      case index_width::w8: return loaded_map(loaded_map::variant_type(detail::load_at_width<std::uint8_t>(d)));
      case index_width::w16: return loaded_map(loaded_map::variant_type(detail::load_at_width<std::uint16_t>(d)));
      case index_width::w32: return loaded_map(loaded_map::variant_type(detail::load_at_width<std::uint32_t>(d)));
      case index_width::w64: break;
    }
    return loaded_map(loaded_map::variant_type(detail::load_at_width<std::uint64_t>(d)));
  } catch (const std::invalid_argument& e) {
    throw blob_error(e.what());
  }
}

// ---------------------------------------------------------------------------
// C++ source emission

namespace detail {

inline std::string cpp_string_literal(std::string_view s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += static_cast<char>(c);
    } else if (c >= 0x20 && c < 0x7f && c != '?') {
      out += static_cast<char>(c);
    } else {
      // Three-digit octal escapes never absorb the following character.
      char buf[5];
      std::snprintf(buf, sizeof buf, "\\%03o", c);
      out += buf;
    }
  }
  return out + "\"";
}

inline std::string cpp_value_literal(const keyset_value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          if (std::isnan(x)) return "std::numeric_limits<double>::quiet_NaN()";
          if (std::isinf(x)) return x > 0 ? "std::numeric_limits<double>::infinity()" : "-std::numeric_limits<double>::infinity()";
          std::ostringstream os;
          os << std::hexfloat << x;
          return os.str();
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          if (x == std::numeric_limits<std::int64_t>::min()) return "std::numeric_limits<std::int64_t>::min()";
          return "std::int64_t{" + std::to_string(x) + "}";
        } else if constexpr (std::is_same_v<T, char>) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "'\\%03o'", static_cast<unsigned char>(x));
          return buf;
        } else {
          return "std::string_view{" + cpp_string_literal(x) + ", " + std::to_string(x.size()) + "}";
        }
      },
      v);
}

inline std::string_view cpp_value_type(value_kind k) {
  switch (k) {
    case value_kind::float64: return "double";
    case value_kind::int64: return "std::int64_t";
    case value_kind::character: return "char";
    case value_kind::text: return "std::string_view";
  }
  return "void";
}

inline std::string cpp_index_type(index_width w) { return "std::uint" + std::to_string(bits(w)) + "_t"; }

inline void emit_array(std::ostringstream& os, std::string_view type, std::string_view name,
                       const std::vector<std::string>& items) {
  os << "inline constexpr " << type << " " << name << "[] = {";
  for (std::size_t i = 0; i < items.size(); ++i) {
    os << (i % 8 == 0 ? "\n    " : " ") << items[i] << (i + 1 < items.size() ? "," : "");
  }
  os << "\n};\n\n";
}

}  // namespace detail

/// A single self-contained header defining the table and its lookup
/// functions inside `ns`. Needs only the standard library.
inline std::string emit_source(const table_dump& d, std::string_view ns = "generated_map") {
  const std::string index_t = detail::cpp_index_type(d.width);
  const auto prime = largest_prime_below(d.width);
  std::ostringstream os;
  os << "// Generated by static_maps_codegen. Do not edit.\n"
     << "#pragma once\n\n"
     << "#include <cstddef>\n#include <cstdint>\n#include <limits>\n#include <string_view>\n\n"
     << "namespace " << ns << " {\n\n"
     << "using index_type = " << index_t << ";\n"
     << "using value_type = " << detail::cpp_value_type(d.kind) << ";\n\n"
     << "inline constexpr std::size_t size = " << d.n() << ";\n"
     << "inline constexpr std::uint64_t salt = " << (d.salt_value.enabled ? d.salt_value.value : 0) << "ULL;\n"
     << "inline constexpr index_type k_primary = " << d.k_primary << "U;\n"
     << "inline constexpr index_type primary_mask = " << d.r_primary - 1 << "U;\n"
     << "inline constexpr index_type prime = " << prime.value << "U;\n"
     << "inline constexpr index_type prime_deficit = " << prime.deficit << "U;\n"
     << "inline constexpr index_type empty_slot = std::numeric_limits<index_type>::max();\n\n";

  auto numbers = [](const std::vector<std::uint64_t>& v, bool map_empty) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (auto x : v) out.push_back(map_empty && x == blob_empty_slot ? "empty_slot" : std::to_string(x) + "U");
    return out;
  };
  detail::emit_array(os, "index_type", "ks_secondary", numbers(d.ks_secondary, false));
  detail::emit_array(os, "index_type", "offsets", numbers(d.offsets, false));
  detail::emit_array(os, "index_type", "slots", numbers(d.slots, true));
  std::vector<std::string> keys, values;
  for (const auto& k : d.keys) keys.push_back("std::string_view{" + detail::cpp_string_literal(k) + ", " + std::to_string(k.size()) + "}");
  for (const auto& v : d.values) values.push_back(detail::cpp_value_literal(v));
  detail::emit_array(os, "std::string_view", "keys", keys);
  detail::emit_array(os, "value_type", "values", values);

  os << R"(constexpr std::uint64_t raw_hash(std::string_view key) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : key) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// (a * b) mod prime with index_type-wide words only.
constexpr index_type mulmod(index_type a, index_type b) noexcept {
  using U = decltype(index_type{} * 1u);
  constexpr unsigned half = std::numeric_limits<index_type>::digits / 2;
  constexpr index_type low = index_type((U{1} << half) - 1);
  auto mul_wide = [](index_type x, index_type y, index_type& hi, index_type& lo) {
    const index_type x0 = x & low, x1 = index_type(x >> half), y0 = y & low, y1 = index_type(y >> half);
    const index_type p00 = index_type(U(x0) * U(y0)), p01 = index_type(U(x0) * U(y1));
    const index_type p10 = index_type(U(x1) * U(y0)), p11 = index_type(U(x1) * U(y1));
    const index_type mid = index_type(p01 + p10);
    const index_type mid_carry = mid < p01 ? 1 : 0;
    lo = index_type(p00 + index_type(U(mid) << half));
    const index_type lo_carry = lo < p00 ? 1 : 0;
    hi = index_type(p11 + index_type(mid >> half) + index_type(U(mid_carry) << half) + lo_carry);
  };
  index_type hi = 0, lo = 0;
  mul_wide(a, b, hi, lo);
  while (hi != 0) {
    index_type fhi = 0, flo = 0;
    mul_wide(hi, prime_deficit, fhi, flo);
    const index_type sum = index_type(flo + lo);
    hi = index_type(fhi + (sum < lo ? 1 : 0));
    lo = sum;
  }
  return lo >= prime ? index_type(lo - prime) : lo;
}

/// Position of the key's entry, or size if the key is not in the table.
constexpr std::size_t find_index(std::string_view key) noexcept {
  const index_type h = static_cast<index_type>(raw_hash(key) ^ salt);
  const index_type j = mulmod(k_primary, h) & primary_mask;
  const std::size_t row = offsets[j];
  const std::size_t row_size = offsets[j + 1] - row;
  if (row_size == 0) return size;
  const std::size_t i = row_size == 1 ? 0 : (mulmod(ks_secondary[j], h) & index_type(row_size - 1));
  const index_type entry = slots[row + i];
  if (entry == empty_slot || keys[entry] != key) return size;
  return entry;
}

constexpr bool contains(std::string_view key) noexcept { return find_index(key) != size; }

/// Pointer to the key's value, or nullptr.
constexpr const value_type* find(std::string_view key) noexcept {
  const std::size_t idx = find_index(key);
  return idx == size ? nullptr : &values[idx];
}

)";
  os << "}  // namespace " << ns << "\n";
  return os.str();
}

}  // namespace static_maps
