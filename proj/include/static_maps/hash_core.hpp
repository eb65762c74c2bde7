#pragma once

// Raw key hashing, salting, width truncation and modular arithmetic for the
// universal family g_k(i, r) = k * i mod P mod r, where P is the largest
// prime representable in the index type.
//
// Nothing here divides: reductions modulo P use the fact that 2^w - P is tiny,
// so every wraparound of 2^w is worth exactly (2^w - P) modulo P.

#include <bit>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace static_maps {

/// Supported index widths, in bits.
enum class index_width : std::uint8_t { w8 = 8, w16 = 16, w32 = 32, w64 = 64 };

constexpr unsigned bits(index_width w) noexcept { return static_cast<unsigned>(w); }

inline index_width index_width_from_bits(unsigned b) {
  switch (b) {
    case 8: return index_width::w8;
    case 16: return index_width::w16;
    case 32: return index_width::w32;
    case 64: return index_width::w64;
    default: throw std::invalid_argument("index width must be 8, 16, 32 or 64, got " + std::to_string(b));
  }
}

template <class T>
concept index_type = std::same_as<T, std::uint8_t> || std::same_as<T, std::uint16_t> ||
                     std::same_as<T, std::uint32_t> || std::same_as<T, std::uint64_t>;

template <index_type T>
inline constexpr index_width width_of = static_cast<index_width>(std::numeric_limits<T>::digits);

template <unsigned Bits>
struct uint_for_bits;
template <> struct uint_for_bits<8> { using type = std::uint8_t; };
template <> struct uint_for_bits<16> { using type = std::uint16_t; };
template <> struct uint_for_bits<32> { using type = std::uint32_t; };
template <> struct uint_for_bits<64> { using type = std::uint64_t; };

/// Largest prime below 2^w, stored as its deficit 2^w - P.
template <index_type T>
struct near_max_prime {
  static constexpr unsigned width_bits = std::numeric_limits<T>::digits;
  static constexpr T deficit = width_bits == 8 ? 5 : width_bits == 16 ? 15 : width_bits == 32 ? 5 : 59;
  static constexpr T value = T(std::numeric_limits<T>::max() - deficit + 1);
};

/// Runtime view of the near-max prime for a width.
struct near_max_prime_info {
  index_width width;
  std::uint64_t value;
  std::uint64_t deficit;
};

constexpr near_max_prime_info largest_prime_below(index_width w) noexcept {
  switch (w) {
    case index_width::w8:
      return {w, near_max_prime<std::uint8_t>::value, near_max_prime<std::uint8_t>::deficit};
    case index_width::w16:
      return {w, near_max_prime<std::uint16_t>::value, near_max_prime<std::uint16_t>::deficit};
    case index_width::w32:
      return {w, near_max_prime<std::uint32_t>::value, near_max_prime<std::uint32_t>::deficit};
    case index_width::w64:
      break;
  }
  return {index_width::w64, near_max_prime<std::uint64_t>::value, near_max_prime<std::uint64_t>::deficit};
}

// ---------------------------------------------------------------------------
// Raw hash (FNV-1a, 64 bit)

inline constexpr std::uint64_t fnv1a_offset_basis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t fnv1a_prime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a_append(std::uint64_t h, std::string_view bytes) noexcept {
  for (char c : bytes) {
    h ^= static_cast<std::uint8_t>(c);
    h *= fnv1a_prime;
  }
  return h;
}

constexpr std::uint64_t raw_hash(std::string_view bytes) noexcept {
  return fnv1a_append(fnv1a_offset_basis, bytes);
}

inline std::uint64_t raw_hash(std::span<const std::byte> bytes) noexcept {
  std::uint64_t h = fnv1a_offset_basis;
  for (std::byte b : bytes) {
    h ^= static_cast<std::uint8_t>(b);
    h *= fnv1a_prime;
  }
  return h;
}

/// Byte-level hashing of key types. Integers hash their little-endian
/// representation so digests match across platforms.
template <class K, class = void>
struct key_hash;

template <class K>
struct key_hash<K, std::enable_if_t<std::is_convertible_v<const K&, std::string_view>>> {
  constexpr std::uint64_t operator()(std::string_view k) const noexcept { return raw_hash(k); }
};

template <class K>
struct key_hash<K, std::enable_if_t<std::is_integral_v<K>>> {
  constexpr std::uint64_t operator()(K k) const noexcept {
    using U = std::make_unsigned_t<K>;
    U u = static_cast<U>(k);
    std::uint64_t h = fnv1a_offset_basis;
    for (std::size_t b = 0; b < sizeof(K); ++b) {
      h ^= static_cast<std::uint8_t>(u >> (8 * b));
      h *= fnv1a_prime;
    }
    return h;
  }
};

template <class K>
concept hashable_key = requires(const K& k) {
  { key_hash<K>{}(k) } -> std::same_as<std::uint64_t>;
};

template <hashable_key K>
constexpr std::uint64_t hash_key(const K& k) noexcept {
  return key_hash<K>{}(k);
}

// ---------------------------------------------------------------------------
// Salt and truncation

struct salt {
  bool enabled = false;
  std::uint64_t value = 0;

  friend constexpr bool operator==(const salt&, const salt&) = default;
};

constexpr std::uint64_t apply_salt(std::uint64_t h, salt s) noexcept {
  return s.enabled ? h ^ s.value : h;
}

template <index_type T>
constexpr T truncate_hash(std::uint64_t h) noexcept {
  return static_cast<T>(h);
}

constexpr std::uint64_t truncate_hash(std::uint64_t h, index_width w) noexcept {
  return w == index_width::w64 ? h : h & ((std::uint64_t{1} << bits(w)) - 1);
}

// ---------------------------------------------------------------------------
// Modular arithmetic near 2^w

/// x mod P. Since P > 2^(w-1), one compare-and-subtract suffices.
template <index_type T>
constexpr T mod_near_max(T x) noexcept {
  constexpr T p = near_max_prime<T>::value;
  return x >= p ? T(x - p) : x;
}

namespace detail {

// Arithmetic on T promoted to at least unsigned int; results are cast back to
// T, which restores width-w wraparound.
template <index_type T>
using promoted_t = decltype(T{} * 1u);

template <index_type T>
struct wide_product {
  T hi;
  T lo;
};

/// Full 2w-bit product as two w-bit words, from half-width partial products.
template <index_type T>
constexpr wide_product<T> mul_wide(T a, T b) noexcept {
  using U = promoted_t<T>;
  constexpr unsigned half = std::numeric_limits<T>::digits / 2;
  constexpr T low_mask = T((U{1} << half) - 1);

  const T a0 = a & low_mask, a1 = T(a >> half);
  const T b0 = b & low_mask, b1 = T(b >> half);
  const T p00 = T(U(a0) * U(b0));
  const T p01 = T(U(a0) * U(b1));
  const T p10 = T(U(a1) * U(b0));
  const T p11 = T(U(a1) * U(b1));

  const T mid = T(p01 + p10);
  const T mid_carry = mid < p01 ? 1 : 0;
  const T lo = T(p00 + T(U(mid) << half));
  const T lo_carry = lo < p00 ? 1 : 0;
  const T hi = T(p11 + T(mid >> half) + T(U(mid_carry) << half) + lo_carry);
  return {hi, lo};
}

/// Reduces hi * 2^w + lo modulo P using only w-bit words. Each pass replaces
/// hi * 2^w by hi * deficit; at most 4 passes run for any input.
template <index_type T>
constexpr T reduce_wide(wide_product<T> v, unsigned* passes = nullptr) noexcept {
  constexpr T deficit = near_max_prime<T>::deficit;
  while (v.hi != 0) {
    const wide_product<T> folded = mul_wide<T>(v.hi, deficit);
    const T lo = T(folded.lo + v.lo);
    const T carry = lo < v.lo ? 1 : 0;
    v = {T(folded.hi + carry), lo};
    if (passes) ++*passes;
  }
  return mod_near_max<T>(v.lo);
}

}  // namespace detail

/// (a * b) mod P using only w-bit integers.
template <index_type T>
constexpr T mulmod_near_max_portable(T a, T b, unsigned* passes = nullptr) noexcept {
  return detail::reduce_wide<T>(detail::mul_wide<T>(a, b), passes);
}

/// (a * b) mod P. Widths below 64 form the product in a 64-bit register and
/// fold the high part by the deficit; 64-bit operands use the chunked path.
template <index_type T>
constexpr T mulmod_near_max(T a, T b) noexcept {
  if constexpr (std::numeric_limits<T>::digits < 64) {
    constexpr unsigned w = std::numeric_limits<T>::digits;
    constexpr std::uint64_t mask = (std::uint64_t{1} << w) - 1;
    constexpr std::uint64_t deficit = near_max_prime<T>::deficit;
    // Three folds always suffice: after the second one the high part is at
    // most 1 and the low part is below deficit^2, so the third cannot carry.
    static_assert(deficit * deficit + deficit < mask);
    std::uint64_t x = std::uint64_t{a} * b;
    x = (x >> w) * deficit + (x & mask);
    x = (x >> w) * deficit + (x & mask);
    x = (x >> w) * deficit + (x & mask);
    return mod_near_max<T>(T(x));
  } else {
    return mulmod_near_max_portable<T>(a, b);
  }
}

/// g_k(i, r) = (k * i mod P) mod r for a power-of-two r, given as r - 1.
template <index_type T>
constexpr T universal_hash_masked(T k, T i, T mask) noexcept {
  return T(mulmod_near_max<T>(k, i) & mask);
}

/// g_k(i, r) = (k * i mod P) mod r. r must be a power of two.
template <index_type T>
constexpr T universal_hash(T k, T i, std::uint64_t r) {
  if (r == 0 || !std::has_single_bit(r)) throw std::invalid_argument("table size must be a power of two");
  return universal_hash_masked<T>(k, i, T(r - 1));
}

}  // namespace static_maps
