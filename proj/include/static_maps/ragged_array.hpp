#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "static_maps/errors.hpp"

namespace static_maps {

/// Rows of differing lengths packed into one flat array. Row j occupies
/// storage[offsets[j], offsets[j + 1]).
template <class T, std::unsigned_integral Offset = std::size_t>
class ragged_array {
 public:
  using value_type = T;
  using offset_type = Offset;

  ragged_array() : offsets_{0} {}

  ragged_array(std::span<const std::size_t> row_sizes, const T& fill) {
    offsets_.reserve(row_sizes.size() + 1);
    offsets_.push_back(0);
    std::uint64_t total = 0;
    for (std::size_t s : row_sizes) {
      total += s;
      if (total > std::numeric_limits<Offset>::max()) {
        throw build_error(build_errc::capacity_exceeded,
                          "ragged array of " + std::to_string(total) + "+ slots does not fit a " +
                              std::to_string(std::numeric_limits<Offset>::digits) + "-bit offset");
      }
      offsets_.push_back(static_cast<Offset>(total));
    }
    storage_.assign(static_cast<std::size_t>(total), fill);
  }

  /// Rebuilds from serialized parts; offsets must start at 0, be
  /// nondecreasing and end at storage.size().
  ragged_array(std::vector<Offset> offsets, std::vector<T> storage)
      : offsets_(std::move(offsets)), storage_(std::move(storage)) {
    if (offsets_.empty() || offsets_.front() != 0 || offsets_.back() != storage_.size()) {
      throw std::invalid_argument("ragged_array: offsets do not describe storage");
    }
    for (std::size_t j = 1; j < offsets_.size(); ++j) {
      if (offsets_[j] < offsets_[j - 1]) throw std::invalid_argument("ragged_array: offsets decrease");
    }
  }

  std::size_t rows() const noexcept { return offsets_.size() - 1; }
  std::size_t size() const noexcept { return storage_.size(); }

  std::size_t row_size(std::size_t j) const {
    check_row(j);
    return row_size_unchecked(j);
  }
  std::size_t row_size_unchecked(std::size_t j) const noexcept { return offsets_[j + 1] - offsets_[j]; }
  std::size_t row_offset_unchecked(std::size_t j) const noexcept { return offsets_[j]; }

  const T& at(std::size_t j, std::size_t i) const {
    check_row(j);
    if (i >= row_size_unchecked(j)) {
      throw std::out_of_range("ragged_array: column " + std::to_string(i) + " outside row " + std::to_string(j) +
                              " of size " + std::to_string(row_size_unchecked(j)));
    }
    return storage_[offsets_[j] + i];
  }
  T& at(std::size_t j, std::size_t i) {
    return const_cast<T&>(static_cast<const ragged_array&>(*this).at(j, i));
  }

  /// Unchecked access for the lookup path.
  const T& operator()(std::size_t j, std::size_t i) const noexcept { return storage_[offsets_[j] + i]; }

  std::span<const T> row(std::size_t j) const {
    check_row(j);
    return std::span<const T>(storage_).subspan(offsets_[j], row_size_unchecked(j));
  }

  std::span<const Offset> offsets() const noexcept { return offsets_; }
  std::span<const T> storage() const noexcept { return storage_; }
  const T& flat(std::size_t idx) const noexcept { return storage_[idx]; }

 private:
  void check_row(std::size_t j) const {
    if (j >= rows()) {
      throw std::out_of_range("ragged_array: row " + std::to_string(j) + " of " + std::to_string(rows()));
    }
  }

  std::vector<Offset> offsets_;
  std::vector<T> storage_;
};

}  // namespace static_maps
