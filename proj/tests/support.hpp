#pragma once

#include <string>
#include <utility>
#include <vector>

#include "static_maps/bench_harness.hpp"

namespace test_support {

inline std::string data_path(const std::string& name) { return std::string(STATIC_MAPS_DATA_DIR) + "/" + name; }

inline auto elements() {
  return static_maps::bench::load_dataset<double>(data_path("elements.tsv"), static_maps::value_kind::float64);
}
inline auto codons() {
  return static_maps::bench::load_dataset<char>(data_path("codons.tsv"), static_maps::value_kind::character);
}
inline auto stocks() {
  return static_maps::bench::load_dataset<double>(data_path("stocks.tsv"), static_maps::value_kind::float64);
}

using counted_key = static_maps::bench::counting_key;

template <class V>
std::vector<std::pair<counted_key, V>> counted(const std::vector<std::pair<std::string, V>>& kv) {
  std::vector<std::pair<counted_key, V>> out;
  for (const auto& [k, v] : kv) out.push_back({counted_key{k}, v});
  return out;
}

}  // namespace test_support
