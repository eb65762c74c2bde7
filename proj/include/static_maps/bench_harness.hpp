#pragma once

// Runtime demos over the bundled datasets:
//
//   elements  uniform lookups of element symbols, summing atomic masses
//   codons    translation of a random nucleotide string, three bases per lookup
//   stocks    random (ticker, price) updates followed by a full scan
//
// Each implementation runs the same seeded workload; checksums must agree
// before any timing is reported.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "static_maps/factory.hpp"
#include "static_maps/keyset.hpp"
#include "static_maps/maps.hpp"
#include "static_maps/ordered_map.hpp"
#include "static_maps/prng.hpp"

namespace static_maps::bench {

enum class demo { elements, codons, stocks };
enum class impl { perfect_hash, ordered, std_unordered_map, std_map };

inline constexpr demo all_demos[] = {demo::elements, demo::codons, demo::stocks};
inline constexpr impl all_impls[] = {impl::perfect_hash, impl::ordered, impl::std_unordered_map, impl::std_map};

inline std::string_view to_string(demo d) noexcept {
  switch (d) {
    case demo::elements: return "elements";
    case demo::codons: return "codons";
    case demo::stocks: return "stocks";
  }
  return "?";
}

inline std::string_view to_string(impl i) noexcept {
  switch (i) {
    case impl::perfect_hash: return "perfect_hash";
    case impl::ordered: return "ordered";
    case impl::std_unordered_map: return "std_unordered_map";
    case impl::std_map: return "std_map";
  }
  return "?";
}

inline std::optional<demo> demo_from_string(std::string_view s) {
  for (demo d : all_demos) {
    if (to_string(d) == s) return d;
  }
  return std::nullopt;
}

inline std::optional<impl> impl_from_string(std::string_view s) {
  for (impl i : all_impls) {
    if (to_string(i) == s) return i;
  }
  return std::nullopt;
}

struct workload_sizes {
  std::size_t lookups = 10'000'000;
  std::size_t updates = 1'000'000;
  std::size_t batch = 10'000;
};

struct bench_row {
  std::string demo;
  std::string implementation;
  std::string operation;
  std::size_t iterations = 0;
  double median_ns = 0;
  double p99_ns = 0;
  double checksum = 0;
};

class checksum_mismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Datasets

template <class V>
std::vector<std::pair<std::string, V>> load_dataset(const std::string& path, value_kind kind) {
  const auto kf = parse_keyset(path, keyset_format::tsv, kind);
  std::vector<std::pair<std::string, V>> out;
  out.reserve(kf.records.size());
  for (auto& [k, v] : kf.typed_pairs()) out.emplace_back(k, std::get<V>(v));
  return out;
}

struct datasets {
  std::vector<std::pair<std::string, double>> elements;
  std::vector<std::pair<std::string, char>> codons;
  std::vector<std::pair<std::string, double>> stocks;

  static datasets load(const std::string& dir) {
    return {load_dataset<double>(dir + "/elements.tsv", value_kind::float64),
            load_dataset<char>(dir + "/codons.tsv", value_kind::character),
            load_dataset<double>(dir + "/stocks.tsv", value_kind::float64)};
  }
};

// ---------------------------------------------------------------------------
// Workloads

/// Entry indices drawn uniformly with replacement.
inline std::vector<std::uint32_t> uniform_indices(std::size_t n_keys, std::size_t count, std::uint64_t seed) {
  xorshift64 rng(seed);
  std::vector<std::uint32_t> out(count);
  for (auto& i : out) i = static_cast<std::uint32_t>(rng() % n_keys);
  return out;
}

inline std::string nucleotide_string(std::size_t codons, std::uint64_t seed) {
  static constexpr char bases[] = {'A', 'C', 'G', 'T'};
  xorshift64 rng(seed);
  std::string out(codons * 3, 'A');
  for (auto& c : out) c = bases[rng() >> 62];
  return out;
}

struct price_update {
  std::uint32_t entry;
  double price;
};

inline std::vector<price_update> price_updates(std::size_t n_keys, std::size_t count, std::uint64_t seed) {
  xorshift64 rng(seed);
  std::vector<price_update> out(count);
  for (auto& u : out) {
    u.entry = static_cast<std::uint32_t>(rng() % n_keys);
    u.price = static_cast<double>(1 + rng() % 500'000) / 100.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Timing

struct timing {
  double median_ns = 0;
  double p99_ns = 0;
};

/// Nearest-rank median and 99th percentile of per-batch ns/op.
inline timing summarize(std::vector<double> per_op_ns) {
  if (per_op_ns.empty()) return {};
  std::sort(per_op_ns.begin(), per_op_ns.end());
  auto rank = [&](double q) {
    const auto r = static_cast<std::size_t>(std::ceil(q * static_cast<double>(per_op_ns.size())));
    return per_op_ns[std::clamp<std::size_t>(r, 1, per_op_ns.size()) - 1];
  };
  return {rank(0.5), rank(0.99)};
}

struct timed_result {
  timing t;
  double checksum = 0;
};

/// Runs op(i) for i in [0, count) in timed batches; op returns the value
/// folded into the checksum.
template <class Op>
timed_result run_batches(std::size_t count, std::size_t batch, Op&& op) {
  using clock = std::chrono::steady_clock;
  std::vector<double> samples;
  samples.reserve(count / std::max<std::size_t>(batch, 1) + 1);
  double checksum = 0;
  for (std::size_t start = 0; start < count; start += batch) {
    const std::size_t stop = std::min(count, start + batch);
    double local = 0;
    const auto t0 = clock::now();
    for (std::size_t i = start; i < stop; ++i) local += op(i);
    const auto t1 = clock::now();
    checksum += local;
    const double ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
    samples.push_back(ns / static_cast<double>(stop - start));
  }
  return {summarize(std::move(samples)), checksum};
}

template <class V>
double scan_sum(const std::vector<std::pair<std::string, V>>& kv) {
  volatile double sink = 0;
  for (const auto& [k, v] : kv) sink = sink + static_cast<double>(v);
  return sink;
}

// ---------------------------------------------------------------------------
// Standard-library baselines

struct string_hash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

template <class V>
using std_hash_map = std::unordered_map<std::string, V, string_hash, std::equal_to<>>;
template <class V>
using std_tree_map = std::map<std::string, V, std::less<>>;

// ---------------------------------------------------------------------------
// Demos

namespace detail {

template <class V, class Lookup>
timed_result lookup_demo(impl which, const std::vector<std::pair<std::string, V>>& kv, std::size_t count,
                         std::size_t batch, std::uint64_t build_seed, Lookup&& key_at) {
  switch (which) {
    case impl::perfect_hash: {
      build_options o;
      o.seed = build_seed;
      const auto m = make_unordered_map<unordered_map_small_values>(kv, o);
      return m.visit([&](const auto& map) {
        (void)map.cache();
        return run_batches(count, batch, [&](std::size_t i) { return static_cast<double>(map[key_at(i)]); });
      });
    }
    case impl::ordered: {
      const ordered_map<std::string, V> m(kv);
      (void)scan_sum(kv);
      for (const auto& [k, v] : m) (void)m.find(k);
      return run_batches(count, batch, [&](std::size_t i) { return static_cast<double>(m.find(key_at(i))->second); });
    }
    case impl::std_unordered_map: {
      const std_hash_map<V> m(kv.begin(), kv.end());
      for (const auto& [k, v] : kv) (void)m.find(k);
      return run_batches(count, batch, [&](std::size_t i) { return static_cast<double>(m.find(key_at(i))->second); });
    }
    case impl::std_map: {
      const std_tree_map<V> m(kv.begin(), kv.end());
      for (const auto& [k, v] : kv) (void)m.find(k);
      return run_batches(count, batch, [&](std::size_t i) { return static_cast<double>(m.find(key_at(i))->second); });
    }
  }
  throw std::invalid_argument("unknown implementation");
}

template <class Map, class Assign>
timed_result update_demo(Map& m, const std::vector<std::pair<std::string, double>>& kv,
                         const std::vector<price_update>& updates, std::size_t batch, Assign&& assign) {
  auto r = run_batches(updates.size(), batch, [&](std::size_t i) {
    const auto& u = updates[i];
    assign(m, std::string_view(kv[u.entry].first), u.price);
    return u.price;
  });
  // The checksum is the final state, read back in dataset order.
  double final_sum = 0;
  for (const auto& [k, v] : kv) final_sum += assign(m, std::string_view(k), std::nullopt);
  r.checksum = final_sum;
  return r;
}

inline timed_result stocks_demo(impl which, const std::vector<std::pair<std::string, double>>& kv,
                                const std::vector<price_update>& updates, std::size_t batch,
                                std::uint64_t build_seed) {
  // assign(map, key, price) stores a price, or reads it back when price is empty.
  switch (which) {
    case impl::perfect_hash: {
      build_options o;
      o.seed = build_seed;
      auto m = make_unordered_map<unordered_map_mutable_values>(kv, o);
      return m.visit([&](auto& map) {
        (void)map.cache();
        return update_demo(map, kv, updates, batch, [](auto& mm, std::string_view k, std::optional<double> p) {
          if (p) return mm[k] = *p;
          return mm.at(k);
        });
      });
    }
    case impl::ordered: {
      ordered_map<std::string, double> m(kv);
      (void)scan_sum(kv);
      return update_demo(m, kv, updates, batch, [](auto& mm, std::string_view k, std::optional<double> p) {
        auto it = mm.find(k);
        if (p) return it->second = *p;
        return it->second;
      });
    }
    case impl::std_unordered_map: {
      std_hash_map<double> m(kv.begin(), kv.end());
      return update_demo(m, kv, updates, batch, [](auto& mm, std::string_view k, std::optional<double> p) {
        auto it = mm.find(k);
        if (p) return it->second = *p;
        return it->second;
      });
    }
    case impl::std_map: {
      std_tree_map<double> m(kv.begin(), kv.end());
      return update_demo(m, kv, updates, batch, [](auto& mm, std::string_view k, std::optional<double> p) {
        auto it = mm.find(k);
        if (p) return it->second = *p;
        return it->second;
      });
    }
  }
  throw std::invalid_argument("unknown implementation");
}

}  // namespace detail

/// Times the given implementations on one demo. All of them see the same
/// workload; differing checksums throw checksum_mismatch.
inline std::vector<bench_row> run_demo(demo d, const datasets& data, const std::vector<impl>& impls,
                                       std::uint64_t workload_seed, const workload_sizes& sizes = {}) {
  std::vector<bench_row> rows;
  auto record = [&](impl which, std::string_view op, std::size_t iterations, const timed_result& r) {
    rows.push_back({std::string(to_string(d)), std::string(to_string(which)), std::string(op), iterations,
                    r.t.median_ns, r.t.p99_ns, r.checksum});
  };
  const std::uint64_t build_seed = workload_seed ^ 0x5851f42d4c957f2dULL;
  switch (d) {
    case demo::elements: {
      const auto idx = uniform_indices(data.elements.size(), sizes.lookups, workload_seed);
      for (impl which : impls) {
        record(which, "lookup", idx.size(),
               detail::lookup_demo(which, data.elements, idx.size(), sizes.batch, build_seed,
                                   [&](std::size_t i) { return std::string_view(data.elements[idx[i]].first); }));
      }
      break;
    }
    case demo::codons: {
      const std::string dna = nucleotide_string(sizes.lookups, workload_seed);
      for (impl which : impls) {
        record(which, "lookup", sizes.lookups,
               detail::lookup_demo(which, data.codons, sizes.lookups, sizes.batch, build_seed,
                                   [&](std::size_t i) { return std::string_view(dna).substr(3 * i, 3); }));
      }
      break;
    }
    case demo::stocks: {
      const auto updates = price_updates(data.stocks.size(), sizes.updates, workload_seed);
      for (impl which : impls) {
        record(which, "update", updates.size(),
               detail::stocks_demo(which, data.stocks, updates, sizes.batch, build_seed));
      }
      break;
    }
  }
  for (const auto& r : rows) {
    if (r.checksum != rows.front().checksum) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s: checksum %.17g from %s differs from %.17g from %s", r.demo.c_str(),
                    r.checksum, r.implementation.c_str(), rows.front().checksum, rows.front().implementation.c_str());
      throw checksum_mismatch(buf);
    }
  }
  return rows;
}

inline void write_csv(std::ostream& os, const std::vector<bench_row>& rows) {
  os << "demo,implementation,operation,iterations,median_ns,p99_ns,checksum\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%zu,%.3f,%.3f,%.17g\n", r.demo.c_str(), r.implementation.c_str(),
                  r.operation.c_str(), r.iterations, r.median_ns, r.p99_ns, r.checksum);
    os << buf;
  }
}

// ---------------------------------------------------------------------------
// Instrumented correctness pass

/// String key that counts equality comparisons made against it.
struct counting_key {
  std::string text;
  static inline std::size_t comparisons = 0;

  friend bool operator==(const counting_key& a, const counting_key& b) {
    ++comparisons;
    return a.text == b.text;
  }
};

struct probe_counts {
  std::size_t lookups = 0;
  std::size_t perfect_hash_comparisons = 0;
  std::size_t std_unordered_comparisons = 0;
  std::size_t max_hash_evaluations = 0;
  bool values_match = true;
};

/// Looks up every key once in the perfect-hash map and in
/// std::unordered_map, counting key comparisons in each.
template <class V>
probe_counts count_probes(const std::vector<std::pair<std::string, V>>& kv, std::uint64_t build_seed = 1);

}  // namespace static_maps::bench

template <>
struct static_maps::key_hash<static_maps::bench::counting_key> {
  std::uint64_t operator()(const static_maps::bench::counting_key& k) const noexcept { return raw_hash(k.text); }
};

template <>
struct std::hash<static_maps::bench::counting_key> {
  std::size_t operator()(const static_maps::bench::counting_key& k) const noexcept {
    return std::hash<std::string>{}(k.text);
  }
};

namespace static_maps::bench {

template <class V>
probe_counts count_probes(const std::vector<std::pair<std::string, V>>& kv, std::uint64_t build_seed) {
  std::vector<std::pair<counting_key, V>> ckv;
  ckv.reserve(kv.size());
  for (const auto& [k, v] : kv) ckv.push_back({counting_key{k}, v});
  build_options o;
  o.seed = build_seed;
  const auto ph = make_unordered_map<unordered_map_small_values>(ckv, o);
  const std::unordered_map<counting_key, V> sm(ckv.begin(), ckv.end());

  probe_counts pc;
  pc.lookups = ckv.size();
  counting_key::comparisons = 0;
  for (const auto& [k, v] : ckv) {
    lookup_probe probe;
    (void)ph.lookup_slot(k, &probe);
    pc.max_hash_evaluations = std::max(pc.max_hash_evaluations, probe.hash_evaluations);
    pc.values_match = pc.values_match && ph[k] == v;
  }
  pc.perfect_hash_comparisons = counting_key::comparisons;
  counting_key::comparisons = 0;
  for (const auto& [k, v] : ckv) pc.values_match = pc.values_match && sm.find(k)->second == v;
  pc.std_unordered_comparisons = counting_key::comparisons;
  return pc;
}

}  // namespace static_maps::bench
