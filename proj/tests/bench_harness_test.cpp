#include "static_maps/bench_harness.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "support.hpp"

namespace sm = static_maps;
namespace bench = static_maps::bench;

namespace {

const bench::datasets& data() {
  static const bench::datasets d = bench::datasets::load(STATIC_MAPS_DATA_DIR);
  return d;
}

const std::vector<bench::impl> every_impl(std::begin(bench::all_impls), std::end(bench::all_impls));

bench::workload_sizes small() {
  bench::workload_sizes s;
  s.lookups = 200'000;
  s.updates = 100'000;
  s.batch = 10'000;
  return s;
}

}  // namespace

TEST(Bench, Summarize) {
  const auto t = bench::summarize({5, 1, 3, 2, 4});
  EXPECT_EQ(t.median_ns, 3);
  EXPECT_EQ(t.p99_ns, 5);
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[i] = i + 1;
  EXPECT_EQ(bench::summarize(v).p99_ns, 99);
}

TEST(Bench, ElementsChecksumIncludesHydrogen) {
  bench::workload_sizes s;
  s.lookups = 1;
  s.batch = 1;
  auto kv = data().elements;
  kv.resize(1);
  bench::datasets only_h{kv, data().codons, data().stocks};
  ASSERT_EQ(kv[0].first, "H");
  const auto rows = bench::run_demo(bench::demo::elements, only_h, every_impl, 1, s);
  for (const auto& r : rows) EXPECT_DOUBLE_EQ(r.checksum, 1.008);
}

TEST(Bench, AllDemosAgreeAcrossImplementations) {
  std::vector<bench::bench_row> rows;
  for (bench::demo d : bench::all_demos) {
    auto r = bench::run_demo(d, data(), every_impl, 7, small());
    rows.insert(rows.end(), r.begin(), r.end());
  }
  ASSERT_EQ(rows.size(), 12u);
  for (const auto& r : rows) {
    EXPECT_LE(r.median_ns, r.p99_ns);
    EXPECT_GT(r.checksum, 0);
  }
  std::ostringstream os;
  bench::write_csv(os, rows);
  const std::string csv = os.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "demo,implementation,operation,iterations,median_ns,p99_ns,checksum");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);
}

TEST(Bench, StocksFinalStateMatchesShadow) {
  const auto s = small();
  const auto updates = bench::price_updates(data().stocks.size(), s.updates, 3);
  std::map<std::string, double> shadow(data().stocks.begin(), data().stocks.end());
  for (const auto& u : updates) shadow[data().stocks[u.entry].first] = u.price;
  double want = 0;
  for (const auto& [k, v] : data().stocks) want += shadow[k];
  for (const auto& r : bench::run_demo(bench::demo::stocks, data(), every_impl, 3, s)) {
    EXPECT_EQ(r.checksum, want) << r.implementation;
  }
}

TEST(Bench, SameSeedSameChecksums) {
  const auto a = bench::run_demo(bench::demo::codons, data(), {bench::impl::perfect_hash}, 11, small());
  const auto b = bench::run_demo(bench::demo::codons, data(), {bench::impl::perfect_hash}, 11, small());
  const auto c = bench::run_demo(bench::demo::codons, data(), {bench::impl::perfect_hash}, 12, small());
  EXPECT_EQ(a[0].checksum, b[0].checksum);
  EXPECT_NE(a[0].checksum, c[0].checksum);
}

TEST(Bench, ProbeCountsSeparateImplementations) {
  for (const auto& pc : {bench::count_probes(data().elements), bench::count_probes(data().codons),
                         bench::count_probes(data().stocks)}) {
    EXPECT_TRUE(pc.values_match);
    EXPECT_EQ(pc.perfect_hash_comparisons, 0u);
    EXPECT_GE(pc.std_unordered_comparisons, pc.lookups);
    EXPECT_LE(pc.max_hash_evaluations, 2u);
  }
}

TEST(Bench, Names) {
  EXPECT_EQ(bench::demo_from_string("codons"), bench::demo::codons);
  EXPECT_EQ(bench::impl_from_string("std_map"), bench::impl::std_map);
  EXPECT_FALSE(bench::impl_from_string("gperf"));
}
