#include "static_maps/ordered_map.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"

namespace sm = static_maps;

TEST(OrderedMap, SortsAndFinds) {
  const std::vector<std::pair<std::string, int>> kv{{"b", 2}, {"c", 3}, {"a", 1}};
  const sm::ordered_map<std::string, int> m(kv);
  EXPECT_EQ(m.items().front().first, "a");
  EXPECT_EQ(m.at("c"), 3);
  EXPECT_TRUE(m.contains(std::string_view("b")));
  EXPECT_FALSE(m.contains("d"));
  EXPECT_THROW(m.at("0"), sm::key_not_found);
}

TEST(OrderedMap, StocksMatchSortOracle) {
  auto kv = test_support::stocks();
  const sm::ordered_map<std::string, double> m(kv);
  std::sort(kv.begin(), kv.end());
  ASSERT_EQ(m.size(), 505u);
  EXPECT_TRUE(std::equal(m.begin(), m.end(), kv.begin(), kv.end()));
  for (const auto& [k, v] : kv) ASSERT_EQ(m.at(k), v);
}

TEST(OrderedMap, AbsentKeys) {
  const auto kv = test_support::stocks();
  const sm::ordered_map<std::string, double> m(kv);
  std::mt19937_64 gen(1);
  int absent = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string k(1 + gen() % 5, 'A');
    for (auto& c : k) c = static_cast<char>('A' + gen() % 26);
    const bool present = std::any_of(kv.begin(), kv.end(), [&](const auto& p) { return p.first == k; });
    ASSERT_EQ(m.contains(k), present) << k;
    absent += !present;
  }
  EXPECT_GT(absent, 5000);
}

TEST(OrderedMap, DuplicatesAndEmpty) {
  const std::vector<std::pair<std::string, int>> dup{{"a", 1}, {"a", 2}};
  EXPECT_THROW((sm::ordered_map<std::string, int>(dup)), sm::build_error);
  const sm::ordered_map<std::string, int> empty;
  EXPECT_TRUE(empty.empty());
  EXPECT_FALSE(empty.contains("a"));
}
