#include "static_maps/table_dump.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "support.hpp"

namespace sm = static_maps;

namespace {

sm::table_dump dump_of(const std::string& file, std::uint64_t seed) {
  const auto kf = sm::parse_keyset(test_support::data_path(file), sm::keyset_format::tsv);
  const auto pairs = kf.typed_pairs();
  sm::build_options o;
  o.seed = seed;
  const auto params = sm::build_inferred(std::span<const std::pair<std::string, sm::keyset_value>>(pairs), o);
  return sm::make_table_dump(params, pairs, kf.kind);
}

}  // namespace

TEST(TableDump, BlobIsDeterministic) {
  EXPECT_EQ(sm::serialize_blob(dump_of("codons.tsv", 7)), sm::serialize_blob(dump_of("codons.tsv", 7)));
  EXPECT_NE(sm::serialize_blob(dump_of("codons.tsv", 7)), sm::serialize_blob(dump_of("codons.tsv", 8)));
}

TEST(TableDump, RoundTripAllDatasets) {
  for (const char* file : {"elements.tsv", "codons.tsv", "stocks.tsv"}) {
    const auto d = dump_of(file, 3);
    const auto back = sm::deserialize_blob(sm::serialize_blob(d));
    ASSERT_EQ(back, d) << file;
    const auto m = sm::load_table(back);
    ASSERT_EQ(m.width(), d.width);
    for (std::size_t i = 0; i < d.n(); ++i) ASSERT_EQ(m.at(d.keys[i]), d.values[i]) << file << " " << d.keys[i];
    EXPECT_THROW(m.at(std::string("definitely not a key")), sm::key_not_found);
  }
}

TEST(TableDump, LoadedSlotsMatchConstruction) {
  const auto kf = sm::parse_keyset(test_support::data_path("elements.tsv"), sm::keyset_format::tsv);
  const auto pairs = kf.typed_pairs();
  sm::build_options o;
  o.seed = 11;
  const auto params = sm::build_inferred(std::span<const std::pair<std::string, sm::keyset_value>>(pairs), o);
  const auto m = sm::load_table(sm::deserialize_blob(sm::serialize_blob(sm::make_table_dump(params, pairs, kf.kind))));
  std::visit(
      [&](const auto& p) {
        for (std::size_t i = 0; i < pairs.size(); ++i) ASSERT_EQ(m.lookup_slot(pairs[i].first), p.slot_of_key[i]);
      },
      params);
}

TEST(TableDump, RejectsCorruptBlobs) {
  const std::string blob = sm::serialize_blob(dump_of("codons.tsv", 1));
  EXPECT_THROW(sm::deserialize_blob(blob.substr(0, blob.size() - 1)), sm::blob_error);
  EXPECT_THROW(sm::deserialize_blob(blob + "x"), sm::blob_error);
  std::string bad = blob;
  bad[0] = 'X';
  EXPECT_THROW(sm::deserialize_blob(bad), sm::blob_error);
  bad = blob;
  bad[8] = 2;
  EXPECT_THROW(sm::deserialize_blob(bad), sm::blob_error);
  bad = blob;
  bad[12] = 12;
  EXPECT_THROW(sm::deserialize_blob(bad), sm::blob_error);
  EXPECT_THROW(sm::deserialize_blob(""), sm::blob_error);
}

TEST(TableDump, AllValueKinds) {
  const std::vector<std::pair<std::string, sm::keyset_value>> pairs{
      {"int", std::int64_t{-5}}, {"big", std::int64_t{1} << 60}};
  sm::build_options o;
  o.seed = 2;
  const auto d = sm::make_table_dump(
      sm::build_inferred(std::span<const std::pair<std::string, sm::keyset_value>>(pairs), o), pairs,
      sm::value_kind::int64);
  EXPECT_EQ(sm::deserialize_blob(sm::serialize_blob(d)), d);
  const std::vector<std::pair<std::string, sm::keyset_value>> text{{"a\tb", std::string("x\"y\n")}, {"", std::string()}};
  const auto t = sm::make_table_dump(
      sm::build_inferred(std::span<const std::pair<std::string, sm::keyset_value>>(text), o), text, sm::value_kind::text);
  EXPECT_EQ(sm::deserialize_blob(sm::serialize_blob(t)), t);
  const auto src = sm::emit_source(t, "ns");
  EXPECT_NE(src.find("\"x\\\"y\\012\""), std::string::npos);
}
