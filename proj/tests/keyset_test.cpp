#include "static_maps/keyset.hpp"

#include <gtest/gtest.h>

#include <string>

#include "support.hpp"

namespace sm = static_maps;

namespace {

sm::keyset_error::kind error_kind_of(std::string_view text, sm::keyset_format f) {
  try {
    sm::parse_keyset_text(text, f);
  } catch (const sm::keyset_error& e) {
    return e.error_kind();
  }
  ADD_FAILURE() << "no error for: " << text;
  return sm::keyset_error::kind::io;
}

}  // namespace

TEST(Keyset, Tsv) {
  const auto kf = sm::parse_keyset_text("# comment\nH\t1.008\r\n\nHe\t4.0026\n", sm::keyset_format::tsv);
  ASSERT_EQ(kf.records.size(), 2u);
  EXPECT_EQ(kf.kind, sm::value_kind::float64);
  EXPECT_EQ(kf.records[1].key, "He");
  EXPECT_EQ(kf.records[1].line, 4u);
  EXPECT_EQ(std::get<double>(kf.typed_pairs()[0].second), 1.008);
}

TEST(Keyset, InferKinds) {
  EXPECT_EQ(sm::parse_keyset_text("a\t1\nb\t-2\n", sm::keyset_format::tsv).kind, sm::value_kind::int64);
  EXPECT_EQ(sm::parse_keyset_text("a\tx\nb\ty\n", sm::keyset_format::tsv).kind, sm::value_kind::character);
  EXPECT_EQ(sm::parse_keyset_text("a\txy\nb\t1\n", sm::keyset_format::tsv).kind, sm::value_kind::text);
  EXPECT_EQ(sm::parse_keyset_text("a\t1\nb\t1.5\n", sm::keyset_format::tsv).kind, sm::value_kind::float64);
}

TEST(Keyset, DeclaredKindMustParse) {
  EXPECT_EQ(sm::parse_keyset_text("a\t1\n", sm::keyset_format::tsv, sm::value_kind::text).kind, sm::value_kind::text);
  try {
    sm::parse_keyset_text("a\t1\nb\tq\n", sm::keyset_format::tsv, sm::value_kind::int64);
    FAIL();
  } catch (const sm::keyset_error& e) {
    EXPECT_EQ(e.error_kind(), sm::keyset_error::kind::parse);
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Keyset, TsvErrors) {
  EXPECT_EQ(error_kind_of("a 1\n", sm::keyset_format::tsv), sm::keyset_error::kind::parse);
  EXPECT_EQ(error_kind_of("a\t1\t2\n", sm::keyset_format::tsv), sm::keyset_error::kind::parse);
}

TEST(Keyset, DuplicateReportsBothLines) {
  try {
    sm::parse_keyset_text("x\t1\ny\t2\nx\t3\n", sm::keyset_format::tsv);
    FAIL();
  } catch (const sm::keyset_error& e) {
    EXPECT_EQ(e.error_kind(), sm::keyset_error::kind::duplicate_key);
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("lines 1 and 3"), std::string::npos) << e.what();
  }
}

TEST(Keyset, Csv) {
  const auto kf = sm::parse_keyset_text("\"a,b\",1\n\"q\"\"t\",2\nplain,3\n", sm::keyset_format::csv);
  ASSERT_EQ(kf.records.size(), 3u);
  EXPECT_EQ(kf.records[0].key, "a,b");
  EXPECT_EQ(kf.records[1].key, "q\"t");
  EXPECT_EQ(kf.kind, sm::value_kind::int64);
  EXPECT_EQ(error_kind_of("a,b,c\n", sm::keyset_format::csv), sm::keyset_error::kind::parse);
  EXPECT_EQ(error_kind_of("\"a,1\n", sm::keyset_format::csv), sm::keyset_error::kind::parse);
  EXPECT_EQ(error_kind_of("\"a\"x,1\n", sm::keyset_format::csv), sm::keyset_error::kind::parse);
}

TEST(Keyset, JsonForms) {
  const auto obj = sm::parse_keyset_text(R"({"b": 2, "a": "x"})", sm::keyset_format::json);
  ASSERT_EQ(obj.records.size(), 2u);
  EXPECT_EQ(obj.records[0].key, "b");
  EXPECT_EQ(obj.kind, sm::value_kind::character);
  const auto arr = sm::parse_keyset_text(R"([["k", 1.5], ["j", 2]])", sm::keyset_format::json);
  EXPECT_EQ(arr.records[1].key, "j");
  EXPECT_EQ(arr.kind, sm::value_kind::float64);
  EXPECT_EQ(error_kind_of(R"({"a": 1, "a": 2})", sm::keyset_format::json), sm::keyset_error::kind::duplicate_key);
  EXPECT_EQ(error_kind_of(R"([["a", 1], ["a", 2]])", sm::keyset_format::json), sm::keyset_error::kind::duplicate_key);
  EXPECT_EQ(error_kind_of(R"({"a": [1]})", sm::keyset_format::json), sm::keyset_error::kind::parse);
  EXPECT_EQ(error_kind_of("{", sm::keyset_format::json), sm::keyset_error::kind::parse);
  EXPECT_EQ(error_kind_of("3", sm::keyset_format::json), sm::keyset_error::kind::parse);
}

TEST(Keyset, EmptyAndMissingFiles) {
  EXPECT_TRUE(sm::parse_keyset_text("", sm::keyset_format::tsv).records.empty());
  EXPECT_TRUE(sm::parse_keyset_text("{}", sm::keyset_format::json).records.empty());
  try {
    sm::parse_keyset("/nonexistent/keys.tsv", sm::keyset_format::tsv);
    FAIL();
  } catch (const sm::keyset_error& e) {
    EXPECT_EQ(e.error_kind(), sm::keyset_error::kind::io);
  }
}

TEST(Keyset, BundledDatasets) {
  EXPECT_EQ(test_support::elements().size(), 118u);
  EXPECT_EQ(test_support::codons().size(), 64u);
  EXPECT_EQ(test_support::stocks().size(), 505u);
}
