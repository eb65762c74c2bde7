#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "static_maps/table_dump.hpp"
#include "support.hpp"

namespace sm = static_maps;
namespace fs = std::filesystem;

namespace {

struct run_result {
  int status;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("static_maps_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

run_result codegen(const std::string& args, const std::string& env = "STATIC_MAPS_SEED=") {
  const auto err = scratch() / "stderr.txt";
  const std::string cmd = env + " '" CODEGEN_PATH "' " + args + " 2>'" + err.string() + "'";
  const int rc = std::system(cmd.c_str());
  return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, slurp(err)};
}

struct remove_scratch : ::testing::Environment {
  void TearDown() override { fs::remove_all(scratch()); }
};
const auto* const cleanup = ::testing::AddGlobalTestEnvironment(new remove_scratch);

std::string data(const char* name) { return "'" + test_support::data_path(name) + "'"; }

}  // namespace

TEST(CodegenCli, BlobIsByteIdenticalAcrossRuns) {
  const auto a = scratch() / "a.bin", b = scratch() / "b.bin";
  ASSERT_EQ(codegen(data("codons.tsv") + " --seed 99 --out " + a.string()).status, 0);
  ASSERT_EQ(codegen(data("codons.tsv") + " --seed 99 --out " + b.string()).status, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a).substr(0, 7), "SMAPTBL");
}

TEST(CodegenCli, EnvironmentSeedFallback) {
  const auto a = scratch() / "env.bin", b = scratch() / "flag.bin";
  ASSERT_EQ(codegen(data("codons.tsv") + " --out " + a.string(), "STATIC_MAPS_SEED=99").status, 0);
  ASSERT_EQ(codegen(data("codons.tsv") + " --seed 99 --out " + b.string(), "STATIC_MAPS_SEED=5").status, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  const auto r = codegen(data("codons.tsv") + " --out " + a.string());
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.err.find("from current time"), std::string::npos) << r.err;
}

TEST(CodegenCli, BlobReloadMatchesInProcessBuild) {
  for (const char* file : {"elements.tsv", "codons.tsv", "stocks.tsv"}) {
    const auto out = scratch() / (std::string(file) + ".bin");
    ASSERT_EQ(codegen(data(file) + " --seed 4 --out " + out.string()).status, 0);
    const auto loaded = sm::load_table(sm::deserialize_blob(slurp(out)));

    const auto kf = sm::parse_keyset(test_support::data_path(file), sm::keyset_format::tsv);
    const auto pairs = kf.typed_pairs();
    sm::build_options o;
    o.seed = 4;
    const auto direct = sm::make_unordered_map(pairs, o);
    for (const auto& [k, v] : pairs) {
      ASSERT_EQ(loaded.at(k), direct.at(k)) << k;
      ASSERT_EQ(loaded.lookup_slot(k), direct.lookup_slot(k)) << k;
    }
  }
}

TEST(CodegenCli, ForcedWidthCollisionExitsTwo) {
  const auto r = codegen(data("elements.tsv") + " --width 8 --seed 1 --out " + (scratch() / "x.bin").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("width_collision"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("colliding keys '"), std::string::npos) << r.err;
}

TEST(CodegenCli, InputErrorsExitOne) {
  EXPECT_EQ(codegen("/nonexistent.tsv --seed 1").status, 1);
  const auto dup = scratch() / "dup.tsv";
  std::ofstream(dup) << "H\t1\nHe\t2\nH\t3\n";
  const auto r = codegen(dup.string() + " --seed 1 --out " + (scratch() / "y.bin").string());
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("lines 1 and 3"), std::string::npos) << r.err;
  const auto empty = scratch() / "empty.tsv";
  std::ofstream(empty) << "";
  const auto e = codegen(empty.string() + " --seed 1 --out " + (scratch() / "z.bin").string());
  EXPECT_EQ(e.status, 2);
  EXPECT_NE(e.err.find("empty_keyset"), std::string::npos) << e.err;
}

TEST(CodegenCli, JsonAndCsvInputs) {
  const auto j = scratch() / "k.json", c = scratch() / "k.csv";
  std::ofstream(j) << R"({"alpha": 1, "beta": 2})";
  std::ofstream(c) << "alpha,1\nbeta,2\n";
  const auto jb = scratch() / "j.bin", cb = scratch() / "c.bin";
  ASSERT_EQ(codegen(j.string() + " --seed 3 --out " + jb.string()).status, 0);
  ASSERT_EQ(codegen(c.string() + " --seed 3 --out " + cb.string()).status, 0);
  EXPECT_EQ(slurp(jb), slurp(cb));
  EXPECT_EQ(sm::deserialize_blob(slurp(jb)).kind, sm::value_kind::int64);
}
