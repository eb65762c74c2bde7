// static_maps_codegen: keyset file -> serialized table blob or C++ header.
//
// Exit status: 0 success, 1 I/O or parse error, 2 construction failure.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "static_maps/factory.hpp"
#include "static_maps/keyset.hpp"
#include "static_maps/prng.hpp"
#include "static_maps/table_dump.hpp"

namespace sm = static_maps;

namespace {

constexpr int exit_io = 1;
constexpr int exit_build = 2;

std::optional<std::uint64_t> parse_u64(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used, 0);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// Same mixing as the build-time seed, applied to the current local time.
std::uint64_t current_timestamp_seed() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&now, &tm);
  char date[16], time[16];
  std::strftime(date, sizeof date, "%b %e %Y", &tm);
  std::strftime(time, sizeof time, "%H:%M:%S", &tm);
  return sm::seed_from_timestamp(date, time);
}

std::optional<sm::keyset_format> format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos) return std::nullopt;
  return sm::keyset_format_from_string(path.substr(dot + 1));
}

std::string describe_entry(const sm::keyset_file& kf, std::size_t i) {
  if (i >= kf.records.size()) return "entry " + std::to_string(i);
  return "'" + kf.records[i].key + "' (line " + std::to_string(kf.records[i].line) + ")";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build a perfect-hash table from a keyset file and emit it as a blob or a C++ header."};

  std::string input, out = "-", format_name, emit = "blob", kind_name, ns = "generated_map";
  std::string salt_text, seed_text;
  double delta = sm::default_delta, tau = sm::default_tau;
  std::optional<unsigned> width_bits;

  app.add_option("input", input, "Keyset file")->required();
  app.add_option("--format", format_name, "Input format (default: from extension, else tsv)")
      ->check(CLI::IsMember({"tsv", "csv", "json"}));
  app.add_option("--out,-o", out, "Output path, '-' for stdout");
  app.add_option("--delta", delta, "Primary load factor")->check(CLI::PositiveNumber);
  app.add_option("--tau", tau, "Markov slack factor, > 1");
  app.add_option("--width", width_bits, "Force the index width in bits")->check(CLI::IsMember({8u, 16u, 32u, 64u}));
  app.add_option("--salt", salt_text, "Force a 64-bit salt (decimal or 0x hex)");
  app.add_option("--seed", seed_text, "Construction seed; else $STATIC_MAPS_SEED, else the current time");
  app.add_option("--emit", emit, "Artifact kind")->check(CLI::IsMember({"blob", "source"}));
  app.add_option("--value-kind", kind_name, "Value type (default: inferred)")
      ->check(CLI::IsMember({"float64", "int64", "char", "text"}));
  app.add_option("--namespace", ns, "Namespace of the generated header");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_io;
  }
  if (!(tau > 1.0)) {
    std::cerr << "static_maps_codegen: --tau must be greater than 1\n";
    return exit_io;
  }

  sm::build_options opts;
  opts.delta = delta;
  opts.tau = tau;
  if (width_bits) opts.width = sm::index_width_from_bits(*width_bits);
  if (!salt_text.empty()) {
    const auto v = parse_u64(salt_text);
    if (!v) {
      std::cerr << "static_maps_codegen: invalid --salt '" << salt_text << "'\n";
      return exit_io;
    }
    opts.salt = sm::salt{true, *v};
  }
  if (!seed_text.empty()) {
    opts.seed = parse_u64(seed_text);
    if (!opts.seed) {
      std::cerr << "static_maps_codegen: invalid --seed '" << seed_text << "'\n";
      return exit_io;
    }
  } else if (const char* env = std::getenv("STATIC_MAPS_SEED"); env && *env) {
    opts.seed = parse_u64(env);
    if (!opts.seed) {
      std::cerr << "static_maps_codegen: invalid STATIC_MAPS_SEED '" << env << "'\n";
      return exit_io;
    }
  } else {
    opts.seed = current_timestamp_seed();
    std::cerr << "static_maps_codegen: seed " << *opts.seed << " (from current time)\n";
  }

  sm::keyset_file kf;
  try {
    std::optional<sm::keyset_format> format =
        format_name.empty() ? format_from_path(input) : sm::keyset_format_from_string(format_name);
    std::optional<sm::value_kind> kind;
    if (!kind_name.empty()) kind = sm::value_kind_from_string(kind_name);
    kf = sm::parse_keyset(input, format.value_or(sm::keyset_format::tsv), kind);
  } catch (const sm::keyset_error& e) {
    std::cerr << "static_maps_codegen: reading " << input << ": " << e.what() << "\n";
    return exit_io;
  }

  sm::table_dump dump;
  try {
    const auto pairs = kf.typed_pairs();
    const auto params = sm::build_inferred(std::span<const std::pair<std::string, sm::keyset_value>>(pairs), opts);
    dump = sm::make_table_dump(params, pairs, kf.kind);
  } catch (const sm::build_error& e) {
    std::cerr << "static_maps_codegen: construction failed at stage " << sm::to_string(e.code()) << ": " << e.what();
    if (e.entries()) {
      std::cerr << "; colliding keys " << describe_entry(kf, e.entries()->first) << " and "
                << describe_entry(kf, e.entries()->second);
    }
    std::cerr << "\n";
    return exit_build;
  } catch (const std::invalid_argument& e) {
    std::cerr << "static_maps_codegen: construction failed at stage parameters: " << e.what() << "\n";
    return exit_build;
  }

  const std::string artifact = emit == "blob" ? sm::serialize_blob(dump) : sm::emit_source(dump, ns);
  if (out == "-") {
    std::cout.write(artifact.data(), static_cast<std::streamsize>(artifact.size()));
    std::cout.flush();
    if (!std::cout) return exit_io;
  } else {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    f.write(artifact.data(), static_cast<std::streamsize>(artifact.size()));
    f.close();
    if (!f) {
      std::cerr << "static_maps_codegen: cannot write " << out << "\n";
      return exit_io;
    }
  }
  return 0;
}
