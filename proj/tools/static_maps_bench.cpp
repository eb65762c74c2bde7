// static_maps_bench: times the runtime demos and prints one CSV row per
// (demo, implementation, operation).
//
// Results are steadier on a quiet machine with the process pinned to one core
// (taskset) and ASLR off (setarch -R). The harness does not do this itself.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "static_maps/bench_harness.hpp"

namespace bench = static_maps::bench;

int main(int argc, char** argv) {
  CLI::App app{"Compare the perfect-hash maps with ordered and standard-library maps on three demos."};

  std::string demo_name = "all", impl_name = "all", out = "csv", file, data_dir = STATIC_MAPS_DATA_DIR;
  std::uint64_t seed = 1;
  bench::workload_sizes sizes;

  app.add_option("--demo", demo_name)->check(CLI::IsMember({"elements", "codons", "stocks", "all"}));
  app.add_option("--impl", impl_name)
      ->check(CLI::IsMember({"perfect_hash", "ordered", "std_unordered_map", "std_map", "all"}));
  app.add_option("--workload-seed", seed, "Seed for the key and update streams");
  app.add_option("--out", out, "Report format")->check(CLI::IsMember({"csv"}));
  app.add_option("--file", file, "Write the report here instead of stdout");
  app.add_option("--data-dir", data_dir, "Directory holding the dataset TSV files");
  app.add_option("--lookups", sizes.lookups, "Lookups per lookup demo")->check(CLI::PositiveNumber);
  app.add_option("--updates", sizes.updates, "Updates in the stocks demo")->check(CLI::PositiveNumber);
  app.add_option("--batch", sizes.batch, "Operations per timed batch")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  std::vector<bench::demo> demos;
  if (demo_name == "all") demos.assign(std::begin(bench::all_demos), std::end(bench::all_demos));
  else demos.push_back(*bench::demo_from_string(demo_name));
  std::vector<bench::impl> impls;
  if (impl_name == "all") impls.assign(std::begin(bench::all_impls), std::end(bench::all_impls));
  else impls.push_back(*bench::impl_from_string(impl_name));

  bench::datasets data;
  try {
    data = bench::datasets::load(data_dir);
  } catch (const std::exception& e) {
    std::cerr << "static_maps_bench: " << e.what() << "\n";
    return 1;
  }

  // Correctness pass first: the perfect hash must look keys up without
  // comparing them, the standard hash map must compare at least once.
  for (bench::demo d : demos) {
    bench::probe_counts pc;
    switch (d) {
      case bench::demo::elements: pc = bench::count_probes(data.elements); break;
      case bench::demo::codons: pc = bench::count_probes(data.codons); break;
      case bench::demo::stocks: pc = bench::count_probes(data.stocks); break;
    }
    std::cerr << bench::to_string(d) << ": " << pc.lookups << " keys, perfect_hash comparisons "
              << pc.perfect_hash_comparisons << ", std_unordered_map comparisons " << pc.std_unordered_comparisons
              << ", max hash evaluations " << pc.max_hash_evaluations << "\n";
    if (!pc.values_match || pc.perfect_hash_comparisons != 0 || pc.std_unordered_comparisons < pc.lookups) {
      std::cerr << "static_maps_bench: probe check failed for " << bench::to_string(d) << "\n";
      return 3;
    }
  }

  std::vector<bench::bench_row> rows;
  try {
    for (bench::demo d : demos) {
      auto r = bench::run_demo(d, data, impls, seed, sizes);
      rows.insert(rows.end(), r.begin(), r.end());
    }
  } catch (const bench::checksum_mismatch& e) {
    std::cerr << "static_maps_bench: " << e.what() << "\n";
    return 3;
  }

  if (file.empty()) {
    bench::write_csv(std::cout, rows);
  } else {
    std::ofstream f(file);
    bench::write_csv(f, rows);
    if (!f) {
      std::cerr << "static_maps_bench: cannot write " << file << "\n";
      return 1;
    }
  }
  return 0;
}
