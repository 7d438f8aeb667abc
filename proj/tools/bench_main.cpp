// csize-bench: throughput of the concurrent sets under a mixed workload, as CSV.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "csize/bench.hpp"

int main(int argc, char** argv) {
  using namespace csize;
  CLI::App app{"Concurrent set throughput benchmark"};

  BenchConfig config;
  std::string structure = "hash";
  std::string workload = "update-heavy";
  std::string backoff = "on";
  std::string reclamation = "defer";
  std::string out;
  bool overhead = false;
  std::vector<std::size_t> worker_counts{1, 2, 4, 8};

  app.add_option("--structure", structure, "list, hash, naive-list, naive-hash, baseline-list, baseline-hash")
      ->capture_default_str();
  app.add_option("--workload", workload, "update-heavy (30/20/50) or read-heavy (3/2/95)")
      ->capture_default_str();
  app.add_option("--workers", config.workers)->capture_default_str();
  app.add_option("--size-threads", config.size_threads)->capture_default_str();
  app.add_option("--initial-size", config.initial_size)->capture_default_str();
  app.add_option("--duration", config.duration_s, "seconds per round")->capture_default_str();
  app.add_option("--warmup", config.warmup, "unreported rounds before measuring")->capture_default_str();
  app.add_option("--rounds", config.rounds, "measured rounds")->capture_default_str();
  app.add_option("--seed", config.seed)->capture_default_str();
  app.add_option("--max-threads", config.max_threads)->capture_default_str();
  app.add_option("--out", out, "CSV path (default: stdout)");
  app.add_flag("--breakdown", config.breakdown, "per-op-type throughput from uniform blocks of 100 ops");
  app.add_option("--backoff", backoff)->check(CLI::IsMember({"on", "off"}))->capture_default_str();
  app.add_option("--reclamation", reclamation)->check(CLI::IsMember({"defer", "leak"}))->capture_default_str();
  app.add_flag("--overhead", overhead, "compare against the untransformed baseline");
  app.add_option("--worker-counts", worker_counts, "worker counts for --overhead")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  auto kind = parse_structure(structure);
  if (!kind) {
    std::cerr << "unknown structure '" << structure << "'\n";
    return 2;
  }
  auto wl = parse_workload(workload);
  if (!wl) {
    std::cerr << "unknown workload '" << workload << "'\n";
    return 2;
  }
  config.structure = *kind;
  config.workload = *wl;
  config.backoff = backoff == "on";
  config.reclamation = reclamation == "leak" ? Reclamation::Leak : Reclamation::Deferred;

  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) {
      std::cerr << "cannot write " << out << '\n';
      return 2;
    }
  }
  std::ostream& csv = out.empty() ? std::cout : file;

  try {
    if (overhead) {
      write_overhead_csv(csv, run_overhead_comparison(config, worker_counts));
      return 0;
    }
    const auto report = run_bench(config);
    write_csv(csv, report);
    if (config.breakdown) {
      if (out.empty()) {
        std::cout << '\n';
        write_breakdown_csv(std::cout, report);
      } else {
        auto path = std::filesystem::path(out);
        path.replace_extension(".breakdown.csv");
        std::ofstream b(path);
        write_breakdown_csv(b, report);
      }
    }
    std::int64_t min_size = report.rounds.front().min_size;
    for (const auto& r : report.rounds) min_size = std::min(min_size, r.min_size);
    std::cerr << "key range " << report.key_range << ", final size " << report.rounds.back().final_size
              << ", smallest size() " << min_size << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
