// csize-lincheck: check recorded histories for linearizability, or record new
// ones from a stress run.
//
// Exit codes for `check`: 0 linearizable, 1 violation, 2 inconclusive or error.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "csize/harness.hpp"
#include "csize/lin_checker.hpp"

namespace {

int check(const std::string& path, std::size_t max_states, bool quiet) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot read " << path << '\n';
    return 2;
  }
  csize::History h;
  try {
    h = csize::read_history(in);
  } catch (const std::exception& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return 2;
  }
  csize::CheckLimits limits;
  limits.max_states = max_states;
  const auto result = csize::check_linearizable(h, limits);
  std::cout << path << ": " << csize::name(result.verdict) << " (" << h.events.size() << " events, "
            << result.states << " states)";
  if (!result.message.empty()) std::cout << ": " << result.message;
  std::cout << '\n';
  if (result.verdict == csize::Verdict::Violation && !quiet) {
    std::cout << "witness:\n";
    for (const auto& e : result.witness) std::cout << "  " << csize::format_event(e) << '\n';
  }
  return static_cast<int>(result.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linearizability checking for concurrent set histories"};
  app.require_subcommand(1);

  auto* check_cmd = app.add_subcommand("check", "check history files");
  std::vector<std::string> paths;
  std::size_t max_states = csize::CheckLimits{}.max_states;
  bool quiet = false;
  check_cmd->add_option("files", paths)->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--max-states", max_states)->capture_default_str();
  check_cmd->add_flag("-q,--quiet", quiet, "omit the witness");

  auto* stress_cmd = app.add_subcommand("stress", "record a history from a stress run");
  csize::StressConfig config;
  std::string structure = "list";
  std::string out;
  bool verify = false;
  stress_cmd->add_option("--structure", structure)->capture_default_str();
  stress_cmd->add_option("--workers", config.workers)->capture_default_str();
  stress_cmd->add_option("--size-threads", config.size_threads)->capture_default_str();
  stress_cmd->add_option("--key-range", config.key_range)->capture_default_str();
  stress_cmd->add_option("--ops", config.ops_per_worker, "operations per worker")->capture_default_str();
  stress_cmd->add_option("--size-ops", config.size_ops_per_thread, "size calls per size thread")
      ->capture_default_str();
  stress_cmd->add_option("--prefill", config.prefill)->capture_default_str();
  stress_cmd->add_option("--seed", config.seed)->capture_default_str();
  stress_cmd->add_option("--yield", config.yield_probability, "yield probability at each step")
      ->capture_default_str();
  stress_cmd->add_option("--out", out, "history path (default: stdout)");
  stress_cmd->add_flag("--check", verify, "check the recorded history and exit with its verdict");

  CLI11_PARSE(app, argc, argv);

  if (check_cmd->parsed()) {
    int worst = 0;
    for (const auto& p : paths) worst = std::max(worst, check(p, max_states, quiet));
    return worst;
  }

  auto kind = csize::parse_structure(structure);
  if (!kind) {
    std::cerr << "unknown structure '" << structure << "'\n";
    return 2;
  }
  config.structure = *kind;
  csize::History h;
  try {
    h = csize::run_stress(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (out.empty()) {
    csize::write_history(std::cout, h);
  } else {
    std::ofstream f(out);
    csize::write_history(f, h);
  }
  if (!verify) return 0;
  const auto result = csize::check_linearizable(h);
  std::cerr << csize::name(result.verdict) << '\n';
  return static_cast<int>(result.verdict);
}
