#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "csize/any_set.hpp"
#include "csize/history.hpp"
#include "csize/instrumentation.hpp"

namespace csize {

struct PlannedOp {
  OpType op = OpType::Size;
  Key key = 0;
  friend bool operator==(const PlannedOp&, const PlannedOp&) = default;
};

/// Percentages of insert/delete/contains; must sum to 100.
struct OpMix {
  unsigned insert_pct = 30;
  unsigned delete_pct = 20;
  unsigned contains_pct = 50;
};

struct StressConfig {
  StructureKind structure = StructureKind::List;
  std::size_t workers = 2;
  std::size_t size_threads = 1;
  Key key_range = 4;  // keys drawn uniformly from [1, key_range]
  OpMix mix{};
  std::size_t ops_per_worker = 50;
  std::size_t size_ops_per_thread = 20;
  std::uint64_t seed = 1;
  std::size_t prefill = 0;  // keys 1..prefill present before the run
  /// Chance of yielding the CPU between operations and, in instrumented
  /// builds, at every yield point inside them.
  double yield_probability = 0.0;
  std::size_t max_threads = 8;
  Reclamation reclamation = Reclamation::Deferred;
  bool backoff = true;
};

/// Throws std::invalid_argument on an unusable configuration.
void validate(const StressConfig& config);

/// The per-worker operation streams a run with this config executes; a pure
/// function of the config (seed included).
std::vector<std::vector<PlannedOp>> plan_workers(const StressConfig& config);

/// Runs workers and size threads concurrently against a fresh structure and
/// records every operation with steady-clock timestamps. Threads are numbered
/// workers first, then size threads.
History run_stress(const StressConfig& config);

// ---------------------------------------------------------------------------
// Deterministic interleavings

/// Resume `thread` and let it run until it reaches `until`, or until its
/// current operation returns, whichever comes first. `until == nullopt` runs
/// the current operation to completion.
struct ScheduleStep {
  std::size_t thread = 0;
  std::optional<instrument::YieldPoint> until;
};

/// Parses "<thread>:<yield point name>" or "<thread>:end".
/// Throws std::invalid_argument for unknown yield points.
ScheduleStep parse_step(std::string_view text);

struct Schedule {
  std::vector<std::vector<PlannedOp>> threads;
  std::vector<ScheduleStep> steps;
  std::vector<Key> initial;
};

/// Executes exactly the interleaving `schedule` describes, one thread at a
/// time, then lets the remaining work finish thread by thread. Timestamps are
/// a logical clock. Requires an instrumented build for mid-operation steps.
History run_deterministic(ConcurrentSet& set, const Schedule& schedule);

struct ExploreResult {
  std::size_t runs = 0;
  bool exhaustive = true;  // false if max_runs cut the enumeration short
};

/// Enumerates every interleaving of `threads` at yield-point granularity,
/// running each on a fresh structure from `make` and passing its history and
/// final structure to `visit`.
ExploreResult explore_interleavings(
    const std::function<std::unique_ptr<ConcurrentSet>()>& make,
    const std::vector<std::vector<PlannedOp>>& threads, const std::vector<Key>& initial,
    const std::function<void(const History&, ConcurrentSet&)>& visit, std::size_t max_runs = 100'000);

}  // namespace csize
