#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "csize/any_set.hpp"
#include "csize/harness.hpp"

namespace csize {

enum class Workload : std::uint8_t { UpdateHeavy, ReadHeavy };

std::string_view name(Workload w);
std::optional<Workload> parse_workload(std::string_view text);
/// 30/20/50 for update-heavy, 3/2/95 for read-heavy.
OpMix mix_of(Workload w);

/// Keys are drawn from [1, r] with r = n * (ins + del) / ins, so that inserts
/// and deletes balance out with about n keys resident.
Key key_range_for(std::size_t initial_size, const OpMix& mix);

struct BenchConfig {
  StructureKind structure = StructureKind::Hash;
  Workload workload = Workload::UpdateHeavy;
  std::size_t workers = 1;
  std::size_t size_threads = 0;
  std::size_t initial_size = 1000;
  double duration_s = 1.0;
  std::size_t warmup = 3;
  std::size_t rounds = 5;
  std::uint64_t seed = 1;
  std::size_t max_threads = 64;
  bool breakdown = false;
  bool backoff = true;
  Reclamation reclamation = Reclamation::Deferred;
};

/// Throws std::invalid_argument on an unusable configuration.
void validate(const BenchConfig& config);

inline constexpr std::array<OpType, 3> kKeyedOps = {OpType::Insert, OpType::Delete, OpType::Contains};

struct RoundResult {
  std::size_t round = 0;  // 1-based; warmup rounds are not reported
  double seconds = 0;
  std::uint64_t worker_ops = 0;
  std::uint64_t size_ops = 0;
  double worker_mops = 0;
  double size_kops = 0;
  std::int64_t final_size = 0;
  std::int64_t min_size = 0;  // smallest value any size() call returned
  // --breakdown: operations and busy nanoseconds per keyed op type
  std::array<std::uint64_t, 3> type_ops{};
  std::array<std::int64_t, 3> type_ns{};
};

struct Summary {
  double mean = 0;
  double cv = 0;  // sample standard deviation over mean; 0 for one round
};

Summary summarize(const std::vector<double>& values);

struct BenchReport {
  BenchConfig config;
  Key key_range = 0;
  std::vector<RoundResult> rounds;
  Summary worker_mops;
  Summary size_kops;
};

BenchReport run_bench(const BenchConfig& config);

inline constexpr std::string_view kBenchCsvHeader =
    "structure,workload,workers,size_threads,round,worker_mops,size_kops";
inline constexpr std::string_view kBreakdownCsvHeader =
    "structure,workload,workers,size_threads,round,op,mops";
inline constexpr std::string_view kOverheadCsvHeader =
    "structure,workload,workers,size_threads,baseline_mops,transformed_mops,relative_pct";

/// One row per measured round, then a `mean` and a `cv` row.
void write_csv(std::ostream& out, const BenchReport& report, bool header = true);
void write_breakdown_csv(std::ostream& out, const BenchReport& report, bool header = true);

struct OverheadRow {
  StructureKind structure = StructureKind::Hash;
  Workload workload = Workload::UpdateHeavy;
  std::size_t workers = 0;
  std::size_t size_threads = 0;
  double baseline_mops = 0;
  double transformed_mops = 0;
  double relative_pct = 0;
};

/// Worker throughput of config.structure (with config.size_threads size
/// threads) over its untransformed baseline (no size threads), same seed and
/// op streams, for each worker count.
std::vector<OverheadRow> run_overhead_comparison(const BenchConfig& config,
                                                 const std::vector<std::size_t>& worker_counts);

void write_overhead_csv(std::ostream& out, const std::vector<OverheadRow>& rows, bool header = true);

}  // namespace csize
