#include "csize/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

namespace csize {

std::string_view name(Workload w) {
  return w == Workload::UpdateHeavy ? "update-heavy" : "read-heavy";
}

std::optional<Workload> parse_workload(std::string_view text) {
  if (text == "update-heavy") return Workload::UpdateHeavy;
  if (text == "read-heavy") return Workload::ReadHeavy;
  return std::nullopt;
}

OpMix mix_of(Workload w) {
  return w == Workload::UpdateHeavy ? OpMix{30, 20, 50} : OpMix{3, 2, 95};
}

Key key_range_for(std::size_t initial_size, const OpMix& mix) {
  if (mix.insert_pct == 0) throw std::invalid_argument("key range needs a nonzero insert share");
  const auto r = static_cast<Key>(initial_size) * (mix.insert_pct + mix.delete_pct) / mix.insert_pct;
  return std::max<Key>(r, 1);
}

void validate(const BenchConfig& c) {
  if (c.workers + c.size_threads == 0) throw std::invalid_argument("bench: no threads to run");
  if (c.workers + c.size_threads > c.max_threads) {
    throw std::invalid_argument("bench: workers + size threads exceed max_threads");
  }
  if (!(c.duration_s > 0)) throw std::invalid_argument("bench: duration must be positive");
  if (c.rounds == 0) throw std::invalid_argument("bench: need at least one measured round");
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() < 2 || s.mean == 0) return s;
  double sq = 0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.cv = std::sqrt(sq / static_cast<double>(values.size() - 1)) / s.mean;
  return s;
}

namespace {

constexpr std::size_t kBlock = 100;

std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t round, std::uint64_t thread) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(round), static_cast<std::uint32_t>(thread)};
  return std::mt19937_64(seq);
}

OpType pick(unsigned roll, const OpMix& mix) {
  if (roll < mix.insert_pct) return OpType::Insert;
  if (roll < mix.insert_pct + mix.delete_pct) return OpType::Delete;
  return OpType::Contains;
}

template <class Set>
bool apply(Set& set, ThreadId tid, OpType op, Key key) {
  switch (op) {
    case OpType::Insert: return set.insert(tid, key);
    case OpType::Delete: return set.remove(tid, key);
    default: return set.contains(tid, key);
  }
}

struct WorkerTally {
  std::uint64_t ops = 0;
  std::array<std::uint64_t, 3> type_ops{};
  std::array<std::int64_t, 3> type_ns{};
};

struct SizeTally {
  std::uint64_t ops = 0;
  std::int64_t min_size = std::numeric_limits<std::int64_t>::max();
};

template <class Set>
RoundResult run_round(Set& set, const BenchConfig& c, Key range, std::uint64_t round) {
  const auto mix = mix_of(c.workload);
  {
    auto tid = set.register_thread();
    auto rng = rng_for(c.seed, round, 0xF111);
    std::uniform_int_distribution<Key> key(1, range);
    std::size_t filled = 0;
    // Keys are distinct draws, so this terminates as long as n <= r.
    while (filled < c.initial_size) {
      if (set.insert(tid, key(rng))) ++filled;
    }
    set.deregister_thread(tid);
  }

  const std::size_t total = c.workers + c.size_threads;
  std::vector<ThreadId> tids;
  for (std::size_t i = 0; i < total; ++i) tids.push_back(set.register_thread());
  std::vector<WorkerTally> workers(c.workers);
  std::vector<SizeTally> sizers(c.size_threads);
  std::atomic<std::size_t> ready{0};
  std::atomic<bool> go{false};
  std::atomic<bool> stop{false};

  auto worker = [&](std::size_t i) {
    auto rng = rng_for(c.seed, round, i);
    std::uniform_int_distribution<unsigned> pct(0, 99);
    std::uniform_int_distribution<Key> key(1, range);
    auto& tally = workers[i];
    const auto tid = tids[i];
    ready.fetch_add(1);
    while (!go.load(std::memory_order_acquire)) std::this_thread::yield();
    if (!c.breakdown) {
      while (!stop.load(std::memory_order_relaxed)) {
        apply(set, tid, pick(pct(rng), mix), key(rng));
        ++tally.ops;
      }
      return;
    }
    // Blocks of a single op type, chosen with the mix's probabilities.
    while (!stop.load(std::memory_order_relaxed)) {
      const auto op = pick(pct(rng), mix);
      const auto start = std::chrono::steady_clock::now();
      for (std::size_t j = 0; j < kBlock; ++j) apply(set, tid, op, key(rng));
      const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
      const auto t = static_cast<std::size_t>(op);
      tally.type_ops[t] += kBlock;
      tally.type_ns[t] += ns;
      tally.ops += kBlock;
    }
  };

  auto sizer = [&](std::size_t i) {
    auto& tally = sizers[i];
    const auto tid = tids[c.workers + i];
    ready.fetch_add(1);
    while (!go.load(std::memory_order_acquire)) std::this_thread::yield();
    while (!stop.load(std::memory_order_relaxed)) {
      tally.min_size = std::min(tally.min_size, set.size(tid));
      ++tally.ops;
    }
  };

  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < c.workers; ++i) threads.emplace_back(worker, i);
  for (std::size_t i = 0; i < c.size_threads; ++i) threads.emplace_back(sizer, i);
  while (ready.load() < total) std::this_thread::yield();

  const auto start = std::chrono::steady_clock::now();
  go.store(true, std::memory_order_release);
  std::this_thread::sleep_for(std::chrono::duration<double>(c.duration_s));
  stop.store(true);
  for (auto& t : threads) t.join();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  RoundResult r;
  r.seconds = seconds;
  for (const auto& w : workers) {
    r.worker_ops += w.ops;
    for (std::size_t t = 0; t < 3; ++t) {
      r.type_ops[t] += w.type_ops[t];
      r.type_ns[t] += w.type_ns[t];
    }
  }
  r.min_size = std::numeric_limits<std::int64_t>::max();
  for (const auto& s : sizers) {
    r.size_ops += s.ops;
    r.min_size = std::min(r.min_size, s.min_size);
  }
  r.worker_mops = static_cast<double>(r.worker_ops) / seconds / 1e6;
  r.size_kops = static_cast<double>(r.size_ops) / seconds / 1e3;
  r.final_size = set.size(tids[0]);
  r.min_size = std::min(r.min_size, r.final_size);
  for (auto tid : tids) set.deregister_thread(tid);
  return r;
}

template <class Set, class Make>
std::vector<RoundResult> run_rounds(const BenchConfig& c, Key range, Make make) {
  std::vector<RoundResult> out;
  for (std::size_t i = 0; i < c.warmup + c.rounds; ++i) {
    auto set = make();
    auto r = run_round<Set>(*set, c, range, i);
    if (i >= c.warmup) {
      r.round = i - c.warmup + 1;
      out.push_back(r);
    }
  }
  return out;
}

std::vector<RoundResult> dispatch(const BenchConfig& c, Key range) {
  SetOptions options;
  options.max_threads = std::max(c.max_threads, c.workers + c.size_threads + 1);
  options.reclamation = c.reclamation;
  options.size.backoff = c.backoff;
  const auto expected = std::max<std::size_t>(c.initial_size, 1);
  switch (c.structure) {
    case StructureKind::List:
      return run_rounds<TransformedListSet>(c, range, [&] { return std::make_unique<TransformedListSet>(options); });
    case StructureKind::Hash:
      return run_rounds<TransformedHashSet>(
          c, range, [&] { return std::make_unique<TransformedHashSet>(expected, options); });
    case StructureKind::NaiveList:
      return run_rounds<NaiveCounterListSet>(c, range, [&] { return std::make_unique<NaiveCounterListSet>(options); });
    case StructureKind::NaiveHash:
      return run_rounds<NaiveCounterHashSet>(
          c, range, [&] { return std::make_unique<NaiveCounterHashSet>(expected, options); });
    case StructureKind::BaselineList:
      return run_rounds<TraversalSizeListSet>(c, range, [&] { return std::make_unique<TraversalSizeListSet>(options); });
    case StructureKind::BaselineHash:
      return run_rounds<TraversalSizeHashSet>(
          c, range, [&] { return std::make_unique<TraversalSizeHashSet>(expected, options); });
  }
  throw std::invalid_argument("unknown structure kind");
}

void row_prefix(std::ostream& out, const BenchConfig& c) {
  out << name(c.structure) << ',' << name(c.workload) << ',' << c.workers << ',' << c.size_threads << ',';
}

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
  validate(config);
  BenchReport report;
  report.config = config;
  report.key_range = key_range_for(config.initial_size, mix_of(config.workload));
  report.rounds = dispatch(config, report.key_range);
  std::vector<double> w, s;
  for (const auto& r : report.rounds) {
    w.push_back(r.worker_mops);
    s.push_back(r.size_kops);
  }
  report.worker_mops = summarize(w);
  report.size_kops = summarize(s);
  return report;
}

void write_csv(std::ostream& out, const BenchReport& report, bool header) {
  if (header) out << kBenchCsvHeader << '\n';
  const auto& c = report.config;
  out << std::fixed << std::setprecision(6);
  for (const auto& r : report.rounds) {
    row_prefix(out, c);
    out << r.round << ',' << r.worker_mops << ',' << r.size_kops << '\n';
  }
  row_prefix(out, c);
  out << "mean," << report.worker_mops.mean << ',' << report.size_kops.mean << '\n';
  row_prefix(out, c);
  out << "cv," << report.worker_mops.cv << ',' << report.size_kops.cv << '\n';
  out << std::defaultfloat;
}

void write_breakdown_csv(std::ostream& out, const BenchReport& report, bool header) {
  if (header) out << kBreakdownCsvHeader << '\n';
  out << std::fixed << std::setprecision(6);
  for (const auto& r : report.rounds) {
    for (std::size_t t = 0; t < kKeyedOps.size(); ++t) {
      row_prefix(out, report.config);
      const double mops = r.type_ns[t] > 0 ? static_cast<double>(r.type_ops[t]) * 1e3 / static_cast<double>(r.type_ns[t]) : 0.0;
      out << r.round << ',' << name(kKeyedOps[t]) << ',' << mops << '\n';
    }
  }
  out << std::defaultfloat;
}

std::vector<OverheadRow> run_overhead_comparison(const BenchConfig& config,
                                                 const std::vector<std::size_t>& worker_counts) {
  std::vector<OverheadRow> rows;
  for (auto workers : worker_counts) {
    auto base = config;
    base.structure = baseline_of(config.structure);
    base.workers = workers;
    base.size_threads = 0;
    auto transformed = config;
    transformed.workers = workers;
    const auto b = run_bench(base);
    const auto t = run_bench(transformed);
    OverheadRow row;
    row.structure = config.structure;
    row.workload = config.workload;
    row.workers = workers;
    row.size_threads = config.size_threads;
    row.baseline_mops = b.worker_mops.mean;
    row.transformed_mops = t.worker_mops.mean;
    row.relative_pct = b.worker_mops.mean > 0 ? 100.0 * t.worker_mops.mean / b.worker_mops.mean : 0.0;
    rows.push_back(row);
  }
  return rows;
}

void write_overhead_csv(std::ostream& out, const std::vector<OverheadRow>& rows, bool header) {
  if (header) out << kOverheadCsvHeader << '\n';
  out << std::fixed << std::setprecision(6);
  for (const auto& r : rows) {
    out << name(r.structure) << ',' << name(r.workload) << ',' << r.workers << ',' << r.size_threads << ','
        << r.baseline_mops << ',' << r.transformed_mops << ',' << std::setprecision(2) << r.relative_pct
        << std::setprecision(6) << '\n';
  }
  out << std::defaultfloat;
}

}  // namespace csize
