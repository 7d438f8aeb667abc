#include <gtest/gtest.h>

#include <sstream>

#include "csize/bench.hpp"

using namespace csize;

namespace {

BenchConfig quick(StructureKind kind) {
  BenchConfig c;
  c.structure = kind;
  c.workers = 1;
  c.size_threads = 0;
  c.initial_size = 100;
  c.duration_s = 0.05;
  c.warmup = 0;
  c.rounds = 2;
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Bench, KeyRange) {
  EXPECT_EQ(key_range_for(1'000'000, mix_of(Workload::UpdateHeavy)), 1'666'666);
  EXPECT_EQ(key_range_for(1'000'000, mix_of(Workload::ReadHeavy)), 1'666'666);
  EXPECT_EQ(key_range_for(0, mix_of(Workload::UpdateHeavy)), 1);
}

TEST(Bench, WorkloadMixes) {
  auto u = mix_of(Workload::UpdateHeavy);
  EXPECT_EQ(std::tuple(u.insert_pct, u.delete_pct, u.contains_pct), std::tuple(30u, 20u, 50u));
  auto r = mix_of(Workload::ReadHeavy);
  EXPECT_EQ(std::tuple(r.insert_pct, r.delete_pct, r.contains_pct), std::tuple(3u, 2u, 95u));
  EXPECT_EQ(parse_workload("read-heavy"), Workload::ReadHeavy);
  EXPECT_EQ(parse_workload("write-heavy"), std::nullopt);
}

TEST(Bench, Summary) {
  auto s = summarize({2.0, 4.0, 6.0});
  EXPECT_DOUBLE_EQ(s.mean, 4.0);
  EXPECT_DOUBLE_EQ(s.cv, 0.5);
  EXPECT_DOUBLE_EQ(summarize({3.0}).cv, 0.0);
}

TEST(Bench, SingleWorkerOnEmptyList) {
  auto c = quick(StructureKind::List);
  c.initial_size = 0;
  auto r = run_bench(c);
  ASSERT_EQ(r.rounds.size(), 2u);
  for (const auto& round : r.rounds) {
    EXPECT_GT(round.worker_mops, 0);
    EXPECT_EQ(round.size_ops, 0u);
  }
}

TEST(Bench, CsvSchemaIsStableAcrossStructures) {
  for (auto kind : {StructureKind::List, StructureKind::Hash, StructureKind::NaiveList, StructureKind::NaiveHash,
                    StructureKind::BaselineList, StructureKind::BaselineHash}) {
    auto c = quick(kind);
    c.size_threads = 1;
    std::ostringstream out;
    write_csv(out, run_bench(c));
    auto ls = lines(out.str());
    ASSERT_EQ(ls.size(), 1u + 2 + 2);
    EXPECT_EQ(ls[0], "structure,workload,workers,size_threads,round,worker_mops,size_kops");
    const std::string prefix = std::string(name(kind)) + ",update-heavy,1,1,";
    EXPECT_EQ(ls[1].rfind(prefix + "1,", 0), 0u) << ls[1];
    EXPECT_EQ(ls[2].rfind(prefix + "2,", 0), 0u) << ls[2];
    EXPECT_EQ(ls[3].rfind(prefix + "mean,", 0), 0u) << ls[3];
    EXPECT_EQ(ls[4].rfind(prefix + "cv,", 0), 0u) << ls[4];
    for (const auto& l : ls) EXPECT_EQ(std::count(l.begin(), l.end(), ','), 6) << l;
  }
}

TEST(Bench, FillsToInitialSize) {
  auto c = quick(StructureKind::Hash);
  c.initial_size = 5000;
  c.duration_s = 0.01;
  c.rounds = 1;
  c.workers = 0;
  c.size_threads = 1;
  auto r = run_bench(c);
  EXPECT_EQ(r.rounds[0].final_size, 5000);
  EXPECT_EQ(r.rounds[0].min_size, 5000);
  EXPECT_GT(r.rounds[0].size_ops, 0u);
}

TEST(Bench, SteadyStateSizeStaysNearInitial) {
  for (auto wl : {Workload::UpdateHeavy, Workload::ReadHeavy}) {
    auto c = quick(StructureKind::Hash);
    c.workload = wl;
    c.initial_size = 10'000;
    c.duration_s = 1.0;
    c.rounds = 1;
    c.workers = 2;
    c.size_threads = 1;
    auto r = run_bench(c);
    const auto final_size = r.rounds[0].final_size;
    EXPECT_GE(final_size, 8'000) << name(wl);
    EXPECT_LE(final_size, 12'000) << name(wl);
    EXPECT_GE(r.rounds[0].min_size, 0);
  }
}

TEST(Bench, Breakdown) {
  auto c = quick(StructureKind::Hash);
  c.breakdown = true;
  auto r = run_bench(c);
  for (const auto& round : r.rounds) {
    EXPECT_GT(round.type_ops[2], 0u);  // contains is half the mix
    EXPECT_EQ((round.type_ops[0] + round.type_ops[1] + round.type_ops[2]) % 100, 0u);
  }
  std::ostringstream out;
  write_breakdown_csv(out, r);
  auto ls = lines(out.str());
  ASSERT_EQ(ls.size(), 1u + 2 * 3);
  EXPECT_EQ(ls[0], "structure,workload,workers,size_threads,round,op,mops");
  EXPECT_NE(ls[1].find(",insert,"), std::string::npos);
}

TEST(Bench, OverheadComparisonShape) {
  auto c = quick(StructureKind::Hash);
  c.size_threads = 1;
  auto rows = run_overhead_comparison(c, {1, 2});
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& row : rows) {
    EXPECT_GT(row.relative_pct, 0);
    EXPECT_LE(row.relative_pct, 150);
  }
  std::ostringstream out;
  write_overhead_csv(out, rows);
  EXPECT_EQ(lines(out.str())[0], "structure,workload,workers,size_threads,baseline_mops,transformed_mops,relative_pct");
}

TEST(Bench, Validation) {
  auto c = quick(StructureKind::List);
  c.workers = 0;
  EXPECT_THROW(run_bench(c), std::invalid_argument);
  c = quick(StructureKind::List);
  c.workers = 70;
  EXPECT_THROW(run_bench(c), std::invalid_argument);
  c = quick(StructureKind::List);
  c.rounds = 0;
  EXPECT_THROW(run_bench(c), std::invalid_argument);
}
