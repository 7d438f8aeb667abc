#include <gtest/gtest.h>

#include <map>

#include "csize/harness.hpp"
#include "csize/lin_checker.hpp"

using namespace csize;

namespace {

std::map<std::uint32_t, std::vector<Event>> by_thread(const History& h) {
  std::map<std::uint32_t, std::vector<Event>> out;
  for (const auto& e : h.events) out[e.thread].push_back(e);
  return out;
}

}  // namespace

TEST(Stress, ShapeOfASmallRun) {
  StressConfig c;
  c.workers = 2;
  c.size_threads = 1;
  c.key_range = 4;
  c.ops_per_worker = 100;
  auto h = run_stress(c);
  EXPECT_GE(h.events.size(), 200u);
  for (const auto& e : h.events) {
    EXPECT_LT(e.invoke_ns, e.response_ns);
    if (e.op != OpType::Size) {
      EXPECT_GE(e.arg, 1);
      EXPECT_LE(e.arg, 4);
    }
  }
  for (const auto& [thread, events] : by_thread(h)) {
    for (std::size_t i = 1; i < events.size(); ++i) EXPECT_LT(events[i - 1].response_ns, events[i].invoke_ns);
  }
  EXPECT_EQ(h.config.at("seed"), "1");
  EXPECT_EQ(h.config.at("key_range"), "4");
}

TEST(Stress, SizeOnlyRunSeesInitialCardinality) {
  StressConfig c;
  c.workers = 0;
  c.size_threads = 1;
  c.key_range = 8;
  c.prefill = 5;
  auto h = run_stress(c);
  ASSERT_EQ(h.events.size(), c.size_ops_per_thread);
  for (const auto& e : h.events) EXPECT_EQ(e.result, 5);
}

TEST(Stress, SeedFixesOpStreams) {
  StressConfig c;
  c.workers = 3;
  c.seed = 42;
  EXPECT_EQ(plan_workers(c), plan_workers(c));
  auto a = by_thread(run_stress(c));
  auto b = by_thread(run_stress(c));
  for (std::uint32_t t = 0; t < 3; ++t) {
    ASSERT_EQ(a[t].size(), b[t].size());
    for (std::size_t i = 0; i < a[t].size(); ++i) {
      EXPECT_EQ(a[t][i].op, b[t][i].op);
      EXPECT_EQ(a[t][i].arg, b[t][i].arg);
    }
  }
  c.seed = 43;
  EXPECT_NE(plan_workers(c), plan_workers(StressConfig{}));
}

TEST(Stress, PlannedMixFollowsPercentages) {
  StressConfig c;
  c.workers = 1;
  c.ops_per_worker = 100'000;
  c.mix = {3, 2, 95};
  std::map<OpType, std::size_t> count;
  const auto plans = plan_workers(c);
  for (const auto& op : plans[0]) ++count[op.op];
  EXPECT_NEAR(count[OpType::Insert] / 1000.0, 3.0, 0.3);
  EXPECT_NEAR(count[OpType::Delete] / 1000.0, 2.0, 0.3);
  EXPECT_NEAR(count[OpType::Contains] / 1000.0, 95.0, 0.5);
}

TEST(Stress, ConfigValidation) {
  StressConfig c;
  c.workers = 0;
  c.size_threads = 0;
  EXPECT_THROW(run_stress(c), std::invalid_argument);
  c = {};
  c.workers = 8;
  c.size_threads = 1;
  EXPECT_THROW(run_stress(c), std::invalid_argument);
  c = {};
  c.mix = {50, 50, 50};
  EXPECT_THROW(run_stress(c), std::invalid_argument);
  c = {};
  c.key_range = 0;
  EXPECT_THROW(run_stress(c), std::invalid_argument);
  c = {};
  c.prefill = 10;
  EXPECT_THROW(run_stress(c), std::invalid_argument);
}

TEST(Stress, HistoriesAreLinearizable) {
  for (auto kind : {StructureKind::List, StructureKind::Hash}) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      StressConfig c;
      c.structure = kind;
      c.workers = 2 + seed % 3;
      c.seed = seed;
      c.yield_probability = 0.2;
      auto h = run_stress(c);
      ASSERT_EQ(check_linearizable(h).verdict, Verdict::Ok) << name(kind) << " seed " << seed;
    }
  }
}

TEST(Schedule, ParseStep) {
  auto s = parse_step("2:insert.after_link");
  EXPECT_EQ(s.thread, 2u);
  EXPECT_EQ(s.until, instrument::YieldPoint::InsertAfterLink);
  auto e = parse_step("0:end");
  EXPECT_FALSE(e.until.has_value());
  EXPECT_THROW(parse_step("0:insert.sideways"), std::invalid_argument);
  EXPECT_THROW(parse_step("insert.after_link"), std::invalid_argument);
  EXPECT_THROW(parse_step("x:end"), std::invalid_argument);
}

TEST(Schedule, EveryYieldPointNameParses) {
  for (std::size_t i = 0; i < static_cast<std::size_t>(instrument::YieldPoint::kCount); ++i) {
    auto p = static_cast<instrument::YieldPoint>(i);
    EXPECT_EQ(instrument::parse_yield_point(instrument::name(p)), p);
  }
}

TEST(Schedule, EmptyScheduleGivesEmptyHistory) {
  auto set = make_set(StructureKind::List, 1, SetOptions{4});
  auto h = run_deterministic(*set, Schedule{});
  EXPECT_TRUE(h.events.empty());
}

TEST(Schedule, UnscriptedWorkRunsThreadByThread) {
  auto set = make_set(StructureKind::List, 1, SetOptions{4});
  Schedule s;
  s.threads = {{{OpType::Insert, 1}, {OpType::Insert, 2}}, {{OpType::Size, 0}}};
  auto h = run_deterministic(*set, s);
  ASSERT_EQ(h.events.size(), 3u);
  EXPECT_EQ(h.events[2].op, OpType::Size);
  EXPECT_EQ(h.events[2].result, 2);
  EXPECT_EQ(h.events[0].invoke_ns, 1);
  EXPECT_EQ(h.events[2].response_ns, 6);
}

TEST(Schedule, StepForUnknownOrFinishedThread) {
  auto set = make_set(StructureKind::List, 1, SetOptions{4});
  Schedule s;
  s.threads = {{{OpType::Insert, 1}}};
  s.steps = {parse_step("1:end")};
  EXPECT_THROW(run_deterministic(*set, s), std::invalid_argument);
  s.steps = {parse_step("0:end"), parse_step("0:end")};
  EXPECT_THROW(run_deterministic(*set, s), std::invalid_argument);
}

TEST(Schedule, StopsAtNamedPoint) {
  if (!instrument::kEnabled) GTEST_SKIP();
  auto set = make_set(StructureKind::List, 1, SetOptions{4});
  Schedule s;
  // Stalled after linking but before the metadata update, the insert is not
  // visible to size() yet... until contains helps it.
  s.threads = {{{OpType::Insert, 1}}, {{OpType::Size, 0}, {OpType::Contains, 1}, {OpType::Size, 0}}};
  s.steps = {parse_step("0:insert.after_link"), parse_step("1:end"), parse_step("1:end"), parse_step("1:end")};
  auto h = run_deterministic(*set, s);
  std::vector<std::int64_t> t1;
  for (const auto& e : h.events) {
    if (e.thread == 1) t1.push_back(e.result);
  }
  EXPECT_EQ(t1, (std::vector<std::int64_t>{0, 1, 1}));
}

TEST(Explore, CountsAllInterleavingsOfOpBoundaries) {
  // Without yield points inside operations (size on a reference set has
  // none), two threads of two ops each interleave in C(4,2) = 6 ways.
  std::size_t runs = 0;
  auto r = explore_interleavings(
      [] { return make_set(StructureKind::BaselineList, 1, SetOptions{4}); },
      {{{OpType::Size, 0}, {OpType::Size, 0}}, {{OpType::Size, 0}, {OpType::Size, 0}}}, {},
      [&](const History&, ConcurrentSet&) { ++runs; });
  EXPECT_TRUE(r.exhaustive);
  EXPECT_EQ(r.runs, 6u);
  EXPECT_EQ(runs, 6u);
}

TEST(Explore, RespectsRunLimit) {
  auto r = explore_interleavings(
      [] { return make_set(StructureKind::BaselineList, 1, SetOptions{4}); },
      {{{OpType::Size, 0}, {OpType::Size, 0}}, {{OpType::Size, 0}, {OpType::Size, 0}}}, {},
      [](const History&, ConcurrentSet&) {}, 4);
  EXPECT_FALSE(r.exhaustive);
  EXPECT_EQ(r.runs, 4u);
}
