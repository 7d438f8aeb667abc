#include <gtest/gtest.h>

#include "csize/harness.hpp"
#include "csize/lin_checker.hpp"

using namespace csize;

namespace {

SetOptions opts() {
  SetOptions o;
  o.max_threads = 8;
  return o;
}

// T0 inserts 1 and stalls after linking it; T1 then sees it and asks for the size.
Schedule contains_then_size() {
  Schedule s;
  s.threads = {{{OpType::Insert, 1}}, {{OpType::Contains, 1}, {OpType::Size, 0}}};
  s.steps = {parse_step("0:insert.after_link"), parse_step("1:end"), parse_step("1:end")};
  return s;
}

// T0 inserts 1 and stalls after linking; T1 deletes 1 completely; T2 asks for the size.
Schedule delete_overtakes_insert() {
  Schedule s;
  s.threads = {{{OpType::Insert, 1}}, {{OpType::Delete, 1}}, {{OpType::Size, 0}}};
  s.steps = {parse_step("0:insert.after_link"), parse_step("1:end"), parse_step("2:end")};
  return s;
}

std::int64_t result_of(const History& h, std::uint32_t thread, OpType op) {
  for (const auto& e : h.events) {
    if (e.thread == thread && e.op == op) return e.result;
  }
  throw std::logic_error("missing event");
}

}  // namespace

TEST(ReferenceSets, SequentialSizesAreRight) {
  for (auto kind : {StructureKind::NaiveList, StructureKind::NaiveHash, StructureKind::BaselineList,
                    StructureKind::BaselineHash}) {
    auto s = make_set(kind, 64, opts());
    auto t = s->register_thread();
    for (Key k = 1; k <= 30; ++k) s->insert(t, k);
    for (Key k = 1; k <= 30; k += 3) s->remove(t, k);
    EXPECT_EQ(s->size(t), 20) << name(kind);
    EXPECT_FALSE(s->contains(t, 1));
    EXPECT_TRUE(s->contains(t, 2));
    EXPECT_EQ(s->size_calculator(), nullptr);
  }
}

TEST(ReferenceSets, ContainsThenSmallerSizeOnNaiveCounter) {
  if (!instrument::kEnabled) GTEST_SKIP();
  for (auto kind : {StructureKind::NaiveList, StructureKind::NaiveHash}) {
    auto set = make_set(kind, 4, opts());
    auto h = run_deterministic(*set, contains_then_size());
    EXPECT_EQ(result_of(h, 1, OpType::Contains), 1);
    EXPECT_EQ(result_of(h, 1, OpType::Size), 0);
    EXPECT_EQ(check_linearizable(h).verdict, Verdict::Violation);
  }
}

TEST(ReferenceSets, NegativeSizeOnNaiveCounter) {
  if (!instrument::kEnabled) GTEST_SKIP();
  for (auto kind : {StructureKind::NaiveList, StructureKind::NaiveHash}) {
    auto set = make_set(kind, 4, opts());
    auto h = run_deterministic(*set, delete_overtakes_insert());
    EXPECT_EQ(result_of(h, 1, OpType::Delete), 1);
    EXPECT_EQ(result_of(h, 2, OpType::Size), -1);
    auto r = check_linearizable(h);
    EXPECT_EQ(r.verdict, Verdict::Violation);
    EXPECT_FALSE(r.witness.empty());
  }
}

TEST(ReferenceSets, SameSchedulesAreFineWhenTransformed) {
  if (!instrument::kEnabled) GTEST_SKIP();
  for (auto kind : {StructureKind::List, StructureKind::Hash}) {
    {
      auto set = make_set(kind, 4, opts());
      auto h = run_deterministic(*set, contains_then_size());
      EXPECT_EQ(result_of(h, 1, OpType::Contains), 1);
      EXPECT_EQ(result_of(h, 1, OpType::Size), 1);
      EXPECT_EQ(check_linearizable(h).verdict, Verdict::Ok);
    }
    {
      auto set = make_set(kind, 4, opts());
      auto h = run_deterministic(*set, delete_overtakes_insert());
      EXPECT_EQ(result_of(h, 1, OpType::Delete), 1);
      EXPECT_EQ(result_of(h, 2, OpType::Size), 0);
      EXPECT_EQ(check_linearizable(h).verdict, Verdict::Ok);
    }
  }
}
