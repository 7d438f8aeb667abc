#include <gtest/gtest.h>

#include <random>

#include "csize/hash_set.hpp"
#include "csize/instrumentation.hpp"
#include "oracles.hpp"

using namespace csize;

TEST(TransformedHashSet, TableSizes) {
  SetOptions o;
  o.max_threads = 64;
  EXPECT_EQ(TransformedHashSet(1'000'000, o).table_size(), std::size_t{1} << 20);
  EXPECT_EQ(TransformedHashSet(1, SetOptions{1}).table_size(), 1u);
  EXPECT_EQ(TransformedHashSet(3, SetOptions{2}).table_size(), 4u);
  EXPECT_EQ(table_size_for(1024), 1024u);
  EXPECT_EQ(table_size_for(1025), 2048u);
}

TEST(TransformedHashSet, RejectsBadArguments) {
  EXPECT_THROW(TransformedHashSet(0), std::invalid_argument);
  SetOptions zero;
  zero.max_threads = 0;
  EXPECT_THROW(TransformedHashSet(4, zero), std::invalid_argument);
}

// Table size always lands in [n, 2n).
TEST(TransformedHashSet, TableSizeWithinFactorTwo) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const auto n = std::uniform_int_distribution<std::size_t>(1, 1u << 30)(rng);
    const auto t = table_size_for(n);
    EXPECT_GE(t, n);
    EXPECT_LT(t, 2 * n);
    EXPECT_EQ(t & (t - 1), 0u);
  }
}

TEST(TransformedHashSet, BucketsInRange) {
  std::mt19937_64 rng(3);
  for (std::size_t table : {std::size_t{1}, std::size_t{2}, std::size_t{64}, std::size_t{1} << 20}) {
    for (int i = 0; i < 1000; ++i) {
      EXPECT_LT(fibonacci_bucket(static_cast<Key>(rng()), table), table);
    }
  }
}

TEST(TransformedHashSet, SequentialFill) {
  TransformedHashSet s(128, SetOptions{4});
  auto t = s.register_thread();
  for (Key k = 1; k <= 100; ++k) EXPECT_TRUE(s.insert(t, k));
  EXPECT_EQ(s.size(t), 100);
  EXPECT_EQ(s.validate(), std::nullopt);
}

TEST(TransformedHashSet, CollidingKeysBehaveLikeList) {
  TransformedHashSet s(64, SetOptions{4});
  auto t = s.register_thread();
  std::vector<Key> same;
  for (Key k = 1; same.size() < 20; ++k) {
    if (s.bucket(k) == s.bucket(1)) same.push_back(k);
  }
  oracle::SequentialSet o;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 3000; ++i) {
    const Key k = same[rng() % same.size()];
    switch (rng() % 4) {
      case 0: ASSERT_EQ(s.insert(t, k), o.insert(k)); break;
      case 1: ASSERT_EQ(s.remove(t, k), o.remove(k)); break;
      case 2: ASSERT_EQ(s.contains(t, k), o.contains(k)); break;
      default: ASSERT_EQ(s.size(t), o.size()); break;
    }
  }
  EXPECT_EQ(s.validate(), std::nullopt);
}

TEST(TransformedHashSet, MatchesSequentialOracle) {
  std::mt19937_64 rng(5);
  TransformedHashSet s(256, SetOptions{4});
  oracle::SequentialSet o;
  auto t = s.register_thread();
  std::uniform_int_distribution<Key> key(-300, 300);
  for (int i = 0; i < 50000; ++i) {
    const Key k = key(rng);
    switch (rng() % 4) {
      case 0: ASSERT_EQ(s.insert(t, k), o.insert(k)); break;
      case 1: ASSERT_EQ(s.remove(t, k), o.remove(k)); break;
      case 2: ASSERT_EQ(s.contains(t, k), o.contains(k)); break;
      default: ASSERT_EQ(s.size(t), o.size()); break;
    }
  }
  EXPECT_EQ(static_cast<std::int64_t>(s.count_unmarked()), o.size());
}

TEST(TransformedHashSet, SizeStepsIndependentOfElementCount) {
  if (!instrument::kEnabled) GTEST_SKIP();
  std::vector<std::uint64_t> steps;
  for (std::size_t n : {1'000u, 100'000u}) {
    TransformedHashSet s(n, SetOptions{8});
    auto t = s.register_thread();
    for (Key k = 1; k <= static_cast<Key>(n); ++k) s.insert(t, k);
    EXPECT_EQ(s.size(t), static_cast<std::int64_t>(n));
    steps.push_back(instrument::last_compute().steps);
  }
  EXPECT_EQ(steps[0], steps[1]);
}
