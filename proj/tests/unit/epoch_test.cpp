#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "csize/epoch.hpp"

using namespace csize;

namespace {

std::atomic<int> g_freed{0};

struct Tracked {
  ~Tracked() { g_freed.fetch_add(1); }
};

void churn(EpochDomain& d, ThreadId tid, int n) {
  for (int i = 0; i < n; ++i) {
    auto g = d.pin(tid);
    d.retire(tid, new Tracked);
  }
}

}  // namespace

TEST(EpochDomain, EventuallyFreesRetired) {
  g_freed = 0;
  EpochDomain d(2);
  churn(d, ThreadId{0}, 1000);
  EXPECT_GT(g_freed.load(), 500);
  EXPECT_EQ(static_cast<std::size_t>(1000 - g_freed.load()), d.pending());
}

TEST(EpochDomain, PinnedThreadHoldsBackReclamation) {
  g_freed = 0;
  {
    EpochDomain d(2);
    {
      auto reader = d.pin(ThreadId{1});
      churn(d, ThreadId{0}, 1000);
      EXPECT_EQ(g_freed.load(), 0);
    }
    churn(d, ThreadId{0}, 1000);
    EXPECT_GT(g_freed.load(), 1000);
  }
  EXPECT_EQ(g_freed.load(), 2000);
}

TEST(EpochDomain, PinsNest) {
  g_freed = 0;
  EpochDomain d(2);
  {
    auto outer = d.pin(ThreadId{1});
    { auto inner = d.pin(ThreadId{1}); }
    churn(d, ThreadId{0}, 500);
    EXPECT_EQ(g_freed.load(), 0);  // still pinned by `outer`
  }
  churn(d, ThreadId{0}, 500);
  EXPECT_GT(g_freed.load(), 0);
}

TEST(EpochDomain, LeakModeFreesOnlyAtDestruction) {
  g_freed = 0;
  {
    EpochDomain d(1, Reclamation::Leak);
    churn(d, ThreadId{0}, 1000);
    EXPECT_EQ(g_freed.load(), 0);
    EXPECT_EQ(d.pending(), 1000u);
    EXPECT_EQ(d.mode(), Reclamation::Leak);
  }
  EXPECT_EQ(g_freed.load(), 1000);
}

TEST(EpochDomain, ConcurrentChurnFreesEverything) {
  g_freed = 0;
  {
    EpochDomain d(4);
    std::vector<std::thread> ts;
    for (std::uint32_t t = 0; t < 4; ++t) ts.emplace_back([&, t] { churn(d, ThreadId{t}, 5000); });
    for (auto& t : ts) t.join();
  }
  EXPECT_EQ(g_freed.load(), 20000);
}
