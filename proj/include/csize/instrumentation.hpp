#pragma once

// Test-only hooks compiled in when CSIZE_INSTRUMENTED is non-zero. The plain
// library target builds with the macro at 0, where every hook below folds to
// nothing.

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <string_view>

#ifndef CSIZE_INSTRUMENTED
#define CSIZE_INSTRUMENTED 0
#endif

namespace csize::instrument {

inline constexpr bool kEnabled = CSIZE_INSTRUMENTED != 0;

/// Named places inside the set operations where a deterministic scheduler may
/// suspend the calling thread.
enum class YieldPoint : std::uint8_t {
  // transformed sets
  InsertBeforeLink,
  InsertAfterLink,
  InsertAfterMetadata,
  DeleteBeforeClaim,
  DeleteAfterMark,
  DeleteAfterMetadata,
  SearchBeforeUnlink,
  ContainsAfterSearch,
  // size_core
  MetadataAfterCounter,
  MetadataBeforeForward,
  ComputeAfterObtain,
  ComputeAfterCollect,
  // reference sets (their inserts also use InsertAfterLink)
  NaiveDeleteAfterUnlink,
  kCount,
};

inline constexpr std::array<std::string_view, static_cast<std::size_t>(YieldPoint::kCount)>
    kYieldPointNames = {
        "insert.before_link",   "insert.after_link",    "insert.after_metadata",
        "delete.before_claim",  "delete.after_mark",    "delete.after_metadata",
        "search.before_unlink", "contains.after_search", "metadata.after_counter",
        "metadata.before_forward", "compute.after_obtain", "compute.after_collect",
        "naive.delete.after_unlink",
};

constexpr std::string_view name(YieldPoint p) {
  return kYieldPointNames[static_cast<std::size_t>(p)];
}

constexpr std::optional<YieldPoint> parse_yield_point(std::string_view text) {
  for (std::size_t i = 0; i < kYieldPointNames.size(); ++i) {
    if (kYieldPointNames[i] == text) return static_cast<YieldPoint>(i);
  }
  return std::nullopt;
}

class YieldListener {
 public:
  virtual ~YieldListener() = default;
  virtual void on_yield(YieldPoint point) = 0;
};

namespace detail {
inline thread_local YieldListener* tl_listener = nullptr;
}

/// Installs a listener for the current thread for the lifetime of the object.
class ScopedYieldListener {
 public:
  explicit ScopedYieldListener(YieldListener* listener) : previous_(detail::tl_listener) {
    detail::tl_listener = listener;
  }
  ~ScopedYieldListener() { detail::tl_listener = previous_; }
  ScopedYieldListener(const ScopedYieldListener&) = delete;
  ScopedYieldListener& operator=(const ScopedYieldListener&) = delete;

 private:
  YieldListener* previous_;
};

inline void yield_point([[maybe_unused]] YieldPoint point) {
  if constexpr (kEnabled) {
    if (auto* l = detail::tl_listener) l->on_yield(point);
  }
}

/// Process-wide counters for the runtime-checkable invariants.
struct Stats {
  std::atomic<std::uint64_t> forward_calls{0};
  std::atomic<std::uint64_t> max_forward_iterations{0};
  std::atomic<std::uint64_t> snapshots_announced{0};
  // an announced snapshot was replaced while its collecting flag was still set
  std::atomic<std::uint64_t> replaced_while_collecting{0};
  // a marked node was unlinked before its deletion reached the metadata
  std::atomic<std::uint64_t> unlink_before_metadata{0};
  // computeSize read a snapshot value the metadata had not yet reached
  std::atomic<std::uint64_t> future_witness{0};
  std::atomic<std::uint64_t> negative_sizes{0};
  std::atomic<std::uint64_t> max_compute_steps{0};

  void reset() {
    for (auto* c : {&forward_calls, &max_forward_iterations, &snapshots_announced,
                    &replaced_while_collecting, &unlink_before_metadata, &future_witness, &negative_sizes,
                    &max_compute_steps}) {
      c->store(0);
    }
  }
};

inline Stats& stats() {
  static Stats s;
  return s;
}

inline void record_max(std::atomic<std::uint64_t>& slot, std::uint64_t value) {
  auto cur = slot.load(std::memory_order_relaxed);
  while (value > cur && !slot.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
  }
}

/// What the calling thread's most recent SizeCalculator::compute did: which
/// CountersSnapshot it ran on and how many shared-memory steps it took.
struct ComputeTrace {
  std::uint64_t epoch = 0;
  std::uint64_t steps = 0;
};

namespace detail {
inline thread_local ComputeTrace tl_trace;
}

inline const ComputeTrace& last_compute() { return detail::tl_trace; }

}  // namespace csize::instrument
