#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>

#include "csize/epoch.hpp"
#include "csize/types.hpp"

namespace csize {

/// Published by a successful insert or delete so that any thread can finish
/// its metadata update: bring counter row `tid` (of the op's kind) to `counter`.
struct UpdateInfo {
  const ThreadId tid;
  const std::int64_t counter;
};

/// One size-computation epoch. Concurrent size calls that land on the same
/// instance agree on the same result.
class CountersSnapshot {
 public:
  explicit CountersSnapshot(std::size_t max_threads);

  /// Fills the cell with `counter` only if nobody has filled it yet.
  void add(ThreadId tid, OpKind kind, std::int64_t counter);

  /// Raises the cell to at least `counter`. Returns the number of CAS attempts,
  /// which never exceeds two when called from SizeCalculator::update_metadata.
  unsigned forward(ThreadId tid, OpKind kind, std::int64_t counter);

  /// Sum of insert cells minus sum of delete cells, fixed by the first caller
  /// to publish it. Requires the collection to be complete.
  std::int64_t compute_size();

  bool collecting() const noexcept { return collecting_.load(); }
  /// Returns true if this call is the one that ended the collection.
  bool finish_collecting() noexcept { return collecting_.exchange(false); }
  std::int64_t size() const noexcept { return size_.load(); }
  std::int64_t cell(ThreadId tid, OpKind kind) const noexcept {
    return cells_[slot(tid, kind)].load();
  }
  std::size_t max_threads() const noexcept { return max_threads_; }
  /// Unique per instance in instrumented builds, 0 otherwise.
  std::uint64_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t slot(ThreadId tid, OpKind kind) const noexcept {
    return tid.index() * 2 + index_of(kind);
  }

  std::size_t max_threads_;
  std::unique_ptr<std::atomic<std::int64_t>[]> cells_;
  std::atomic<bool> collecting_{true};
  std::atomic<std::int64_t> size_{kInvalid};
  std::uint64_t epoch_ = 0;
};

struct SizeCalculatorOptions {
  /// Exponential backoff when compute() joins a collection someone else
  /// announced, giving that caller a chance to publish the size first.
  bool backoff = true;
  std::chrono::microseconds backoff_initial{1};
  std::chrono::microseconds backoff_cap{128};
};

/// Per-thread insert/delete counters plus the currently announced
/// CountersSnapshot. Yields a linearizable size in O(max_threads) steps.
///
/// update_metadata() dereferences the announced snapshot and must therefore
/// run while the caller holds a pin on `domain`; the set operations always do.
class SizeCalculator {
 public:
  SizeCalculator(std::size_t max_threads, EpochDomain& domain, SizeCalculatorOptions options = {});
  ~SizeCalculator();

  SizeCalculator(const SizeCalculator&) = delete;
  SizeCalculator& operator=(const SizeCalculator&) = delete;

  /// Must be called by the thread registered as `caller`.
  std::unique_ptr<UpdateInfo> create_update_info(ThreadId caller, OpKind kind) const;

  /// Idempotent; safe to call from the owning thread and any number of helpers.
  void update_metadata(const UpdateInfo& info, OpKind kind);

  /// Wait-free linearizable size.
  std::int64_t compute(ThreadId caller);

  std::int64_t counter(ThreadId tid, OpKind kind) const noexcept {
    return rows_[tid.index()].counters[index_of(kind)].load();
  }
  std::size_t max_threads() const noexcept { return max_threads_; }
  const SizeCalculatorOptions& options() const noexcept { return options_; }
  void set_backoff(bool enabled) noexcept { options_.backoff = enabled; }
  /// The currently announced instance. Caller must hold a pin.
  const CountersSnapshot* announced() const noexcept { return announced_.load(); }

 private:
  // One cache-line-isolated row per thread.
  struct alignas(128) Row {
    std::atomic<std::int64_t> counters[2] = {0, 0};
  };

  struct Obtained {
    CountersSnapshot* snapshot;
    bool adopted;  // announced by another compute() call
  };

  Obtained obtain_collecting(ThreadId caller, std::uint64_t& steps);
  void collect(CountersSnapshot& target, std::uint64_t& steps);

  std::size_t max_threads_;
  EpochDomain& domain_;
  SizeCalculatorOptions options_;
  std::unique_ptr<Row[]> rows_;
  alignas(128) std::atomic<CountersSnapshot*> announced_;
};

}  // namespace csize
