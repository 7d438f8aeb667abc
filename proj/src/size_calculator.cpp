#include "csize/size_calculator.hpp"

#include <stdexcept>
#include <thread>

#include "csize/instrumentation.hpp"

namespace csize {

namespace {

using instrument::YieldPoint;

std::atomic<std::uint64_t> g_next_epoch{1};

void finish_trace([[maybe_unused]] const CountersSnapshot* snapshot,
                  [[maybe_unused]] std::uint64_t steps, [[maybe_unused]] std::int64_t result) {
  if constexpr (instrument::kEnabled) {
    instrument::detail::tl_trace = {snapshot ? snapshot->epoch() : 0, steps};
    if (result < 0) instrument::stats().negative_sizes.fetch_add(1);
    instrument::record_max(instrument::stats().max_compute_steps, steps);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// CountersSnapshot

CountersSnapshot::CountersSnapshot(std::size_t max_threads)
    : max_threads_(max_threads),
      cells_(std::make_unique<std::atomic<std::int64_t>[]>(max_threads * 2)) {
  for (std::size_t i = 0; i < max_threads * 2; ++i) cells_[i].store(kInvalid);
  if constexpr (instrument::kEnabled) epoch_ = g_next_epoch.fetch_add(1);
}

void CountersSnapshot::add(ThreadId tid, OpKind kind, std::int64_t counter) {
  auto& cell = cells_[slot(tid, kind)];
  if (cell.load() == kInvalid) {
    auto expected = kInvalid;
    cell.compare_exchange_strong(expected, counter);
  }
}

unsigned CountersSnapshot::forward(ThreadId tid, OpKind kind, std::int64_t counter) {
  auto& cell = cells_[slot(tid, kind)];
  auto seen = cell.load();
  unsigned iterations = 0;
  while (seen == kInvalid || counter > seen) {
    ++iterations;
    // on failure `seen` receives the witnessed value
    if (cell.compare_exchange_strong(seen, counter)) break;
  }
  return iterations;
}

std::int64_t CountersSnapshot::compute_size() {
  if (auto fixed = size_.load(); fixed != kInvalid) return fixed;

  std::int64_t computed = 0;
  for (std::size_t t = 0; t < max_threads_; ++t) {
    computed += cells_[t * 2 + index_of(OpKind::Insert)].load() -
                cells_[t * 2 + index_of(OpKind::Delete)].load();
  }

  if (auto fixed = size_.load(); fixed != kInvalid) return fixed;
  auto witnessed = kInvalid;
  if (size_.compare_exchange_strong(witnessed, computed)) return computed;
  return witnessed;
}

// ---------------------------------------------------------------------------
// SizeCalculator

SizeCalculator::SizeCalculator(std::size_t max_threads, EpochDomain& domain,
                               SizeCalculatorOptions options)
    : max_threads_(max_threads), domain_(domain), options_(options) {
  if (max_threads == 0) throw std::invalid_argument("SizeCalculator: max_threads must be positive");
  if (max_threads > domain.max_threads()) {
    throw std::invalid_argument("SizeCalculator: epoch domain has fewer slots than max_threads");
  }
  rows_ = std::make_unique<Row[]>(max_threads);
  // A closed dummy, so the first compute() announces a fresh instance.
  auto* dummy = new CountersSnapshot(max_threads);
  dummy->finish_collecting();
  announced_.store(dummy);
}

SizeCalculator::~SizeCalculator() { delete announced_.load(); }

std::unique_ptr<UpdateInfo> SizeCalculator::create_update_info(ThreadId caller, OpKind kind) const {
  return std::make_unique<UpdateInfo>(
      UpdateInfo{caller, rows_[caller.index()].counters[index_of(kind)].load() + 1});
}

void SizeCalculator::update_metadata(const UpdateInfo& info, OpKind kind) {
  auto& counter = rows_[info.tid.index()].counters[index_of(kind)];
  const auto target = info.counter;

  // A failed CAS means some other helper already made this exact step.
  if (counter.load() == target - 1) {
    auto expected = target - 1;
    counter.compare_exchange_strong(expected, target);
  }
  instrument::yield_point(YieldPoint::MetadataAfterCounter);

  // Order matters: obtain the snapshot, check it is collecting, and only then
  // re-read the counter. This is what bounds forward() to two iterations.
  CountersSnapshot* current = announced_.load();
  if (current->collecting() && counter.load() == target) {
    instrument::yield_point(YieldPoint::MetadataBeforeForward);
    [[maybe_unused]] auto iterations = current->forward(info.tid, kind, target);
    if constexpr (instrument::kEnabled) {
      instrument::stats().forward_calls.fetch_add(1, std::memory_order_relaxed);
      instrument::record_max(instrument::stats().max_forward_iterations, iterations);
    }
  }
}

SizeCalculator::Obtained SizeCalculator::obtain_collecting(ThreadId caller, std::uint64_t& steps) {
  CountersSnapshot* current = announced_.load();
  ++steps;
  if (current->collecting()) {
    ++steps;
    return {current, true};
  }
  ++steps;
  auto* fresh = new CountersSnapshot(max_threads_);
  CountersSnapshot* witnessed = current;
  ++steps;
  if (announced_.compare_exchange_strong(witnessed, fresh)) {
    if constexpr (instrument::kEnabled) {
      instrument::stats().snapshots_announced.fetch_add(1, std::memory_order_relaxed);
      if (current->collecting()) instrument::stats().replaced_while_collecting.fetch_add(1);
    }
    domain_.retire(caller, current);
    return {fresh, false};
  }
  // Lost the race: adopt the instance a concurrent compute() announced.
  delete fresh;
  return {witnessed, true};
}

void SizeCalculator::collect(CountersSnapshot& target, std::uint64_t& steps) {
  for (std::size_t t = 0; t < max_threads_; ++t) {
    const ThreadId tid{static_cast<std::uint32_t>(t)};
    for (auto kind : {OpKind::Insert, OpKind::Delete}) {
      target.add(tid, kind, rows_[t].counters[index_of(kind)].load());
      steps += 2;
    }
  }
}

std::int64_t SizeCalculator::compute(ThreadId caller) {
  auto guard = domain_.pin(caller);
  std::uint64_t steps = 0;

  auto [active, adopted] = obtain_collecting(caller, steps);
  instrument::yield_point(YieldPoint::ComputeAfterObtain);

  if (adopted) {
    ++steps;
    if (auto fixed = active->size(); fixed != kInvalid) {
      finish_trace(active, steps, fixed);
      return fixed;
    }
    if (options_.backoff) {
      for (auto wait = options_.backoff_initial; wait <= options_.backoff_cap; wait *= 2) {
        std::this_thread::sleep_for(wait);
        ++steps;
        if (auto fixed = active->size(); fixed != kInvalid) {
          finish_trace(active, steps, fixed);
          return fixed;
        }
      }
    }
  }

  collect(*active, steps);
  instrument::yield_point(YieldPoint::ComputeAfterCollect);
  active->finish_collecting();
  ++steps;

  if constexpr (instrument::kEnabled) {
    // Every filled cell must be a value the metadata counter has already held.
    for (std::size_t t = 0; t < max_threads_; ++t) {
      const ThreadId tid{static_cast<std::uint32_t>(t)};
      for (auto kind : {OpKind::Insert, OpKind::Delete}) {
        auto v = active->cell(tid, kind);
        if (v != kInvalid && v > counter(tid, kind)) instrument::stats().future_witness.fetch_add(1);
      }
    }
  }

  auto result = active->compute_size();
  steps += 2 * max_threads_ + 3;
  finish_trace(active, steps, result);
  return result;
}

}  // namespace csize
