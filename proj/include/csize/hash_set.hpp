#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "csize/list_set.hpp"

namespace csize {

/// Smallest power of two >= expected_elements.
inline std::size_t table_size_for(std::size_t expected_elements) {
  if (expected_elements == 0) throw std::invalid_argument("expected_elements must be positive");
  return std::bit_ceil(expected_elements);
}

/// Fibonacci hashing: multiply by 2^64/phi and keep the top log2(table) bits.
inline std::size_t fibonacci_bucket(Key key, std::size_t table_size) noexcept {
  if (table_size <= 1) return 0;
  const auto shift = 64 - std::countr_zero(table_size);
  return static_cast<std::size_t>((static_cast<std::uint64_t>(key) * 0x9E3779B97F4A7C15ull) >> shift);
}

/// Fixed-size table of transformed lists that share one SizeCalculator, so
/// size() never looks at the buckets.
class TransformedHashSet {
 public:
  TransformedHashSet(std::size_t expected_elements, const SetOptions& options = {})
      : core_(table_size_for(expected_elements), options) {}

  ThreadId register_thread() { return core_.registry().acquire(); }
  void deregister_thread(ThreadId tid) { core_.registry().release(tid); }
  ThreadRegistry& registry() noexcept { return core_.registry(); }

  bool insert(ThreadId caller, Key key) { return core_.insert(caller, bucket(key), key); }
  bool remove(ThreadId caller, Key key) { return core_.remove(caller, bucket(key), key); }
  bool contains(ThreadId caller, Key key) { return core_.contains(caller, bucket(key), key); }
  std::int64_t size(ThreadId caller) { return core_.size(caller); }

  std::size_t table_size() const noexcept { return core_.bucket_count(); }
  std::size_t bucket(Key key) const noexcept { return fibonacci_bucket(key, core_.bucket_count()); }
  SizeCalculator& size_calculator() noexcept { return core_.calculator(); }
  EpochDomain& epoch_domain() noexcept { return core_.domain(); }
  std::optional<std::string> validate() const { return core_.validate(&fibonacci_bucket); }
  std::size_t count_unmarked() const { return core_.count_unmarked(); }

 private:
  detail::TransformedCore core_;
};

}  // namespace csize
