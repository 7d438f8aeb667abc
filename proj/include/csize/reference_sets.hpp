#pragma once

// Untransformed Harris-list sets with the two size() strategies that are not
// linearizable: a shared counter bumped after each structural update, and a
// traversal that counts unmarked nodes. The traversal variants double as the
// zero-overhead baselines for benchmarking, since their updates do no size
// bookkeeping at all.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "csize/epoch.hpp"
#include "csize/hash_set.hpp"
#include "csize/list_set.hpp"
#include "csize/thread_registry.hpp"
#include "csize/types.hpp"

namespace csize {

enum class NaiveSize : std::uint8_t { SharedCounter, Traversal };

namespace detail {

template <NaiveSize Mode>
class PlainCore {
 public:
  PlainCore(std::size_t buckets, const SetOptions& options);
  ~PlainCore();

  PlainCore(const PlainCore&) = delete;
  PlainCore& operator=(const PlainCore&) = delete;

  bool insert(ThreadId caller, std::size_t bucket, Key key);
  bool remove(ThreadId caller, std::size_t bucket, Key key);
  bool contains(ThreadId caller, std::size_t bucket, Key key);
  std::int64_t size(ThreadId caller);

  std::size_t bucket_count() const noexcept { return heads_.size(); }
  ThreadRegistry& registry() noexcept { return registry_; }
  EpochDomain& domain() noexcept { return *domain_; }

  struct Node;

 private:
  struct Window {
    Node* pred;
    Node* curr;
  };
  Window find(ThreadId caller, Node* head, Key key);

  std::unique_ptr<EpochDomain> domain_;
  ThreadRegistry registry_;
  std::vector<Node*> heads_;
  Node* tail_;
  alignas(128) std::atomic<std::int64_t> counter_{0};
};

extern template class PlainCore<NaiveSize::SharedCounter>;
extern template class PlainCore<NaiveSize::Traversal>;

}  // namespace detail

template <NaiveSize Mode>
class ReferenceListSet {
 public:
  explicit ReferenceListSet(const SetOptions& options = {}) : core_(1, options) {}

  ThreadId register_thread() { return core_.registry().acquire(); }
  void deregister_thread(ThreadId tid) { core_.registry().release(tid); }
  ThreadRegistry& registry() noexcept { return core_.registry(); }

  bool insert(ThreadId caller, Key key) { return core_.insert(caller, 0, key); }
  bool remove(ThreadId caller, Key key) { return core_.remove(caller, 0, key); }
  bool contains(ThreadId caller, Key key) { return core_.contains(caller, 0, key); }
  /// Not linearizable.
  std::int64_t size(ThreadId caller) { return core_.size(caller); }

 private:
  detail::PlainCore<Mode> core_;
};

template <NaiveSize Mode>
class ReferenceHashSet {
 public:
  ReferenceHashSet(std::size_t expected_elements, const SetOptions& options = {})
      : core_(table_size_for(expected_elements), options) {}

  ThreadId register_thread() { return core_.registry().acquire(); }
  void deregister_thread(ThreadId tid) { core_.registry().release(tid); }
  ThreadRegistry& registry() noexcept { return core_.registry(); }

  bool insert(ThreadId caller, Key key) { return core_.insert(caller, bucket(key), key); }
  bool remove(ThreadId caller, Key key) { return core_.remove(caller, bucket(key), key); }
  bool contains(ThreadId caller, Key key) { return core_.contains(caller, bucket(key), key); }
  /// Not linearizable.
  std::int64_t size(ThreadId caller) { return core_.size(caller); }

  std::size_t table_size() const noexcept { return core_.bucket_count(); }
  std::size_t bucket(Key key) const noexcept { return fibonacci_bucket(key, core_.bucket_count()); }

 private:
  detail::PlainCore<Mode> core_;
};

using NaiveCounterListSet = ReferenceListSet<NaiveSize::SharedCounter>;
using NaiveCounterHashSet = ReferenceHashSet<NaiveSize::SharedCounter>;
using TraversalSizeListSet = ReferenceListSet<NaiveSize::Traversal>;
using TraversalSizeHashSet = ReferenceHashSet<NaiveSize::Traversal>;

}  // namespace csize
