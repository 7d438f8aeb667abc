#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "csize/epoch.hpp"
#include "csize/size_calculator.hpp"
#include "csize/thread_registry.hpp"
#include "csize/types.hpp"

namespace csize {

struct SetOptions {
  std::size_t max_threads = 64;
  Reclamation reclamation = Reclamation::Deferred;
  SizeCalculatorOptions size{};
};

namespace detail {

/// Harris-style sorted lists (one per bucket, shared tail sentinel) whose
/// successful updates take effect through a shared SizeCalculator.
///
/// Nodes carry the UpdateInfo of the insert that linked them and of the delete
/// that marked them. Any operation that meets a node for its key finishes that
/// node's pending metadata update before acting on it, and a marked node is
/// never unlinked before its deletion is reflected in the metadata.
class TransformedCore {
 public:
  TransformedCore(std::size_t buckets, const SetOptions& options);
  ~TransformedCore();

  TransformedCore(const TransformedCore&) = delete;
  TransformedCore& operator=(const TransformedCore&) = delete;

  struct Node;

  bool insert(ThreadId caller, std::size_t bucket, Key key);
  bool remove(ThreadId caller, std::size_t bucket, Key key);
  bool contains(ThreadId caller, std::size_t bucket, Key key);
  std::int64_t size(ThreadId caller) { return calculator_.compute(caller); }

  std::size_t bucket_count() const noexcept { return heads_.size(); }
  ThreadRegistry& registry() noexcept { return registry_; }
  SizeCalculator& calculator() noexcept { return calculator_; }
  EpochDomain& domain() noexcept { return *domain_; }

  /// Quiescent-only structural check: keys strictly increasing along every
  /// bucket and every node in the bucket it hashes to. Returns a description
  /// of the first problem found.
  std::optional<std::string> validate(std::size_t (*bucket_of)(Key, std::size_t)) const;
  /// Quiescent-only count of unmarked reachable nodes.
  std::size_t count_unmarked() const;

 private:
  struct Window {
    Node* pred;
    Node* curr;
  };

  Window find(ThreadId caller, Node* head, Key key);
  void help_insert(ThreadId caller, Node* node);
  void help_delete(Node* node);
  static void mark(Node* node);
  void unlink_check(const Node* node) const;

  std::unique_ptr<EpochDomain> domain_;
  ThreadRegistry registry_;
  SizeCalculator calculator_;
  std::vector<Node*> heads_;
  Node* tail_;
};

inline void check_key(Key key) {
  if (key < kMinKey || key > kMaxKey) throw std::out_of_range("key collides with a list sentinel");
}

}  // namespace detail

/// Lock-free sorted linked-list set with a wait-free linearizable size().
class TransformedListSet {
 public:
  explicit TransformedListSet(const SetOptions& options = {}) : core_(1, options) {}

  ThreadId register_thread() { return core_.registry().acquire(); }
  void deregister_thread(ThreadId tid) { core_.registry().release(tid); }
  ThreadRegistry& registry() noexcept { return core_.registry(); }

  bool insert(ThreadId caller, Key key) { return core_.insert(caller, 0, key); }
  bool remove(ThreadId caller, Key key) { return core_.remove(caller, 0, key); }
  bool contains(ThreadId caller, Key key) { return core_.contains(caller, 0, key); }
  std::int64_t size(ThreadId caller) { return core_.size(caller); }

  SizeCalculator& size_calculator() noexcept { return core_.calculator(); }
  EpochDomain& epoch_domain() noexcept { return core_.domain(); }
  std::optional<std::string> validate() const {
    return core_.validate([](Key, std::size_t) -> std::size_t { return 0; });
  }
  std::size_t count_unmarked() const { return core_.count_unmarked(); }

 private:
  detail::TransformedCore core_;
};

}  // namespace csize
