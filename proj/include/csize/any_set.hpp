#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "csize/hash_set.hpp"
#include "csize/list_set.hpp"
#include "csize/reference_sets.hpp"

namespace csize {

enum class StructureKind : std::uint8_t {
  List,          // TransformedListSet
  Hash,          // TransformedHashSet
  NaiveList,     // NaiveCounterListSet
  NaiveHash,     // NaiveCounterHashSet
  BaselineList,  // TraversalSizeListSet
  BaselineHash,  // TraversalSizeHashSet
};

std::string_view name(StructureKind kind);
std::optional<StructureKind> parse_structure(std::string_view text);
/// Untransformed counterpart used for overhead comparisons.
StructureKind baseline_of(StructureKind kind);
bool is_transformed(StructureKind kind);

/// Uniform virtual surface over every set in the library, for the harness and
/// the CLI tools. Hot benchmark loops use the concrete types instead.
class ConcurrentSet {
 public:
  virtual ~ConcurrentSet() = default;
  virtual ThreadId register_thread() = 0;
  virtual void deregister_thread(ThreadId tid) = 0;
  virtual bool insert(ThreadId caller, Key key) = 0;
  virtual bool remove(ThreadId caller, Key key) = 0;
  virtual bool contains(ThreadId caller, Key key) = 0;
  virtual std::int64_t size(ThreadId caller) = 0;
  virtual StructureKind kind() const = 0;
  /// Null for the reference sets.
  virtual SizeCalculator* size_calculator() { return nullptr; }
};

template <class Set>
class SetAdapter final : public ConcurrentSet {
 public:
  template <class... Args>
  SetAdapter(StructureKind kind, Args&&... args) : kind_(kind), set_(std::forward<Args>(args)...) {}

  ThreadId register_thread() override { return set_.register_thread(); }
  void deregister_thread(ThreadId tid) override { set_.deregister_thread(tid); }
  bool insert(ThreadId caller, Key key) override { return set_.insert(caller, key); }
  bool remove(ThreadId caller, Key key) override { return set_.remove(caller, key); }
  bool contains(ThreadId caller, Key key) override { return set_.contains(caller, key); }
  std::int64_t size(ThreadId caller) override { return set_.size(caller); }
  StructureKind kind() const override { return kind_; }
  SizeCalculator* size_calculator() override {
    if constexpr (requires { set_.size_calculator(); }) {
      return &set_.size_calculator();
    } else {
      return nullptr;
    }
  }

  Set& get() noexcept { return set_; }

 private:
  StructureKind kind_;
  Set set_;
};

/// `expected_elements` sizes the hash table; ignored by the list variants.
std::unique_ptr<ConcurrentSet> make_set(StructureKind kind, std::size_t expected_elements,
                                        const SetOptions& options = {});

}  // namespace csize
