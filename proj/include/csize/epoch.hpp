#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "csize/types.hpp"

namespace csize {

/// Epoch-based deferred reclamation over a fixed pool of thread slots.
///
/// A thread pins the domain for the duration of an operation; objects retired
/// while pinned are freed only after the global epoch has advanced twice, at
/// which point no pinned thread can still hold a reference obtained before the
/// retirement. In Leak mode nothing is freed until the domain is destroyed.
///
/// Pins nest. Each slot is owned by the thread currently registered under its
/// ThreadId; only retire() and the pin bookkeeping touch slot-private state.
class EpochDomain {
 public:
  using Deleter = void (*)(void*);

  explicit EpochDomain(std::size_t max_threads, Reclamation mode = Reclamation::Deferred);
  ~EpochDomain();

  EpochDomain(const EpochDomain&) = delete;
  EpochDomain& operator=(const EpochDomain&) = delete;

  class Guard {
   public:
    Guard(Guard&& other) noexcept : domain_(other.domain_), tid_(other.tid_) {
      other.domain_ = nullptr;
    }
    Guard(const Guard&) = delete;
    Guard& operator=(const Guard&) = delete;
    Guard& operator=(Guard&&) = delete;
    ~Guard() {
      if (domain_) domain_->unpin(tid_);
    }

   private:
    friend class EpochDomain;
    Guard(EpochDomain* d, ThreadId tid) : domain_(d), tid_(tid) {}
    EpochDomain* domain_;
    ThreadId tid_;
  };

  [[nodiscard]] Guard pin(ThreadId tid) {
    pin_raw(tid);
    return Guard(this, tid);
  }

  void retire(ThreadId tid, void* object, Deleter deleter);

  template <class T>
  void retire(ThreadId tid, T* object) {
    retire(tid, const_cast<void*>(static_cast<const void*>(object)),
           [](void* p) { delete static_cast<T*>(p); });
  }

  Reclamation mode() const noexcept { return mode_; }
  std::size_t max_threads() const noexcept { return slots_.size(); }
  std::uint64_t epoch() const noexcept { return global_.load(); }
  /// Objects retired but not yet freed. Only meaningful while quiescent.
  std::size_t pending() const;

 private:
  struct Retired {
    void* object;
    Deleter deleter;
    std::uint64_t epoch;
  };

  struct alignas(128) Slot {
    // (epoch << 1) | 1 while pinned, 0 otherwise
    std::atomic<std::uint64_t> announced{0};
    std::uint32_t depth = 0;
    std::uint32_t since_scan = 0;
    std::vector<Retired> limbo;
  };

  void pin_raw(ThreadId tid);
  void unpin(ThreadId tid);
  bool try_advance();
  void collect(Slot& slot);

  Reclamation mode_;
  alignas(128) std::atomic<std::uint64_t> global_{0};
  std::vector<Slot> slots_;
};

}  // namespace csize
