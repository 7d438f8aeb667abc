#pragma once

#include <atomic>
#include <cstddef>
#include <memory>

#include "csize/types.hpp"

namespace csize {

/// Hands out ThreadIds from a fixed pool. An id stays owned until released.
class ThreadRegistry {
 public:
  explicit ThreadRegistry(std::size_t max_threads);

  /// Throws std::runtime_error when every id is taken.
  ThreadId acquire();
  void release(ThreadId tid);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t in_use() const;

 private:
  std::size_t capacity_;
  std::unique_ptr<std::atomic<bool>[]> taken_;
};

/// RAII registration: acquires on construction, releases on destruction.
class Registration {
 public:
  explicit Registration(ThreadRegistry& registry) : registry_(&registry), tid_(registry.acquire()) {}
  ~Registration() {
    if (registry_) registry_->release(tid_);
  }
  Registration(Registration&& o) noexcept : registry_(o.registry_), tid_(o.tid_) { o.registry_ = nullptr; }
  Registration(const Registration&) = delete;
  Registration& operator=(const Registration&) = delete;
  Registration& operator=(Registration&&) = delete;

  ThreadId id() const noexcept { return tid_; }
  operator ThreadId() const noexcept { return tid_; }

 private:
  ThreadRegistry* registry_;
  ThreadId tid_;
};

}  // namespace csize
