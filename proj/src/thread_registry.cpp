#include "csize/thread_registry.hpp"

#include <stdexcept>
#include <string>

namespace csize {

ThreadRegistry::ThreadRegistry(std::size_t max_threads)
    : capacity_(max_threads), taken_(std::make_unique<std::atomic<bool>[]>(max_threads)) {
  if (max_threads == 0) throw std::invalid_argument("ThreadRegistry: max_threads must be positive");
  for (std::size_t i = 0; i < capacity_; ++i) taken_[i].store(false);
}

ThreadId ThreadRegistry::acquire() {
  for (std::size_t i = 0; i < capacity_; ++i) {
    bool expected = false;
    if (!taken_[i].load() && taken_[i].compare_exchange_strong(expected, true)) {
      return ThreadId{static_cast<std::uint32_t>(i)};
    }
  }
  throw std::runtime_error("ThreadRegistry: all " + std::to_string(capacity_) +
                           " thread ids are in use");
}

void ThreadRegistry::release(ThreadId tid) {
  if (tid.index() >= capacity_ || !taken_[tid.index()].exchange(false)) {
    throw std::logic_error("ThreadRegistry: releasing an id that is not registered");
  }
}

std::size_t ThreadRegistry::in_use() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < capacity_; ++i) n += taken_[i].load() ? 1 : 0;
  return n;
}

}  // namespace csize
