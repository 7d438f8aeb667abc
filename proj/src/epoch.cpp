#include "csize/epoch.hpp"

#include <stdexcept>

namespace csize {

namespace {
constexpr std::uint32_t kScanInterval = 64;
}

EpochDomain::EpochDomain(std::size_t max_threads, Reclamation mode)
    : mode_(mode), slots_(max_threads) {
  if (max_threads == 0) throw std::invalid_argument("EpochDomain: max_threads must be positive");
}

EpochDomain::~EpochDomain() {
  for (auto& slot : slots_) {
    for (auto& r : slot.limbo) r.deleter(r.object);
  }
}

void EpochDomain::pin_raw(ThreadId tid) {
  auto& slot = slots_[tid.index()];
  if (slot.depth++ == 0) {
    slot.announced.store((global_.load() << 1) | 1);
  }
}

void EpochDomain::unpin(ThreadId tid) {
  auto& slot = slots_[tid.index()];
  if (--slot.depth == 0) slot.announced.store(0);
}

void EpochDomain::retire(ThreadId tid, void* object, Deleter deleter) {
  auto& slot = slots_[tid.index()];
  slot.limbo.push_back({object, deleter, global_.load()});
  if (mode_ == Reclamation::Leak) return;
  if (++slot.since_scan >= kScanInterval) {
    slot.since_scan = 0;
    try_advance();
    collect(slot);
  }
}

bool EpochDomain::try_advance() {
  auto current = global_.load();
  for (const auto& slot : slots_) {
    auto a = slot.announced.load();
    if ((a & 1) && (a >> 1) != current) return false;
  }
  return global_.compare_exchange_strong(current, current + 1);
}

void EpochDomain::collect(Slot& slot) {
  const auto now = global_.load();
  std::size_t kept = 0;
  for (auto& r : slot.limbo) {
    if (r.epoch + 2 <= now) {
      r.deleter(r.object);
    } else {
      slot.limbo[kept++] = r;
    }
  }
  slot.limbo.resize(kept);
}

std::size_t EpochDomain::pending() const {
  std::size_t n = 0;
  for (const auto& slot : slots_) n += slot.limbo.size();
  return n;
}

}  // namespace csize
