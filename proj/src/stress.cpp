#include <algorithm>
#include <atomic>
#include <chrono>
#include <random>
#include <stdexcept>
#include <thread>

#include "csize/harness.hpp"

namespace csize {

namespace {

std::int64_t now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::mt19937_64 thread_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

class RandomYield final : public instrument::YieldListener {
 public:
  RandomYield(std::uint64_t seed, std::uint64_t stream, double p) : rng_(thread_rng(seed, stream)), p_(p) {}
  void on_yield(instrument::YieldPoint) override { maybe_yield(); }
  void maybe_yield() {
    if (p_ > 0 && coin_(rng_) < p_) std::this_thread::yield();
  }

 private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> coin_{0.0, 1.0};
  double p_;
};

bool apply(ConcurrentSet& set, ThreadId tid, const PlannedOp& op) {
  switch (op.op) {
    case OpType::Insert: return set.insert(tid, op.key);
    case OpType::Delete: return set.remove(tid, op.key);
    case OpType::Contains: return set.contains(tid, op.key);
    case OpType::Size: break;
  }
  throw std::logic_error("size is not a keyed operation");
}

}  // namespace

void validate(const StressConfig& c) {
  if (c.workers + c.size_threads == 0) throw std::invalid_argument("stress: no threads to run");
  if (c.workers + c.size_threads > c.max_threads) {
    throw std::invalid_argument("stress: workers + size threads exceed max_threads");
  }
  if (c.key_range < 1) throw std::invalid_argument("stress: key_range must be at least 1");
  if (c.mix.insert_pct + c.mix.delete_pct + c.mix.contains_pct != 100) {
    throw std::invalid_argument("stress: operation mix must sum to 100");
  }
  if (static_cast<Key>(c.prefill) > c.key_range) {
    throw std::invalid_argument("stress: prefill exceeds key_range");
  }
  if (c.yield_probability < 0 || c.yield_probability > 1) {
    throw std::invalid_argument("stress: yield_probability must be in [0, 1]");
  }
}

std::vector<std::vector<PlannedOp>> plan_workers(const StressConfig& c) {
  std::vector<std::vector<PlannedOp>> plans(c.workers);
  for (std::size_t w = 0; w < c.workers; ++w) {
    auto rng = thread_rng(c.seed, w);
    std::uniform_int_distribution<unsigned> pct(0, 99);
    std::uniform_int_distribution<Key> key(1, c.key_range);
    plans[w].reserve(c.ops_per_worker);
    for (std::size_t i = 0; i < c.ops_per_worker; ++i) {
      const auto roll = pct(rng);
      PlannedOp op;
      op.op = roll < c.mix.insert_pct                      ? OpType::Insert
              : roll < c.mix.insert_pct + c.mix.delete_pct ? OpType::Delete
                                                           : OpType::Contains;
      op.key = key(rng);
      plans[w].push_back(op);
    }
  }
  return plans;
}

History run_stress(const StressConfig& c) {
  validate(c);
  SetOptions options;
  options.max_threads = c.max_threads;
  options.reclamation = c.reclamation;
  options.size.backoff = c.backoff;
  auto set = make_set(c.structure, static_cast<std::size_t>(c.key_range), options);

  History h;
  h.config = {{"structure", std::string(name(c.structure))},
              {"seed", std::to_string(c.seed)},
              {"workers", std::to_string(c.workers)},
              {"size_threads", std::to_string(c.size_threads)},
              {"key_range", std::to_string(c.key_range)},
              {"ops_per_worker", std::to_string(c.ops_per_worker)}};
  if (c.prefill > 0) {
    auto tid = set->register_thread();
    for (Key k = 1; k <= static_cast<Key>(c.prefill); ++k) {
      set->insert(tid, k);
      h.initial.push_back(k);
    }
    set->deregister_thread(tid);
  }

  const auto plans = plan_workers(c);
  const std::size_t total = c.workers + c.size_threads;
  std::vector<ThreadId> tids;
  for (std::size_t i = 0; i < total; ++i) tids.push_back(set->register_thread());

  std::vector<std::vector<Event>> logs(total);
  std::atomic<std::size_t> ready{0};
  std::atomic<bool> go{false};
  const bool transformed = set->size_calculator() != nullptr;

  auto body = [&](std::size_t index) {
    RandomYield yielder(c.seed ^ 0x5bd1e995u, index, c.yield_probability);
    instrument::ScopedYieldListener scope(c.yield_probability > 0 ? &yielder : nullptr);
    auto& log = logs[index];
    const auto tid = tids[index];
    const auto thread = static_cast<std::uint32_t>(index);
    ready.fetch_add(1);
    while (!go.load()) std::this_thread::yield();

    if (index < c.workers) {
      for (const auto& op : plans[index]) {
        yielder.maybe_yield();
        Event e{thread, op.op, op.key, 0, now_ns(), 0, 0};
        e.result = apply(*set, tid, op) ? 1 : 0;
        e.response_ns = now_ns();
        log.push_back(e);
      }
    } else {
      for (std::size_t i = 0; i < c.size_ops_per_thread; ++i) {
        yielder.maybe_yield();
        Event e{thread, OpType::Size, 0, 0, now_ns(), 0, 0};
        instrument::detail::tl_trace = {};
        e.result = set->size(tid);
        e.response_ns = now_ns();
        if (transformed) e.epoch = instrument::last_compute().epoch;
        log.push_back(e);
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(total);
  for (std::size_t i = 0; i < total; ++i) threads.emplace_back(body, i);
  while (ready.load() < total) std::this_thread::yield();
  go.store(true);
  for (auto& t : threads) t.join();
  for (auto tid : tids) set->deregister_thread(tid);

  for (auto& log : logs) h.events.insert(h.events.end(), log.begin(), log.end());
  std::sort(h.events.begin(), h.events.end(),
            [](const Event& a, const Event& b) { return a.invoke_ns < b.invoke_ns; });
  return h;
}

}  // namespace csize
