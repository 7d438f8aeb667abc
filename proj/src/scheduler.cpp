#include <algorithm>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "csize/harness.hpp"

namespace csize {

ScheduleStep parse_step(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw std::invalid_argument("schedule step '" + std::string(text) + "' is not <thread>:<point>");
  }
  ScheduleStep step;
  std::size_t thread = 0;
  for (char ch : text.substr(0, colon)) {
    if (ch < '0' || ch > '9') throw std::invalid_argument("bad thread in step '" + std::string(text) + "'");
    thread = thread * 10 + static_cast<std::size_t>(ch - '0');
  }
  step.thread = thread;
  const auto point = text.substr(colon + 1);
  if (point != "end") {
    auto p = instrument::parse_yield_point(point);
    if (!p) throw std::invalid_argument("unknown yield point '" + std::string(point) + "'");
    step.until = *p;
  }
  return step;
}

namespace {

// Runs one logical thread per OS thread but lets exactly one of them make
// progress at a time. Control passes through `running_`: -1 while the
// coordinator holds it, otherwise the index of the thread allowed to run.
class Coordinator {
 public:
  enum class Mode { Scripted, Explore };

  Coordinator(ConcurrentSet& set, const std::vector<std::vector<PlannedOp>>& plans, Mode mode)
      : set_(set), plans_(plans), mode_(mode), workers_(plans.size()) {
    for (std::size_t i = 0; i < workers_.size(); ++i) {
      workers_[i].owner = this;
      workers_[i].index = i;
      workers_[i].tid = set_.register_thread();
    }
    for (std::size_t i = 0; i < workers_.size(); ++i) {
      workers_[i].thread = std::thread([this, i] { body(i); });
    }
  }

  ~Coordinator() {
    drain();
    for (auto& w : workers_) {
      if (w.thread.joinable()) w.thread.join();
    }
    for (auto& w : workers_) set_.deregister_thread(w.tid);
  }

  Coordinator(const Coordinator&) = delete;
  Coordinator& operator=(const Coordinator&) = delete;

  bool done(std::size_t i) const { return workers_[i].done; }
  std::size_t size() const { return workers_.size(); }

  void set_target(std::optional<ScheduleStep> step) { target_ = step; }

  // Hands control to thread i and blocks until it gives it back.
  void resume(std::size_t i) {
    std::unique_lock lock(mutex_);
    running_ = static_cast<long>(i);
    cv_.notify_all();
    cv_.wait(lock, [&] { return running_ == -1; });
  }

  void drain() {
    target_.reset();
    for (std::size_t i = 0; i < workers_.size(); ++i) {
      while (!workers_[i].done) resume(i);
    }
  }

  void rethrow() {
    if (error_) std::rethrow_exception(error_);
  }

  std::vector<Event> take_events() { return std::move(events_); }

 private:
  struct Worker final : instrument::YieldListener {
    Coordinator* owner = nullptr;
    std::size_t index = 0;
    ThreadId tid{};
    std::thread thread;
    bool done = false;
    void on_yield(instrument::YieldPoint p) override { owner->on_yield(index, p); }
  };

  void on_yield(std::size_t i, instrument::YieldPoint p) {
    if (mode_ == Mode::Explore || (target_ && target_->until == p)) pause(i);
  }

  void wait_turn(std::size_t i) {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return running_ == static_cast<long>(i); });
  }

  void pause(std::size_t i) {
    std::unique_lock lock(mutex_);
    running_ = -1;
    cv_.notify_all();
    cv_.wait(lock, [&] { return running_ == static_cast<long>(i); });
  }

  void body(std::size_t i) {
    auto& w = workers_[i];
    wait_turn(i);
    try {
      instrument::ScopedYieldListener scope(&w);
      const auto thread = static_cast<std::uint32_t>(i);
      const auto& plan = plans_[i];
      for (std::size_t k = 0; k < plan.size(); ++k) {
        if (k > 0) pause(i);
        const auto& op = plan[k];
        Event e{thread, op.op, op.key, 0, ++clock_, 0, 0};
        switch (op.op) {
          case OpType::Insert: e.result = set_.insert(w.tid, op.key); break;
          case OpType::Delete: e.result = set_.remove(w.tid, op.key); break;
          case OpType::Contains: e.result = set_.contains(w.tid, op.key); break;
          case OpType::Size:
            instrument::detail::tl_trace = {};
            e.result = set_.size(w.tid);
            e.epoch = instrument::last_compute().epoch;
            break;
        }
        e.response_ns = ++clock_;
        events_.push_back(e);
      }
    } catch (...) {
      if (!error_) error_ = std::current_exception();
    }
    std::lock_guard lock(mutex_);
    w.done = true;
    running_ = -1;
    cv_.notify_all();
  }

  ConcurrentSet& set_;
  const std::vector<std::vector<PlannedOp>>& plans_;
  Mode mode_;
  std::vector<Worker> workers_;
  std::mutex mutex_;
  std::condition_variable cv_;
  long running_ = -1;
  std::optional<ScheduleStep> target_;
  // Only the running thread touches these; the handoff orders the accesses.
  std::int64_t clock_ = 0;
  std::vector<Event> events_;
  std::exception_ptr error_;
};

void load_initial(ConcurrentSet& set, const std::vector<Key>& initial) {
  if (initial.empty()) return;
  auto tid = set.register_thread();
  for (auto k : initial) set.insert(tid, k);
  set.deregister_thread(tid);
}

History make_history(std::vector<Event> events, const std::vector<Key>& initial, std::string_view mode,
                     StructureKind kind) {
  History h;
  h.config = {{"mode", std::string(mode)}, {"structure", std::string(name(kind))}};
  h.initial = initial;
  h.events = std::move(events);
  return h;
}

}  // namespace

History run_deterministic(ConcurrentSet& set, const Schedule& schedule) {
  for (const auto& step : schedule.steps) {
    if (step.thread >= schedule.threads.size()) {
      throw std::invalid_argument("schedule step names thread " + std::to_string(step.thread) + " of " +
                                  std::to_string(schedule.threads.size()));
    }
    if (step.until && !instrument::kEnabled) {
      throw std::logic_error("mid-operation schedule steps need an instrumented build");
    }
  }
  load_initial(set, schedule.initial);

  std::vector<Event> events;
  {
    Coordinator c(set, schedule.threads, Coordinator::Mode::Scripted);
    for (const auto& step : schedule.steps) {
      if (c.done(step.thread)) {
        c.drain();
        throw std::invalid_argument("schedule step for thread " + std::to_string(step.thread) +
                                    ", which has no operations left");
      }
      c.set_target(step);
      c.resume(step.thread);
    }
    c.drain();
    c.rethrow();
    events = c.take_events();
  }
  return make_history(std::move(events), schedule.initial, "deterministic", set.kind());
}

ExploreResult explore_interleavings(const std::function<std::unique_ptr<ConcurrentSet>()>& make,
                                    const std::vector<std::vector<PlannedOp>>& threads,
                                    const std::vector<Key>& initial,
                                    const std::function<void(const History&, ConcurrentSet&)>& visit,
                                    std::size_t max_runs) {
  ExploreResult result;
  // Depth-first over scheduling decisions: `choices[d]` is the index picked
  // among the runnable threads at decision d, `widths[d]` how many there were.
  std::vector<std::size_t> choices;
  std::vector<std::size_t> widths;
  while (true) {
    if (result.runs == max_runs) {
      result.exhaustive = false;
      return result;
    }
    auto set = make();
    load_initial(*set, initial);
    std::vector<Event> events;
    {
      Coordinator c(*set, threads, Coordinator::Mode::Explore);
      std::size_t depth = 0;
      while (true) {
        std::vector<std::size_t> runnable;
        for (std::size_t i = 0; i < c.size(); ++i) {
          if (!c.done(i)) runnable.push_back(i);
        }
        if (runnable.empty()) break;
        if (depth == choices.size()) {
          choices.push_back(0);
          widths.push_back(runnable.size());
        }
        c.resume(runnable[std::min(choices[depth], runnable.size() - 1)]);
        ++depth;
      }
      c.rethrow();
      events = c.take_events();
      // Later decisions from a previous run do not apply to this branch.
      choices.resize(depth);
      widths.resize(depth);
    }
    ++result.runs;
    visit(make_history(std::move(events), initial, "explore", set->kind()), *set);

    while (!choices.empty() && choices.back() + 1 >= widths.back()) {
      choices.pop_back();
      widths.pop_back();
    }
    if (choices.empty()) return result;
    ++choices.back();
  }
}

}  // namespace csize
