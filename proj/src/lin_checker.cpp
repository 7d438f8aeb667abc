#include "csize/lin_checker.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

namespace csize {

std::string_view name(Verdict v) {
  switch (v) {
    case Verdict::Ok: return "ok";
    case Verdict::Violation: return "violation";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Abstract set state, kept sorted.
using State = std::vector<Key>;

bool has(const State& s, Key k) { return std::binary_search(s.begin(), s.end(), k); }

/// Applies `e` to `s`. Returns false if e's recorded result is impossible in s.
/// `out` receives the successor state only when it differs from `s`.
/// A pending operation has no recorded result and takes its natural effect.
bool step(const State& s, const Event& e, State& out, bool& changed) {
  changed = false;
  if (e.pending()) {
    if (e.op == OpType::Insert && !has(s, e.arg)) {
      out = s;
      out.insert(std::upper_bound(out.begin(), out.end(), e.arg), e.arg);
      changed = true;
    } else if (e.op == OpType::Delete && has(s, e.arg)) {
      out = s;
      out.erase(std::lower_bound(out.begin(), out.end(), e.arg));
      changed = true;
    }
    return true;
  }
  switch (e.op) {
    case OpType::Insert:
      if (has(s, e.arg)) return e.result == 0;
      if (e.result == 0) return false;
      out = s;
      out.insert(std::upper_bound(out.begin(), out.end(), e.arg), e.arg);
      changed = true;
      return true;
    case OpType::Delete:
      if (!has(s, e.arg)) return e.result == 0;
      if (e.result == 0) return false;
      out = s;
      out.erase(std::lower_bound(out.begin(), out.end(), e.arg));
      changed = true;
      return true;
    case OpType::Contains:
      return (e.result != 0) == has(s, e.arg);
    case OpType::Size:
      return e.result == static_cast<std::int64_t>(s.size());
  }
  return false;
}

struct Memo {
  std::vector<std::uint64_t> linearized;
  State state;
  bool operator==(const Memo&) const = default;
};

struct MemoHash {
  std::size_t operator()(const Memo& m) const noexcept {
    std::size_t h = 0x9E3779B97F4A7C15ull;
    auto mix = [&h](std::uint64_t v) { h ^= std::hash<std::uint64_t>{}(v) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2); };
    for (auto w : m.linearized) mix(w);
    for (auto k : m.state) mix(static_cast<std::uint64_t>(k));
    return h;
  }
};

enum class Outcome { Linearizable, NotLinearizable, LimitReached };

// Doubly linked list of call/return entries ordered by time; linearized calls
// (and their returns) are lifted out and restored on backtrack.
struct Entry {
  std::int32_t op = -1;
  bool call = false;
  std::int32_t prev = -1;
  std::int32_t next = -1;
  std::int32_t match = -1;
};

class Search {
 public:
  Search(std::span<const Event> events, std::span<const Key> initial, std::size_t max_states)
      : events_(events), max_states_(max_states), state_(initial.begin(), initial.end()) {
    std::sort(state_.begin(), state_.end());
    state_.erase(std::unique(state_.begin(), state_.end()), state_.end());
    build();
  }

  Outcome run(std::size_t& states) {
    std::vector<std::uint64_t> linearized((events_.size() + 63) / 64, 0);
    std::unordered_set<Memo, MemoHash> memo;
    struct Frame {
      std::int32_t entry;
      State state;
    };
    std::vector<Frame> stack;

    auto set_bit = [&](std::int32_t op, bool on) {
      auto& w = linearized[static_cast<std::size_t>(op) / 64];
      const auto bit = std::uint64_t{1} << (op % 64);
      w = on ? (w | bit) : (w & ~bit);
    };

    std::size_t remaining = complete_;
    std::int32_t cursor = entries_[0].next;
    while (remaining > 0) {
      if (cursor != -1 && entries_[cursor].call) {
        const auto op = entries_[cursor].op;
        const Event& e = events_[static_cast<std::size_t>(op)];
        State next;
        bool changed = false;
        if (step(state_, e, next, changed)) {
          set_bit(op, true);
          if (memo.insert(Memo{linearized, changed ? next : state_}).second) {
            if (memo.size() > max_states_) {
              states = memo.size();
              return Outcome::LimitReached;
            }
            if (changed) {
              stack.push_back({cursor, std::move(state_)});
              state_ = std::move(next);
            } else {
              stack.push_back({cursor, state_});
            }
            lift(cursor);
            if (!e.pending()) --remaining;
            cursor = entries_[0].next;
            continue;
          }
          set_bit(op, false);
        }
        cursor = entries_[cursor].next;
        continue;
      }

      // Reached a return whose operation could not be placed: undo the most
      // recent choice and try the next candidate after it.
      if (stack.empty()) {
        states = memo.size();
        return Outcome::NotLinearizable;
      }
      auto frame = std::move(stack.back());
      stack.pop_back();
      const auto op = entries_[frame.entry].op;
      set_bit(op, false);
      state_ = std::move(frame.state);
      unlift(frame.entry);
      if (!events_[static_cast<std::size_t>(op)].pending()) ++remaining;
      cursor = entries_[frame.entry].next;
    }
    states = memo.size();
    return Outcome::Linearizable;
  }

 private:
  void build() {
    struct Stamp {
      std::int64_t time;
      int order;  // calls sort before returns at equal times
      std::int32_t op;
    };
    std::vector<Stamp> stamps;
    for (std::size_t i = 0; i < events_.size(); ++i) {
      const auto op = static_cast<std::int32_t>(i);
      stamps.push_back({events_[i].invoke_ns, 0, op});
      if (!events_[i].pending()) {
        stamps.push_back({events_[i].response_ns, 1, op});
        ++complete_;
      }
    }
    std::stable_sort(stamps.begin(), stamps.end(), [](const Stamp& a, const Stamp& b) {
      return a.time != b.time ? a.time < b.time : a.order < b.order;
    });

    entries_.resize(stamps.size() + 1);
    std::vector<std::int32_t> call_of(events_.size(), -1);
    for (std::size_t i = 0; i < stamps.size(); ++i) {
      const auto idx = static_cast<std::int32_t>(i + 1);
      auto& en = entries_[idx];
      en.op = stamps[i].op;
      en.call = stamps[i].order == 0;
      en.prev = idx - 1;
      en.next = i + 1 < stamps.size() ? idx + 1 : -1;
      if (en.call) {
        call_of[static_cast<std::size_t>(en.op)] = idx;
      } else {
        const auto c = call_of[static_cast<std::size_t>(en.op)];
        en.match = c;
        entries_[c].match = idx;
      }
    }
    entries_[0].next = stamps.empty() ? -1 : 1;
  }

  void unlink(std::int32_t x) {
    auto& en = entries_[x];
    entries_[en.prev].next = en.next;
    if (en.next != -1) entries_[en.next].prev = en.prev;
  }

  void relink(std::int32_t x) {
    auto& en = entries_[x];
    entries_[en.prev].next = x;
    if (en.next != -1) entries_[en.next].prev = x;
  }

  void lift(std::int32_t call) {
    unlink(call);
    if (entries_[call].match != -1) unlink(entries_[call].match);
  }

  void unlift(std::int32_t call) {
    if (entries_[call].match != -1) relink(entries_[call].match);
    relink(call);
  }

  std::span<const Event> events_;
  std::size_t max_states_;
  State state_;
  std::vector<Entry> entries_;
  std::size_t complete_ = 0;
};

Outcome run_search(std::span<const Event> events, std::span<const Key> initial,
                   std::size_t max_states, std::size_t& states) {
  Search s(events, initial, max_states);
  return s.run(states);
}

// Operations invoked before `cut`; those that had not responded by cut - 1
// become pending.
std::vector<Event> prefix_at(std::span<const Event> events, std::int64_t cut) {
  std::vector<Event> out;
  for (const auto& e : events) {
    if (e.invoke_ns >= cut) continue;
    auto copy = e;
    if (copy.response_ns >= cut) copy.response_ns = kPending;
    out.push_back(copy);
  }
  return out;
}

}  // namespace

CheckResult check_linearizable(std::span<const Event> events, std::span<const Key> initial,
                               const CheckLimits& limits) {
  CheckResult result;
  if (events.size() > limits.max_events) {
    result.verdict = Verdict::Inconclusive;
    result.message = "history has " + std::to_string(events.size()) + " events, limit is " +
                     std::to_string(limits.max_events);
    return result;
  }

  switch (run_search(events, initial, limits.max_states, result.states)) {
    case Outcome::Linearizable:
      result.verdict = Verdict::Ok;
      return result;
    case Outcome::LimitReached:
      result.verdict = Verdict::Inconclusive;
      result.message = "state limit of " + std::to_string(limits.max_states) + " reached";
      return result;
    case Outcome::NotLinearizable:
      break;
  }

  result.verdict = Verdict::Violation;
  result.witness.assign(events.begin(), events.end());
  if (!limits.minimize_witness) return result;

  // Failing prefixes are closed upwards, so binary search the cut over the
  // response times.
  std::vector<std::int64_t> cuts;
  for (const auto& e : events) {
    if (!e.pending()) cuts.push_back(e.response_ns);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::size_t lo = 0;
  std::size_t hi = cuts.size();  // cuts.size() stands for the whole history
  while (lo < hi) {
    const auto mid = lo + (hi - lo) / 2;
    // Pending operations in a prefix may be dropped, which is exactly the
    // freedom a truncated history needs.
    auto prefix = prefix_at(events, cuts[mid] + 1);
    std::size_t states = 0;
    auto outcome = run_search(prefix, initial, limits.max_states, states);
    if (outcome == Outcome::LimitReached) return result;
    if (outcome == Outcome::NotLinearizable) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (lo < cuts.size()) result.witness = prefix_at(events, cuts[lo] + 1);
  result.message = "no legal sequential order for the " + std::to_string(result.witness.size()) +
                   "-operation prefix";
  return result;
}

}  // namespace csize
