#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csize/history.hpp"

namespace csize {

enum class Verdict : std::uint8_t { Ok = 0, Violation = 1, Inconclusive = 2 };

std::string_view name(Verdict v);

struct CheckLimits {
  std::size_t max_events = 10'000;
  /// Distinct (linearized-set, abstract-state) pairs the search may visit.
  std::size_t max_states = 20'000'000;
  /// Shrink a violation to the shortest failing prefix.
  bool minimize_witness = true;
};

struct CheckResult {
  Verdict verdict = Verdict::Ok;
  /// For a violation: the shortest prefix (all operations invoked before some
  /// response time t) that is already not linearizable. Operations still
  /// running at t appear as pending.
  std::vector<Event> witness;
  std::size_t states = 0;
  std::string message;
};

/// Wing-Gong style search, with memoized states, for a sequential order that
/// respects real time (a precedes b iff a.response < b.invoke) and obeys set
/// semantics, where size returns the cardinality. Pending operations may be
/// linearized or dropped.
CheckResult check_linearizable(std::span<const Event> events, std::span<const Key> initial = {},
                               const CheckLimits& limits = {});

inline CheckResult check_linearizable(const History& h, const CheckLimits& limits = {}) {
  return check_linearizable(h.events, h.initial, limits);
}

}  // namespace csize
