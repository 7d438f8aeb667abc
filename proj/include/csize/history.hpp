#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csize/types.hpp"

namespace csize {

enum class OpType : std::uint8_t { Insert, Delete, Contains, Size };

std::string_view name(OpType op);
std::optional<OpType> parse_op(std::string_view text);

/// Response time of an operation that never returned.
inline constexpr std::int64_t kPending = std::numeric_limits<std::int64_t>::max();

/// One completed (or pending) operation. `result` is 1/0 for insert, delete
/// and contains, and the returned value for size.
struct Event {
  std::uint32_t thread = 0;
  OpType op = OpType::Size;
  Key arg = 0;
  std::int64_t result = 0;
  std::int64_t invoke_ns = 0;
  std::int64_t response_ns = kPending;
  // CountersSnapshot epoch a size ran on; 0 when unknown. Not serialized.
  std::uint64_t epoch = 0;

  bool pending() const noexcept { return response_ns == kPending; }
  friend bool operator==(const Event&, const Event&) = default;
};

/// Operation log plus the run configuration that produced it.
///
/// Text format, one record per line:
///   # csize-history key=value key=value ...
///   <tid> <op> <arg|-> <result> <invoke_ns> <response_ns>
/// where result is ok/fail (insert, delete), true/false (contains), an integer
/// (size), or `pending` together with a `pending` response time. The optional
/// header key `initial` lists the keys present before the first operation,
/// comma separated.
struct History {
  std::map<std::string, std::string> config;
  std::vector<Key> initial;
  std::vector<Event> events;
};

void write_history(std::ostream& out, const History& history);
/// Throws std::runtime_error naming the offending line.
History read_history(std::istream& in);

std::string format_event(const Event& e);

}  // namespace csize
