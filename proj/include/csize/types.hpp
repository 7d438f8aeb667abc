#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>

namespace csize {

/// Index of a registered worker thread. Used to address per-thread counter
/// rows, so values are dense in [0, maxThreads).
struct ThreadId {
  std::uint32_t value = 0;

  constexpr std::size_t index() const noexcept { return value; }
  friend constexpr auto operator<=>(ThreadId, ThreadId) = default;
};

enum class OpKind : std::uint8_t { Insert = 0, Delete = 1 };

inline constexpr std::size_t index_of(OpKind kind) noexcept {
  return static_cast<std::size_t>(kind);
}

/// Distinguished value no metadata counter can reach. Marks unfilled
/// snapshot cells and the unset agreed size.
inline constexpr std::int64_t kInvalid = std::numeric_limits<std::int64_t>::max();

/// Keys are signed 64-bit; the two extremes are reserved for list sentinels.
using Key = std::int64_t;
inline constexpr Key kMinKey = std::numeric_limits<Key>::min() + 1;
inline constexpr Key kMaxKey = std::numeric_limits<Key>::max() - 1;

enum class Reclamation : std::uint8_t { Deferred, Leak };

}  // namespace csize
