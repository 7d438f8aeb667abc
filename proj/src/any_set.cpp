#include "csize/any_set.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace csize {

namespace {
constexpr std::array<std::pair<StructureKind, std::string_view>, 6> kNames = {{
    {StructureKind::List, "list"},
    {StructureKind::Hash, "hash"},
    {StructureKind::NaiveList, "naive-list"},
    {StructureKind::NaiveHash, "naive-hash"},
    {StructureKind::BaselineList, "baseline-list"},
    {StructureKind::BaselineHash, "baseline-hash"},
}};
}  // namespace

std::string_view name(StructureKind kind) {
  for (auto [k, n] : kNames) {
    if (k == kind) return n;
  }
  return "?";
}

std::optional<StructureKind> parse_structure(std::string_view text) {
  for (auto [k, n] : kNames) {
    if (n == text) return k;
  }
  return std::nullopt;
}

StructureKind baseline_of(StructureKind kind) {
  switch (kind) {
    case StructureKind::List:
    case StructureKind::NaiveList:
    case StructureKind::BaselineList:
      return StructureKind::BaselineList;
    default:
      return StructureKind::BaselineHash;
  }
}

bool is_transformed(StructureKind kind) {
  return kind == StructureKind::List || kind == StructureKind::Hash;
}

std::unique_ptr<ConcurrentSet> make_set(StructureKind kind, std::size_t expected_elements,
                                        const SetOptions& options) {
  const auto expected = std::max<std::size_t>(expected_elements, 1);
  switch (kind) {
    case StructureKind::List:
      return std::make_unique<SetAdapter<TransformedListSet>>(kind, options);
    case StructureKind::Hash:
      return std::make_unique<SetAdapter<TransformedHashSet>>(kind, expected, options);
    case StructureKind::NaiveList:
      return std::make_unique<SetAdapter<NaiveCounterListSet>>(kind, options);
    case StructureKind::NaiveHash:
      return std::make_unique<SetAdapter<NaiveCounterHashSet>>(kind, expected, options);
    case StructureKind::BaselineList:
      return std::make_unique<SetAdapter<TraversalSizeListSet>>(kind, options);
    case StructureKind::BaselineHash:
      return std::make_unique<SetAdapter<TraversalSizeHashSet>>(kind, expected, options);
  }
  throw std::invalid_argument("unknown structure kind");
}

}  // namespace csize
