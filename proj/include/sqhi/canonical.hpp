#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sqhi/hash.hpp"
#include "sqhi/types.hpp"

namespace sqhi {

/// Value slots of a sequential Robin Hood table; the lookahead of cell i is
/// vals[i + 1] and every mark is stable.
struct CanonicalRep {
  std::vector<Key> vals;

  std::vector<Cell> cells() const;
  friend bool operator==(const CanonicalRep&, const CanonicalRep&) = default;
};

class CapacityExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Robin Hood placement of `keys` built by sequential insertion with
/// displacement. Duplicate keys are ignored. At most m - 1 distinct keys.
CanonicalRep canonical(std::span<const Key> keys, const HashFn& h);

/// Same, but repeated keys are kept, and end up in consecutive cells.
CanonicalRep canonical_mult(std::span<const Key> keys, const HashFn& h);

/// Canonical representation of the set encoded by bit k of `mask` (u <= 64).
CanonicalRep canonical_mask(std::uint64_t mask, const HashFn& h);

/// First cell violating the ordering invariant over value slots, if any.
std::optional<std::size_t> ordering_violation(std::span<const Key> vals, const HashFn& h);

/// Sequential set semantics.
std::pair<std::uint64_t, bool> seq_apply(std::uint64_t state, OpKind kind, Key key);

}  // namespace sqhi
