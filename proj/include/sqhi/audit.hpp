#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqhi/hash.hpp"
#include "sqhi/types.hpp"

namespace sqhi {

struct Violation {
  std::string check;  // e.g. "ordering.b", "structure.d", "sqhi"
  std::size_t cell = 0;
  std::string detail;
};

/// Which in-flight operation each unstable cell belongs to, and which cells
/// each operation has propagated into. Maintained by the explorer from the
/// sites of successful SCs; the algorithm never sees it.
struct Ghost {
  static constexpr std::uint32_t kNone = 0;
  static constexpr std::uint32_t kNoCell = UINT32_MAX;

  struct OpTrace {
    std::uint32_t initial = kNoCell;
    std::uint64_t propagated = 0;  // bit per cell
    Key key = kEmpty;
  };

  std::vector<std::uint32_t> tag;  // op id per cell, kNone when stable
  std::vector<OpTrace> ops;        // indexed by op id; ops[0] unused

  Ghost() = default;
  Ghost(std::size_t cells, std::size_t op_count) : tag(cells, kNone), ops(op_count + 1) {}

  bool propagated(std::uint32_t op, std::size_t cell) const {
    return op != kNone && (ops[op].propagated >> cell & 1) != 0;
  }
  bool dangling(std::uint32_t op) const {
    return ops[op].initial != kNoCell && tag[ops[op].initial] == op;
  }
};

/// Extended ordering invariant, clauses a, b, c.
std::optional<Violation> check_ordering_invariant(std::span<const Cell> a, const HashFn& h);

/// Stable/unstable structure, clauses a to c, plus d and e when a ghost is
/// supplied.
std::optional<Violation> check_stable_unstable(std::span<const Cell> a, const HashFn& h,
                                               const Ghost* ghost = nullptr);

/// If some value slot outranks v at cell i, every value slot from h(v) to i
/// outranks v too. Only meaningful when clause a of the ordering invariant
/// holds; checked for every key of the universe.
std::optional<Violation> check_monotone_priority(std::span<const Cell> a, const HashFn& h);

bool physically_in(std::span<const Cell> a, Key v);
bool logically_in(std::span<const Cell> a, const HashFn& h, Key v);

/// With no dangling operation, every key is logically present or absent from
/// all slots. At most one dangling operation per key at any time.
std::optional<Violation> check_presence(std::span<const Cell> a, const HashFn& h, const Ghost& g);

/// True iff every cell is stable and the table equals the canonical
/// representation of `state` (bit k = key k).
bool check_sqhi(std::span<const Cell> a, const HashFn& h, std::uint64_t state);

}  // namespace sqhi
