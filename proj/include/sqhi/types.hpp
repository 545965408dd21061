#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace sqhi {

/// Element of the universe [0, u). `kEmpty` is the vacancy sentinel.
using Key = std::uint32_t;
inline constexpr Key kEmpty = std::numeric_limits<Key>::max();

using ProcessId = std::uint32_t;

enum class Mark : std::uint8_t { kStable = 0, kInserting = 1, kDeleting = 2 };

/// One table cell: value slot, lookahead slot and a two-bit mark.
struct Cell {
  Key val = kEmpty;
  Key next = kEmpty;
  Mark mark = Mark::kStable;

  friend bool operator==(const Cell&, const Cell&) = default;
};

enum class OpKind : std::uint8_t { kInsert = 0, kDelete = 1, kLookup = 2 };

/// Raised when an operation finds no vacant cell. Only reachable when the
/// table holds no empty cell.
class TableFull : public std::runtime_error {
 public:
  TableFull() : std::runtime_error("hash table is full") {}
};

/// Misuse of the LL/VL/SC interface (VL or SC without a live link).
class LinkError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

char mark_char(Mark m);
std::string key_string(Key k);
std::string to_string(const Cell& c);
const char* to_string(OpKind k);

}  // namespace sqhi
