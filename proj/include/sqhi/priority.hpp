#pragma once

#include <cstddef>

#include "sqhi/hash.hpp"

namespace sqhi {

/// Cyclic distance of cell `i` from the hash location of `v`.
inline std::size_t rank(const HashFn& h, Key v, std::size_t i) noexcept {
  const std::size_t m = h.cells();
  return (i + m - h(v)) % m;
}

/// Robin Hood priority of `x` over `y` in cell `i`: larger rank wins, ties
/// go to the larger key, and the empty sentinel loses to everything.
inline bool prio_greater(const HashFn& h, Key x, Key y, std::size_t i) noexcept {
  if (x == kEmpty) return false;
  if (y == kEmpty) return true;
  const std::size_t rx = rank(h, x, i);
  const std::size_t ry = rank(h, y, i);
  return rx > ry || (rx == ry && x > y);
}

inline bool prio_geq(const HashFn& h, Key x, Key y, std::size_t i) noexcept {
  return x == y || prio_greater(h, x, y, i);
}

}  // namespace sqhi
