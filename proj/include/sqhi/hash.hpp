#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sqhi/types.hpp"

namespace sqhi {

/// Hash function h : [0, u) -> [0, m), materialized as a lookup table.
///
/// Seeded instances draw every entry independently from a splitmix64 stream,
/// so two instances with equal (u, m, seed) are identical. Tests build
/// explicit tables to force collisions.
class HashFn {
 public:
  HashFn(std::size_t universe, std::size_t cells, std::uint64_t seed);

  static HashFn from_table(std::size_t cells, std::vector<std::uint32_t> table);

  std::size_t operator()(Key k) const noexcept { return table_[k]; }

  /// True iff `k` is a real key whose hash location is `cell`. The empty
  /// sentinel hashes nowhere.
  bool hashes_to(Key k, std::size_t cell) const noexcept {
    return k != kEmpty && table_[k] == cell;
  }

  std::size_t universe() const noexcept { return table_.size(); }
  std::size_t cells() const noexcept { return cells_; }
  std::span<const std::uint32_t> table() const noexcept { return table_; }

 private:
  HashFn() = default;

  std::vector<std::uint32_t> table_;
  std::size_t cells_ = 0;
};

}  // namespace sqhi
