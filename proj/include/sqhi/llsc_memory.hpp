#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sqhi/types.hpp"

namespace sqhi {

// Both backends expose the same surface:
//
//   Cell ll(ProcessId, std::size_t)
//   bool vl(ProcessId, std::size_t)
//   bool sc(ProcessId, std::size_t, const Cell&)
//   std::vector<Cell> snapshot() const
//   std::size_t size() const
//
// Links are kept per (process, cell). Any SC attempt by a process consumes its
// link on that cell, so a successful or failed SC must be followed by a fresh
// LL before the next VL/SC on the same cell.

/// Deterministic, externally synchronized LL/VL/SC array with unbounded
/// version counters. Drives schedule exploration.
class SimulatedMemory {
 public:
  SimulatedMemory(std::size_t cells, std::size_t processes);

  Cell ll(ProcessId p, std::size_t i);
  bool vl(ProcessId p, std::size_t i) const;
  bool sc(ProcessId p, std::size_t i, const Cell& value);

  std::vector<Cell> snapshot() const { return cells_; }
  std::span<const Cell> cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  std::size_t processes() const noexcept { return processes_; }

  std::uint64_t version(std::size_t i) const { return versions_.at(i); }
  /// True iff process `p` holds a link on cell `i` that a SC could still use.
  bool link_valid(ProcessId p, std::size_t i) const;

  /// Overwrites the contents (test setup). Bumps versions, so outstanding
  /// links are invalidated.
  void load(std::span<const Cell> contents);

 private:
  std::size_t slot(ProcessId p, std::size_t i) const;

  std::vector<Cell> cells_;
  std::vector<std::uint64_t> versions_;
  // version + 1 observed at the last LL; 0 means no link.
  std::vector<std::uint64_t> links_;
  std::size_t processes_;
};

/// Thread-safe LL/VL/SC array. Each cell is one 64-bit word holding
/// (val, next, mark) plus a 32-bit version tag; SC is a compare-and-swap on the
/// whole word that bumps the tag.
class AtomicMemory {
 public:
  static constexpr unsigned kKeyBits = 15;
  static constexpr unsigned kVersionShift = 32;

  /// Largest universe whose keys (plus the empty sentinel) fit in a slot.
  static constexpr std::size_t max_universe() noexcept {
    return (std::size_t{1} << kKeyBits) - 1;
  }

  AtomicMemory(std::size_t cells, std::size_t universe, std::size_t processes);

  Cell ll(ProcessId p, std::size_t i);
  bool vl(ProcessId p, std::size_t i) const;
  bool sc(ProcessId p, std::size_t i, const Cell& value);

  /// Only meaningful at external quiescence.
  std::vector<Cell> snapshot() const;
  std::size_t size() const noexcept { return cells_; }
  std::size_t processes() const noexcept { return links_.size(); }

  void load(std::span<const Cell> contents);

  static std::uint64_t pack(const Cell& c, std::uint32_t version) noexcept;
  static Cell unpack(std::uint64_t word) noexcept;
  static std::uint32_t version_of(std::uint64_t word) noexcept {
    return static_cast<std::uint32_t>(word >> kVersionShift);
  }

 private:
  static constexpr std::uint64_t kNoLink = ~std::uint64_t{0};

  std::size_t cells_;
  std::unique_ptr<std::atomic<std::uint64_t>[]> words_;
  // links_[p][i] is the full word seen by p's last LL of cell i. Only the
  // thread acting as process p touches row p.
  std::vector<std::vector<std::uint64_t>> links_;
};

}  // namespace sqhi
