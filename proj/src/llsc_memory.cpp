#include "sqhi/llsc_memory.hpp"

#include <string>

namespace sqhi {

namespace {

void require_index(std::size_t i, std::size_t m) {
  if (i >= m) throw std::out_of_range("cell index " + std::to_string(i) + " out of range");
}

}  // namespace

SimulatedMemory::SimulatedMemory(std::size_t cells, std::size_t processes)
    : cells_(cells), versions_(cells, 0), links_(cells * processes, 0), processes_(processes) {
  if (cells == 0) throw std::invalid_argument("memory needs at least one cell");
}

std::size_t SimulatedMemory::slot(ProcessId p, std::size_t i) const {
  if (p >= processes_) throw std::out_of_range("unregistered process " + std::to_string(p));
  require_index(i, cells_.size());
  return static_cast<std::size_t>(p) * cells_.size() + i;
}

Cell SimulatedMemory::ll(ProcessId p, std::size_t i) {
  links_[slot(p, i)] = versions_[i] + 1;
  return cells_[i];
}

bool SimulatedMemory::vl(ProcessId p, std::size_t i) const {
  const std::uint64_t link = links_[slot(p, i)];
  if (link == 0) throw LinkError("VL without a prior LL on cell " + std::to_string(i));
  return link == versions_[i] + 1;
}

bool SimulatedMemory::sc(ProcessId p, std::size_t i, const Cell& value) {
  const std::size_t s = slot(p, i);
  const std::uint64_t link = links_[s];
  if (link == 0) throw LinkError("SC without a prior LL on cell " + std::to_string(i));
  links_[s] = 0;
  if (link != versions_[i] + 1) return false;
  cells_[i] = value;
  ++versions_[i];
  return true;
}

bool SimulatedMemory::link_valid(ProcessId p, std::size_t i) const {
  const std::uint64_t link = links_[slot(p, i)];
  return link != 0 && link == versions_[i] + 1;
}

void SimulatedMemory::load(std::span<const Cell> contents) {
  if (contents.size() != cells_.size()) throw std::invalid_argument("load: size mismatch");
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    cells_[i] = contents[i];
    ++versions_[i];
  }
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kKeyMask = (std::uint64_t{1} << AtomicMemory::kKeyBits) - 1;
constexpr std::uint64_t kEmptyCode = kKeyMask;

std::uint64_t encode_key(Key k) noexcept { return k == kEmpty ? kEmptyCode : k; }
Key decode_key(std::uint64_t bits) noexcept {
  return bits == kEmptyCode ? kEmpty : static_cast<Key>(bits);
}

}  // namespace

std::uint64_t AtomicMemory::pack(const Cell& c, std::uint32_t version) noexcept {
  return encode_key(c.val) | (encode_key(c.next) << kKeyBits) |
         (static_cast<std::uint64_t>(c.mark) << (2 * kKeyBits)) |
         (static_cast<std::uint64_t>(version) << kVersionShift);
}

Cell AtomicMemory::unpack(std::uint64_t word) noexcept {
  Cell c;
  c.val = decode_key(word & kKeyMask);
  c.next = decode_key((word >> kKeyBits) & kKeyMask);
  c.mark = static_cast<Mark>((word >> (2 * kKeyBits)) & 0x3);
  return c;
}

AtomicMemory::AtomicMemory(std::size_t cells, std::size_t universe, std::size_t processes)
    : cells_(cells),
      words_(std::make_unique<std::atomic<std::uint64_t>[]>(cells)),
      links_(processes, std::vector<std::uint64_t>(cells, kNoLink)) {
  static_assert(std::atomic<std::uint64_t>::is_always_lock_free);
  if (cells == 0) throw std::invalid_argument("memory needs at least one cell");
  if (universe > max_universe()) {
    throw std::invalid_argument("universe " + std::to_string(universe) +
                                " exceeds atomic backend limit " + std::to_string(max_universe()));
  }
  const std::uint64_t empty = pack(Cell{}, 0);
  for (std::size_t i = 0; i < cells; ++i) words_[i].store(empty, std::memory_order_relaxed);
}

Cell AtomicMemory::ll(ProcessId p, std::size_t i) {
  require_index(i, cells_);
  const std::uint64_t w = words_[i].load();
  links_.at(p)[i] = w;
  return unpack(w);
}

bool AtomicMemory::vl(ProcessId p, std::size_t i) const {
  require_index(i, cells_);
  const std::uint64_t link = links_.at(p)[i];
  if (link == kNoLink) throw LinkError("VL without a prior LL on cell " + std::to_string(i));
  return words_[i].load() == link;
}

bool AtomicMemory::sc(ProcessId p, std::size_t i, const Cell& value) {
  require_index(i, cells_);
  std::uint64_t& link = links_.at(p)[i];
  if (link == kNoLink) throw LinkError("SC without a prior LL on cell " + std::to_string(i));
  std::uint64_t expected = link;
  link = kNoLink;
  const std::uint64_t desired = pack(value, version_of(expected) + 1);
  return words_[i].compare_exchange_strong(expected, desired);
}

std::vector<Cell> AtomicMemory::snapshot() const {
  std::vector<Cell> out(cells_);
  for (std::size_t i = 0; i < cells_; ++i) out[i] = unpack(words_[i].load());
  return out;
}

void AtomicMemory::load(std::span<const Cell> contents) {
  if (contents.size() != cells_) throw std::invalid_argument("load: size mismatch");
  for (std::size_t i = 0; i < cells_; ++i) {
    const std::uint64_t old = words_[i].load();
    words_[i].store(pack(contents[i], version_of(old) + 1));
  }
}

}  // namespace sqhi
