#include "sqhi/hash.hpp"

#include <stdexcept>
#include <string>

namespace sqhi {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

HashFn::HashFn(std::size_t universe, std::size_t cells, std::uint64_t seed) : cells_(cells) {
  if (cells < 2) throw std::invalid_argument("hash table needs at least two cells");
  if (universe == 0 || universe >= kEmpty) throw std::invalid_argument("bad universe size");
  table_.resize(universe);
  std::uint64_t state = seed;
  for (auto& slot : table_) slot = static_cast<std::uint32_t>(splitmix64(state) % cells);
}

HashFn HashFn::from_table(std::size_t cells, std::vector<std::uint32_t> table) {
  if (cells == 0) throw std::invalid_argument("hash table needs at least one cell");
  for (std::size_t k = 0; k < table.size(); ++k) {
    if (table[k] >= cells) {
      throw std::invalid_argument("hash of key " + std::to_string(k) + " out of range");
    }
  }
  HashFn h;
  h.cells_ = cells;
  h.table_ = std::move(table);
  return h;
}

}  // namespace sqhi
