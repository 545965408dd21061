#include "sqhi/canonical.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "sqhi/priority.hpp"

namespace sqhi {

namespace {

void place(std::vector<Key>& vals, Key v, const HashFn& h) {
  const std::size_t m = vals.size();
  std::size_t i = h(v);
  for (std::size_t probes = 0; probes < m; ++probes, i = (i + 1) % m) {
    if (vals[i] == kEmpty) {
      vals[i] = v;
      return;
    }
    if (prio_greater(h, v, vals[i], i)) std::swap(v, vals[i]);
  }
  throw CapacityExceeded("no empty cell left");
}

CanonicalRep build(std::span<const Key> keys, const HashFn& h) {
  const std::size_t m = h.cells();
  if (keys.size() > m - 1) {
    throw CapacityExceeded(std::to_string(keys.size()) + " keys do not fit in " +
                           std::to_string(m) + " cells with one left empty");
  }
  CanonicalRep rep{std::vector<Key>(m, kEmpty)};
  for (Key k : keys) {
    if (k == kEmpty || k >= h.universe()) throw std::out_of_range("key outside the universe");
    place(rep.vals, k, h);
  }
  if (auto bad = ordering_violation(rep.vals, h)) {
    throw std::logic_error("displacement produced an unordered table at cell " +
                           std::to_string(*bad));
  }
  return rep;
}

}  // namespace

std::vector<Cell> CanonicalRep::cells() const {
  const std::size_t m = vals.size();
  std::vector<Cell> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = Cell{vals[i], vals[(i + 1) % m], Mark::kStable};
  return out;
}

CanonicalRep canonical(std::span<const Key> keys, const HashFn& h) {
  std::vector<Key> distinct(keys.begin(), keys.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  return build(distinct, h);
}

CanonicalRep canonical_mult(std::span<const Key> keys, const HashFn& h) { return build(keys, h); }

CanonicalRep canonical_mask(std::uint64_t mask, const HashFn& h) {
  std::vector<Key> keys;
  for (Key k = 0; k < 64; ++k) {
    if (mask >> k & 1) keys.push_back(k);
  }
  return build(keys, h);
}

std::optional<std::size_t> ordering_violation(std::span<const Key> vals, const HashFn& h) {
  const std::size_t m = vals.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Key v = vals[i];
    if (v == kEmpty) continue;
    for (std::size_t j = h(v); j != i; j = (j + 1) % m) {
      if (!prio_geq(h, vals[j], v, j)) return i;
    }
  }
  return std::nullopt;
}

std::pair<std::uint64_t, bool> seq_apply(std::uint64_t state, OpKind kind, Key key) {
  const std::uint64_t bit = std::uint64_t{1} << key;
  const bool present = (state & bit) != 0;
  switch (kind) {
    case OpKind::kInsert: return {state | bit, !present};
    case OpKind::kDelete: return {state & ~bit, present};
    case OpKind::kLookup: return {state, present};
  }
  return {state, false};
}

}  // namespace sqhi
