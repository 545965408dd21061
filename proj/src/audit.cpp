#include "sqhi/audit.hpp"

#include <algorithm>

#include "sqhi/canonical.hpp"
#include "sqhi/priority.hpp"

namespace sqhi {

namespace {

Violation at(std::string check, std::size_t cell, std::span<const Cell> a) {
  const std::size_t m = a.size();
  std::string d = "A[" + std::to_string(cell) + "]=" + to_string(a[cell]) + " A[" +
                  std::to_string((cell + 1) % m) + "]=" + to_string(a[(cell + 1) % m]);
  return {std::move(check), cell, std::move(d)};
}

}  // namespace

std::optional<Violation> check_ordering_invariant(std::span<const Cell> a, const HashFn& h) {
  const std::size_t m = a.size();
  // Clause a first: on its own it is implied by b and c along the chain of
  // cells before i, so a per-cell scan would report it as b or c.
  for (std::size_t i = 0; i < m; ++i) {
    const Key v = a[i].val;
    if (v == kEmpty) continue;
    for (std::size_t j = h(v); j != i; j = (j + 1) % m) {
      if (!prio_geq(h, a[j].val, v, j)) return at("ordering.a", i, a);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t i1 = (i + 1) % m;
    const Key next = a[i].next;
    const bool next_home = h.hashes_to(next, i1);
    if (!prio_geq(h, next, a[i1].val, i1) && !next_home) return at("ordering.b", i, a);
    if (!prio_geq(h, a[i].val, next, i) && !(next_home && prio_geq(h, next, a[i1].val, i1))) {
      return at("ordering.c", i, a);
    }
  }
  return std::nullopt;
}

std::optional<Violation> check_stable_unstable(std::span<const Cell> a, const HashFn& h,
                                               const Ghost* ghost) {
  const std::size_t m = a.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Cell& c = a[i];
    const std::size_t i1 = (i + 1) % m;
    const Cell& n = a[i1];
    if (c.mark != Mark::kDeleting && c.val == c.next && c.val != kEmpty) {
      return at("structure.a", i, a);
    }
    if (c.mark == Mark::kStable) {
      if (c.next != n.val) return at("structure.b", i, a);
      if (ghost && ghost->tag[i] != Ghost::kNone) return at("ghost.stable-tagged", i, a);
      continue;
    }
    if (c.next == kEmpty || (c.val == kEmpty && !h.hashes_to(c.next, i1))) {
      return at("structure.c", i, a);
    }
    if (!ghost) continue;
    const std::uint32_t op = ghost->tag[i];
    if (op == Ghost::kNone) return at("ghost.untagged-unstable", i, a);
    const bool moved = ghost->propagated(op, i1);
    if (c.mark == Mark::kDeleting) {
      if (!moved) {
        if (c.next != n.val) return at("structure.d", i, a);
        continue;
      }
      if (!prio_greater(h, c.next, n.val, i1)) return at("structure.d", i, a);
      const bool same = n.mark == Mark::kDeleting && ghost->tag[i1] == op;
      if (same ? n.val == kEmpty : n.val != kEmpty) return at("structure.d", i, a);
    } else {
      if (moved != (c.next == n.val)) return at("structure.e", i, a);
    }
  }
  return std::nullopt;
}

std::optional<Violation> check_monotone_priority(std::span<const Cell> a, const HashFn& h) {
  const std::size_t m = a.size();
  for (Key v = 0; v < h.universe(); ++v) {
    for (std::size_t i = 0; i < m; ++i) {
      if (!prio_greater(h, a[i].val, v, i)) continue;
      for (std::size_t j = h(v);; j = (j + 1) % m) {
        if (!prio_greater(h, a[j].val, v, j)) {
          return Violation{"monotone-priority", i,
                           "key " + std::to_string(v) + " outranked at " + std::to_string(i) +
                               " but not at " + std::to_string(j)};
        }
        if (j == i) break;
      }
    }
  }
  return std::nullopt;
}

bool physically_in(std::span<const Cell> a, Key v) {
  for (const Cell& c : a) {
    if (c.val == v || c.next == v) return true;
  }
  return false;
}

bool logically_in(std::span<const Cell> a, const HashFn& h, Key v) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].val == v || (a[i].next == v && prio_geq(h, a[i].val, v, i))) return true;
  }
  return false;
}

std::optional<Violation> check_presence(std::span<const Cell> a, const HashFn& h, const Ghost& g) {
  bool any_dangling = false;
  std::vector<int> per_key(h.universe(), 0);
  for (std::uint32_t op = 1; op < g.ops.size(); ++op) {
    if (!g.dangling(op)) continue;
    any_dangling = true;
    if (++per_key[g.ops[op].key] > 1) {
      return Violation{"presence.one-dangling", g.ops[op].initial,
                       "two dangling operations on key " + std::to_string(g.ops[op].key)};
    }
  }
  if (any_dangling) return std::nullopt;
  for (Key v = 0; v < h.universe(); ++v) {
    if (physically_in(a, v) && !logically_in(a, h, v)) {
      return Violation{"presence.ambiguous", 0, "key " + std::to_string(v)};
    }
  }
  return std::nullopt;
}

bool check_sqhi(std::span<const Cell> a, const HashFn& h, std::uint64_t state) {
  if (static_cast<std::size_t>(__builtin_popcountll(state)) >= a.size()) return false;
  const std::vector<Cell> want = canonical_mask(state, h).cells();
  return std::equal(a.begin(), a.end(), want.begin(), want.end());
}

}  // namespace sqhi
