#include "sqhi/lb_verifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <unordered_set>

namespace sqhi::lb {

namespace {

bool has(State q, Key k) { return (q >> k & 1) != 0; }

void guard(std::size_t u, std::size_t m, std::size_t n) {
  if (u == 0 || u > kMaxUniverse) throw ScaleError("universe must be in [1, 8]");
  if (m == 0 || m > std::max(kMaxCells, u)) throw ScaleError("cells must be in [1, 6] (or u)");
  if (n > u) throw ScaleError("capacity exceeds the universe");
}

// Index of a cell value in [0, u], the empty value last.
std::size_t slot(Key k, std::size_t u) { return k == kEmpty ? u : k; }

}  // namespace

std::vector<State> enumerate_states(std::size_t u, std::size_t n) {
  if (u > kMaxUniverse) throw ScaleError("universe must be at most 8");
  std::vector<State> out;
  for (State q = 0; q < (State{1} << u); ++q) {
    if (static_cast<std::size_t>(std::popcount(q)) <= n) out.push_back(q);
  }
  return out;
}

Assignment::Assignment(std::size_t u, std::size_t m, std::size_t n)
    : u_(u), m_(m), n_(n), table_(std::size_t{1} << u), valid_(std::size_t{1} << u, false) {
  guard(u, m, n);
  states_ = enumerate_states(u, n);
  for (State q : states_) {
    table_[q].assign(m, kEmpty);
    valid_[q] = true;
  }
}

// ---------------------------------------------------------------------------

PriorityScheme PriorityScheme::age_rule(const HashFn& h) {
  PriorityScheme p;
  const std::size_t m = h.cells(), u = h.universe();
  p.level_.assign(m, std::vector<std::uint32_t>(u));
  for (std::size_t i = 0; i < m; ++i) {
    for (Key k = 0; k < u; ++k) {
      const std::size_t dist = (i + m - h(k)) % m;
      p.level_[i][k] = static_cast<std::uint32_t>(dist * u + k + 1);
    }
  }
  return p;
}

PriorityScheme PriorityScheme::key_order(std::size_t m, std::size_t u) {
  PriorityScheme p;
  p.level_.assign(m, std::vector<std::uint32_t>(u));
  for (auto& cell : p.level_) {
    for (Key k = 0; k < u; ++k) cell[k] = k + 1;
  }
  return p;
}

PriorityScheme PriorityScheme::custom(std::vector<std::vector<Key>> order) {
  PriorityScheme p;
  if (order.empty()) throw std::invalid_argument("priority scheme needs at least one cell");
  const std::size_t u = order[0].size();
  for (const auto& cell : order) {
    if (cell.size() != u) throw std::invalid_argument("every cell must order the same keys");
    std::vector<std::uint32_t> level(u, 0);
    for (std::size_t r = 0; r < cell.size(); ++r) {
      if (cell[r] >= u || level[cell[r]] != 0) {
        throw std::invalid_argument("cell order must be a permutation of [0, u)");
      }
      level[cell[r]] = static_cast<std::uint32_t>(u - r);
    }
    p.level_.push_back(std::move(level));
  }
  return p;
}

bool PriorityScheme::greater(std::size_t cell, Key a, Key b) const {
  const auto lv = [&](Key k) { return k == kEmpty ? 0u : level_[cell].at(k); };
  return lv(a) > lv(b);
}

// ---------------------------------------------------------------------------

Assignment probe_assignment(const HashFn& h, const PriorityScheme& p, std::size_t n) {
  const std::size_t m = h.cells(), u = h.universe();
  if (p.cells() != m) throw std::invalid_argument("scheme and hash disagree on cells");
  if (n > m) throw ScaleError("capacity exceeds the number of cells");
  Assignment a(u, m, n);
  for (State q : a.states()) {
    std::vector<Key>& vals = a[q];
    for (Key k = 0; k < u; ++k) {
      if (!has(q, k)) continue;
      Key x = k;
      std::size_t i = h(x);
      // Each step moves forward one cell; an empty cell is at most m away.
      for (std::size_t steps = 0;; ++steps) {
        if (steps > m) throw std::logic_error("probe did not find an empty cell");
        if (vals[i] == kEmpty) {
          vals[i] = x;
          break;
        }
        if (p.greater(i, x, vals[i])) std::swap(x, vals[i]);
        i = (i + 1) % m;
      }
    }
  }
  return a;
}

Assignment bitmap_assignment(std::size_t u, std::size_t n) {
  Assignment a(u, u, n);
  for (State q : a.states()) {
    for (Key k = 0; k < u; ++k) {
      if (has(q, k)) a[q][k] = k;
    }
  }
  return a;
}

std::optional<NaturalViolation> natural_violation(const Assignment& a) {
  for (State q : a.states()) {
    const auto& c = a[q];
    for (std::size_t l = 0; l < c.size(); ++l) {
      if (c[l] != kEmpty && (c[l] >= a.universe() || !has(q, c[l]))) return NaturalViolation{q, l, true};
    }
    for (Key k = 0; k < a.universe(); ++k) {
      if (has(q, k) && std::find(c.begin(), c.end(), k) == c.end()) {
        return NaturalViolation{q, k, false};
      }
    }
  }
  return std::nullopt;
}

namespace {

// Bitmask of the values seen at each cell, split by membership of v.
struct Classes {
  std::vector<std::uint32_t> with, without;
};

Classes classes(const Assignment& a, Key v) {
  Classes c{std::vector<std::uint32_t>(a.cells(), 0), std::vector<std::uint32_t>(a.cells(), 0)};
  for (State q : a.states()) {
    auto& side = has(q, v) ? c.with : c.without;
    for (std::size_t l = 0; l < a.cells(); ++l) side[l] |= 1u << slot(a[q][l], a.universe());
  }
  return c;
}

bool property1_holds(const Assignment& a, Key v) {
  const Classes c = classes(a, v);
  for (std::size_t l = 0; l < a.cells(); ++l) {
    if ((c.with[l] & c.without[l]) == 0) return false;
  }
  return true;
}

}  // namespace

std::vector<Key> property1_witnesses(const Assignment& a) {
  std::vector<Key> out;
  for (Key v = 0; v < a.universe(); ++v) {
    if (property1_holds(a, v)) out.push_back(v);
  }
  return out;
}

std::optional<Key> check_property1(const Assignment& a) {
  for (Key v = 0; v < a.universe(); ++v) {
    if (property1_holds(a, v)) return v;
  }
  return std::nullopt;
}

bool property2_holds(const Assignment& a, Key v) {
  const Classes c = classes(a, v);
  for (std::size_t l = 0; l < a.cells(); ++l) {
    if (std::popcount(c.with[l]) < 2 || std::popcount(c.without[l]) < 2) return false;
  }
  return true;
}

std::optional<Key> check_property2(const Assignment& a) {
  for (Key v = 0; v < a.universe(); ++v) {
    if (property2_holds(a, v)) return v;
  }
  return std::nullopt;
}

std::optional<LinearityViolation> linear_violation(const Assignment& a) {
  const std::size_t m = a.cells();
  auto pos = [&](State q, Key k) {
    const auto& c = a[q];
    return static_cast<std::size_t>(std::find(c.begin(), c.end(), k) - c.begin());
  };
  for (State q : a.states()) {
    for (Key v = 0; v < a.universe(); ++v) {
      const State r = q | State{1} << v;
      if (has(q, v) || !a.contains(r)) continue;
      for (Key w = 0; w < a.universe(); ++w) {
        if (!has(q, w)) continue;
        const std::size_t d = (pos(r, w) + m - pos(q, w)) % m;
        if (d > 1) return LinearityViolation{q, v, w, d};
      }
    }
  }
  return std::nullopt;
}

std::optional<State> two_cell_ambiguity(const Assignment& a, Key v) {
  const std::size_t m = a.cells(), b = a.universe() + 1;
  auto code = [&](State q, std::size_t i) {
    const auto& c = a[q];
    return (i * b + slot(c[i], a.universe())) * b + slot(c[(i + 1) % m], a.universe());
  };
  std::unordered_set<std::size_t> seen;
  for (State q : a.states()) {
    if (!has(q, v)) continue;
    for (std::size_t i = 0; i < m; ++i) seen.insert(code(q, i));
  }
  for (State q : a.states()) {
    if (has(q, v)) continue;
    bool all = true;
    for (std::size_t i = 0; i < m && all; ++i) all = seen.count(code(q, i)) != 0;
    if (all) return q;
  }
  return std::nullopt;
}

std::optional<Ambiguity> any_two_cell_ambiguity(const Assignment& a) {
  for (Key v = 0; v < a.universe(); ++v) {
    if (auto q = two_cell_ambiguity(a, v)) return Ambiguity{*q, v};
  }
  return std::nullopt;
}

bool counting_condition(double m, double u, double t, std::size_t n, std::size_t k) {
  const auto top = static_cast<std::size_t>(t) + 1;
  double sum = 0;
  for (std::size_t l = 0; l <= std::min(top, n); ++l) {
    double c = 1;
    for (std::size_t j = 0; j < l; ++j) c = c * static_cast<double>(top - j) / static_cast<double>(j + 1);
    sum += c;
  }
  return m < u / t && t < sum / std::ldexp(1.0, static_cast<int>(k)) - 2;
}

std::vector<HashFn> all_hashes(std::size_t u, std::size_t m) {
  std::vector<HashFn> out;
  std::vector<std::uint32_t> t(u, 0);
  for (;;) {
    out.push_back(HashFn::from_table(m, t));
    std::size_t i = u;
    while (i > 0 && ++t[i - 1] == m) t[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

nlohmann::json to_json(const Assignment& a) {
  nlohmann::json states = nlohmann::json::array();
  for (State q : a.states()) {
    std::vector<Key> members;
    for (Key k = 0; k < a.universe(); ++k) {
      if (has(q, k)) members.push_back(k);
    }
    nlohmann::json cells = nlohmann::json::array();
    for (Key k : a[q]) cells.push_back(k == kEmpty ? nlohmann::json(nullptr) : nlohmann::json(k));
    states.push_back({{"state", members}, {"cells", cells}});
  }
  return {{"u", a.universe()}, {"m", a.cells()}, {"n", a.capacity()}, {"states", states}};
}

}  // namespace sqhi::lb
