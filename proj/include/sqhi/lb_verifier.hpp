#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "sqhi/hash.hpp"
#include "sqhi/types.hpp"

namespace sqhi::lb {

/// A set of keys from [0, u), bit k = key k.
using State = std::uint32_t;

class ScaleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

constexpr std::size_t kMaxUniverse = 8;
constexpr std::size_t kMaxCells = 6;

/// Every subset of [0, u) with at most n elements, in increasing numeric order.
std::vector<State> enumerate_states(std::size_t u, std::size_t n);

/// can(q) for every state of a (u, n)-dictionary over m cells.
class Assignment {
 public:
  Assignment(std::size_t u, std::size_t m, std::size_t n);

  std::size_t universe() const noexcept { return u_; }
  std::size_t cells() const noexcept { return m_; }
  std::size_t capacity() const noexcept { return n_; }
  const std::vector<State>& states() const noexcept { return states_; }

  const std::vector<Key>& operator[](State q) const { return table_.at(q); }
  std::vector<Key>& operator[](State q) { return table_.at(q); }
  bool contains(State q) const { return q < table_.size() && valid_[q]; }

 private:
  std::size_t u_, m_, n_;
  std::vector<State> states_;
  std::vector<std::vector<Key>> table_;  // indexed by state
  std::vector<bool> valid_;
};

/// A total order on Key u {empty} per cell; the empty value is below every key.
class PriorityScheme {
 public:
  /// Rank by distance from home, ties to the larger key. The Robin Hood order.
  static PriorityScheme age_rule(const HashFn& h);
  /// Larger key wins everywhere, ignoring distance.
  static PriorityScheme key_order(std::size_t m, std::size_t u);
  /// order[i] lists the keys from highest to lowest priority at cell i.
  static PriorityScheme custom(std::vector<std::vector<Key>> order);

  bool greater(std::size_t cell, Key a, Key b) const;
  std::size_t cells() const noexcept { return level_.size(); }

 private:
  std::vector<std::vector<std::uint32_t>> level_;  // level_[cell][key], larger wins
};

/// Linear probing with displacement under `p`: keys are inserted in
/// increasing order; at each cell the higher-priority key stays.
Assignment probe_assignment(const HashFn& h, const PriorityScheme& p, std::size_t n);

/// m = u, cell l holds l iff l is in the state.
Assignment bitmap_assignment(std::size_t u, std::size_t n);

struct NaturalViolation {
  State state;
  std::size_t cell;  // for a missing member: the member
  bool stray;        // true: a cell holds a non-member; false: a member is absent
};
std::optional<NaturalViolation> natural_violation(const Assignment& a);
inline bool is_natural(const Assignment& a) { return !natural_violation(a); }

/// Some v such that every cell takes a common value on a state holding v and
/// a state without v.
std::optional<Key> check_property1(const Assignment& a);
std::vector<Key> property1_witnesses(const Assignment& a);

/// Some v such that at every cell the states holding v show two distinct
/// values, and so do the states without v.
std::optional<Key> check_property2(const Assignment& a);
bool property2_holds(const Assignment& a, Key v);

struct LinearityViolation {
  State state;
  Key added;
  Key moved;
  std::size_t distance;
};
/// Inserting any v into any q moves every element of q forward by 0 or 1
/// cells (cyclically).
std::optional<LinearityViolation> linear_violation(const Assignment& a);
inline bool check_linear(const Assignment& a) { return !linear_violation(a); }

/// A state q without v such that every pair of consecutive cells of can(q)
/// also occurs, at the same place, in can(q') for some q' holding v.
std::optional<State> two_cell_ambiguity(const Assignment& a, Key v);

struct Ambiguity {
  State state;
  Key key;
};
std::optional<Ambiguity> any_two_cell_ambiguity(const Assignment& a);

/// m < u / t and t < (sum_{l <= min(t+1, n)} C(t+1, l)) / 2^k - 2.
bool counting_condition(double m, double u, double t, std::size_t n, std::size_t k);

/// Every function [0, u) -> [0, m), in lexicographic order of the table.
std::vector<HashFn> all_hashes(std::size_t u, std::size_t m);

nlohmann::json to_json(const Assignment& a);

}  // namespace sqhi::lb
