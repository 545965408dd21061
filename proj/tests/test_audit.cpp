#include <gtest/gtest.h>

#include <random>

#include "sqhi/audit.hpp"
#include "sqhi/canonical.hpp"
#include "sqhi/llsc_memory.hpp"
#include "sqhi/table.hpp"

using namespace sqhi;

namespace {

constexpr Key kA = 30, kB = 20, kC = 10, kD = 5, kE = 7;

HashFn figure_hash() {
  std::vector<std::uint32_t> t(32, 0);
  t[kA] = t[kB] = t[kC] = 2;
  t[kD] = 3;
  t[kE] = 6;
  return HashFn::from_table(8, t);
}

Cell S(Key v, Key n) { return {v, n, Mark::kStable}; }
Cell I(Key v, Key n) { return {v, n, Mark::kInserting}; }
Cell D(Key v, Key n) { return {v, n, Mark::kDeleting}; }

std::string check_of(const std::optional<Violation>& v) { return v ? v->check : "none"; }

// Fig. 1 after the first propagation of insert(b): <a,b,I> <b,c,I>.
std::vector<Cell> figure_one_middle() {
  const std::vector<Key> before{kA, kC, kD, kE};
  auto cells = canonical(before, figure_hash()).cells();
  cells[2] = I(kA, kB);
  cells[3] = I(kB, kC);
  return cells;
}

Ghost figure_one_ghost() {
  Ghost g(8, 1);
  g.tag[2] = g.tag[3] = 1;
  g.ops[1].initial = 2;
  g.ops[1].key = kB;
  g.ops[1].propagated = 1u << 3;
  return g;
}

}  // namespace

TEST(OrderingInvariant, EmptyTablePasses) {
  const HashFn h(8, 5, 1);
  EXPECT_FALSE(check_ordering_invariant(std::vector<Cell>(5), h));
}

TEST(OrderingInvariant, CanonicalRepsPass) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    const std::size_t m = 2 + rng() % 12;
    const HashFn h(32, m, rng());
    std::vector<Key> keys;
    for (std::size_t k = 0; k + 1 < m; ++k) {
      if (rng() % 2) keys.push_back(static_cast<Key>(rng() % 32));
    }
    const auto cells = canonical(keys, h).cells();
    EXPECT_EQ(check_of(check_ordering_invariant(cells, h)), "none");
    EXPECT_EQ(check_of(check_stable_unstable(cells, h)), "none");
    EXPECT_EQ(check_of(check_monotone_priority(cells, h)), "none");
  }
}

TEST(OrderingInvariant, ClauseAOutrankedAtHome) {
  // v = 3 sits in cell 3, but its home h(3) = 1 holds 0, which it outranks.
  const HashFn h = HashFn::from_table(5, {1, 0, 2, 1});
  std::vector<Cell> a{S(kEmpty, 0), S(0, 2), S(2, 3), S(3, kEmpty), S(kEmpty, kEmpty)};
  const auto v = check_ordering_invariant(a, h);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->check, "ordering.a");
  EXPECT_EQ(v->cell, 3u);
}

TEST(OrderingInvariant, ClauseBLookaheadOutrankedByNextValue) {
  const HashFn h = HashFn::from_table(4, {0, 0, 0});
  // Lookahead of cell 0 claims empty but cell 1 holds 1, not at its home.
  std::vector<Cell> a{S(2, kEmpty), S(1, kEmpty), S(kEmpty, kEmpty), S(kEmpty, 2)};
  EXPECT_EQ(check_of(check_ordering_invariant(a, h)), "ordering.b");
}

TEST(OrderingInvariant, ClauseCLookaheadOutranksValue) {
  const HashFn h = HashFn::from_table(4, {0, 0, 0});
  std::vector<Cell> a{I(kEmpty, 1), S(kEmpty, kEmpty), S(kEmpty, kEmpty), S(kEmpty, kEmpty)};
  // The lookahead 1 outranks the empty value beside it, and 1 does not hash
  // to cell 1.
  EXPECT_EQ(check_of(check_ordering_invariant(a, h)), "ordering.c");
}

TEST(StableUnstable, CanonicalPasses) {
  const HashFn h = figure_hash();
  const std::vector<Key> keys{kA, kB, kC, kD, kE};
  EXPECT_FALSE(check_stable_unstable(canonical(keys, h).cells(), h));
}

TEST(StableUnstable, FigureOneMiddlePanelPassesWithGhost) {
  const HashFn h = figure_hash();
  const auto a = figure_one_middle();
  const Ghost g = figure_one_ghost();
  EXPECT_EQ(check_of(check_ordering_invariant(a, h)), "none");
  EXPECT_EQ(check_of(check_stable_unstable(a, h, &g)), "none");
  EXPECT_EQ(check_of(check_presence(a, h, g)), "none");
}

TEST(StableUnstable, ClauseBStableLookaheadMismatch) {
  const HashFn h = figure_hash();
  auto a = canonical(std::vector<Key>{kA, kC}, h).cells();
  a[2] = S(kA, kB);  // cell 3 holds c
  EXPECT_EQ(check_of(check_stable_unstable(a, h)), "structure.b");
}

TEST(StableUnstable, ClauseAValueEqualsLookahead) {
  const HashFn h = figure_hash();
  auto a = canonical(std::vector<Key>{kA, kC}, h).cells();
  a[2] = I(kA, kA);
  EXPECT_EQ(check_of(check_stable_unstable(a, h)), "structure.a");
}

TEST(StableUnstable, ClauseCUnstableWithEmptyLookahead) {
  const HashFn h = figure_hash();
  auto a = canonical(std::vector<Key>{kA, kC}, h).cells();
  a[2] = D(kA, kEmpty);
  EXPECT_EQ(check_of(check_stable_unstable(a, h)), "structure.c");
}

TEST(StableUnstable, ClauseERequiresPropagationToMatchLookahead) {
  const HashFn h = figure_hash();
  auto a = figure_one_middle();
  Ghost g = figure_one_ghost();
  // Ghost says cell 4 was propagated into, but cell 3's lookahead c is not
  // the value in cell 4.
  g.ops[1].propagated |= 1u << 4;
  EXPECT_EQ(check_of(check_stable_unstable(a, h, &g)), "structure.e");
}

TEST(StableUnstable, GhostTagsMustCoverUnstableCells) {
  const HashFn h = figure_hash();
  const auto a = figure_one_middle();
  Ghost g = figure_one_ghost();
  g.tag[3] = Ghost::kNone;
  EXPECT_EQ(check_of(check_stable_unstable(a, h, &g)), "ghost.untagged-unstable");
  // Without a ghost, clauses d and e are not evaluated.
  EXPECT_EQ(check_of(check_stable_unstable(a, h)), "none");
}

TEST(StableUnstable, ClauseDDeleteWithoutPropagation) {
  // Fig. 2 after the initial delete SC: <a,b,D>, next cell still holds b.
  std::vector<std::uint32_t> t(32, 0);
  t[kA] = t[kB] = 2;
  t[kC] = 3;
  t[kD] = 4;
  t[kE] = 6;
  const HashFn h = HashFn::from_table(8, t);
  auto a = canonical(std::vector<Key>{kA, kB, kC, kD, kE}, h).cells();
  a[2] = D(kA, kB);
  Ghost g(8, 1);
  g.tag[2] = 1;
  g.ops[1].initial = 2;
  g.ops[1].key = kB;
  EXPECT_EQ(check_of(check_stable_unstable(a, h, &g)), "none");
  // Claiming a propagation into cell 3 that did not happen breaks clause d.
  g.ops[1].propagated = 1u << 3;
  EXPECT_EQ(check_of(check_stable_unstable(a, h, &g)), "structure.d");
}

TEST(Presence, LogicalAndPhysicalMembership) {
  const HashFn h = figure_hash();
  const auto a = figure_one_middle();
  EXPECT_TRUE(physically_in(a, kB));
  EXPECT_TRUE(logically_in(a, h, kB));
  EXPECT_FALSE(physically_in(a, 99));
}

TEST(Presence, AmbiguousWithoutDanglingOp) {
  const HashFn h = figure_hash();
  auto a = canonical(std::vector<Key>{kA, kC}, h).cells();
  // b only in a lookahead that is outranked by the value it sits beside:
  // physically present, logically absent, with no operation to blame.
  a[1] = I(kEmpty, kB);
  const Ghost g(8, 0);
  EXPECT_EQ(check_of(check_presence(a, h, g)), "presence.ambiguous");
}

TEST(Presence, TwoDanglingOpsOnOneKey) {
  const HashFn h = figure_hash();
  const auto a = canonical(std::vector<Key>{kA}, h).cells();
  Ghost g(8, 2);
  g.tag[1] = 1;
  g.tag[4] = 2;
  g.ops[1] = {1, 0, kB};
  g.ops[2] = {4, 0, kB};
  EXPECT_EQ(check_of(check_presence(a, h, g)), "presence.one-dangling");
}

TEST(Sqhi, SoloInsertMatchesCanonical) {
  const HashFn h(16, 6, 9);
  SimulatedMemory mem(6, 1);
  HashTable table(mem, h);
  table.insert(4);
  EXPECT_TRUE(check_sqhi(mem.snapshot(), h, std::uint64_t{1} << 4));
  EXPECT_FALSE(check_sqhi(mem.snapshot(), h, std::uint64_t{1} << 5));
}

TEST(Sqhi, AnyUnstableMarkFails) {
  const HashFn h(16, 6, 9);
  auto a = canonical(std::vector<Key>{4}, h).cells();
  EXPECT_TRUE(check_sqhi(a, h, std::uint64_t{1} << 4));
  a[h(4)].mark = Mark::kInserting;
  EXPECT_FALSE(check_sqhi(a, h, std::uint64_t{1} << 4));
}

TEST(Sqhi, OverCapacityStateNeverMatches) {
  const HashFn h(16, 3, 1);
  EXPECT_FALSE(check_sqhi(std::vector<Cell>(3), h, 0b111));
}
