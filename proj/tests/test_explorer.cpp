#include <gtest/gtest.h>

#include <set>

#include "sqhi/canonical.hpp"
#include "sqhi/explorer.hpp"

using namespace sqhi;

namespace {

constexpr OpKind kIns = OpKind::kInsert;
constexpr OpKind kDel = OpKind::kDelete;
constexpr OpKind kLook = OpKind::kLookup;

std::string check_of(const Report& r) { return r.ok ? "ok" : r.violation->check + ": " + r.violation->detail; }

}  // namespace

TEST(Explorer, SingleProcessPassesEveryAudit) {
  const HashFn h(16, 5, 2);
  const Scenario sc{"solo", h, {3}, {{{kIns, 1}, {kLook, 3}, {kDel, 3}, {kIns, 3}, {kDel, 1}}}};
  const Report r = explore_exhaustive(sc);
  EXPECT_EQ(check_of(r), "ok");
  EXPECT_TRUE(linearizable(run_scripted(sc, {}).history, std::uint64_t{1} << 3));
}

TEST(Explorer, ZeroOperationsVacuouslyPass) {
  const HashFn h(16, 4, 2);
  const Scenario sc{"idle", h, {1, 2}, {{}, {}}};
  const Report r = explore_exhaustive(sc);
  EXPECT_EQ(check_of(r), "ok");
  EXPECT_EQ(r.states, 1u);
  EXPECT_EQ(r.max_completion_free, 0u);
}

TEST(Explorer, InsertsSharingAHomeOnFourCells) {
  const HashFn h = HashFn::from_table(4, {0, 2, 2});
  const Scenario sc{"ii", h, {}, {{{kIns, 1}}, {{kIns, 2}}}};
  const Report r = explore_exhaustive(sc);
  EXPECT_EQ(check_of(r), "ok");
  EXPECT_GT(r.states, 10u);
  EXPECT_GT(r.stats.quiescent_checks, 0u);
}

TEST(Explorer, ThreeProcessesOnFiveCells) {
  const HashFn h = HashFn::from_table(5, {0, 1, 1, 2});
  const Scenario sc{"idl", h, {2}, {{{kIns, 1}}, {{kDel, 2}}, {{kLook, 1}}}};
  const Report r = explore_exhaustive(sc);
  EXPECT_EQ(check_of(r), "ok");
}

TEST(Explorer, SoloOperationCompletesWithinLinearSteps) {
  for (std::size_t m : {4u, 8u, 16u}) {
    const HashFn h(32, m, 7);
    std::vector<Key> initial;
    for (Key k = 0; initial.size() < m / 2; ++k) initial.push_back(k);
    for (OpKind kind : {kIns, kDel, kLook}) {
      const Scenario sc{"solo", h, initial, {{{kind, 20}}}};
      const Report r = explore_exhaustive(sc);
      ASSERT_EQ(check_of(r), "ok");
      EXPECT_LE(r.max_completion_free + 1, 10 * m) << "m=" << m;
    }
  }
}

TEST(Explorer, PairScenariosCoverTheRequiredShapes) {
  for (std::size_t m : {4u, 5u}) {
    const auto scs = pair_scenarios(m);
    EXPECT_EQ(scs.size(), 54u);
    for (const auto& sc : scs) {
      std::set<Key> keys(sc.initial.begin(), sc.initial.end());
      for (const auto& p : sc.programs) {
        for (const auto& op : p) {
          if (op.kind == kIns) keys.insert(op.key);
        }
      }
      EXPECT_LE(keys.size(), m - 1) << sc.name;
    }
  }
}

TEST(Explorer, SomePairScenariosExhaustively) {
  const auto scs = pair_scenarios(4);
  for (std::size_t i = 0; i < scs.size(); i += 7) {
    const Report r = explore_exhaustive(scs[i]);
    EXPECT_EQ(check_of(r), "ok") << scs[i].name;
    // Two processes, each within the solo bound of 10m steps.
    EXPECT_LE(r.max_completion_free + 1, 2 * 10 * 4u) << scs[i].name;
  }
}

// A quiescent point reached while a lookup is still pending must already be
// canonical.
TEST(Explorer, QuiescentWithPendingLookup) {
  const HashFn h = HashFn::from_table(5, {0, 1, 1, 1});
  const Scenario sc{"q", h, {3}, {{{kIns, 1}, {kDel, 3}}, {{kLook, 1}}}};
  World w(sc, {}, true);
  bool done = false;
  ASSERT_FALSE(w.step(1, done));  // lookup takes its first step
  ASSERT_FALSE(done);
  while (w.enabled().front() == 0) ASSERT_FALSE(w.step(0, done));
  EXPECT_TRUE(w.state_quiescent());
  EXPECT_EQ(w.snapshot(), canonical(std::vector<Key>{1}, h).cells());
  while (!w.finished()) ASSERT_FALSE(w.step(w.enabled().front(), done));
  EXPECT_TRUE(linearizable(w.history(), std::uint64_t{1} << 3));
}

TEST(Explorer, RandomSchedulesAreReplayable) {
  const Scenario sc = random_scenario(3, 5, 6, 3, 2);
  const Report a = explore_random(sc, 40, 1);
  const Report b = explore_random(sc, 40, 1);
  ASSERT_TRUE(a.ok);
  const Report c = run_scripted(sc, a.schedule);
  EXPECT_EQ(report_json(sc, a).dump(), report_json(sc, b).dump());
  EXPECT_EQ(c.history.size(), a.history.size());
}

TEST(Explorer, ScriptedRunRecordsSchedule) {
  const HashFn h = HashFn::from_table(4, {0, 2, 2});
  const Scenario sc{"ii", h, {}, {{{kIns, 1}}, {{kIns, 2}}}};
  const Report r = run_scripted(sc, {0, 1, 0, 1, 0, 1});
  EXPECT_TRUE(r.ok);
  ASSERT_GE(r.schedule.size(), 6u);
  EXPECT_EQ(std::vector<ProcessId>(r.schedule.begin(), r.schedule.begin() + 6),
            (std::vector<ProcessId>{0, 1, 0, 1, 0, 1}));
  EXPECT_EQ(r.snapshot, canonical(std::vector<Key>{1, 2}, h).cells());
}

TEST(Explorer, SerialAndParallelSweepsAgree) {
  std::vector<Scenario> scs;
  for (std::uint64_t s = 0; s < 12; ++s) scs.push_back(random_scenario(s, 5, 6, 3, 2));
  const SweepResult a = sweep_random(scs, 30);
  const SweepResult b = sweep_random_parallel(scs, 30);
  EXPECT_FALSE(a.failed_scenario);
  EXPECT_EQ(a.schedules, 360u);
  EXPECT_EQ(a.schedules, b.schedules);
  EXPECT_EQ(a.stats.steps, b.stats.steps);
  EXPECT_EQ(a.stats.quiescent_checks, b.stats.quiescent_checks);
  EXPECT_EQ(a.max_completion_free, b.max_completion_free);
}

TEST(Explorer, JsonRoundTrip) {
  const Scenario sc = pair_scenarios(5)[4];
  const Scenario back = scenario_from_json(to_json(sc));
  EXPECT_EQ(to_json(back), to_json(sc));
  const Report r = run_scripted(sc, {1, 1, 0});
  const auto j = report_json(sc, r);
  for (const char* k : {"config", "seed", "schedule", "events", "snapshot"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["snapshot"].size(), 5u);
  EXPECT_TRUE(j["snapshot"][0].contains("mark"));
}

// Releasing the previous cell with the lookahead read before the shift leaves
// a stable cell whose lookahead disagrees with its neighbour.
TEST(Mutation, StaleReleaseBreaksStableLookahead) {
  int caught = 0, as_b = 0;
  for (auto sc : pair_scenarios(4)) {
    sc.mutation = Mutation::kStaleReleaseLookahead;
    const Report r = explore_exhaustive(sc);
    if (r.ok) continue;
    ++caught;
    as_b += r.violation->check == "structure.b";
    EXPECT_EQ(r.violation->check.rfind("structure.", 0), 0u) << sc.name;
  }
  EXPECT_GT(caught, 0);
  EXPECT_GT(as_b, caught / 2);
}

// Skipping the second SC of a DSC, or its recovery SC, is harmless: the
// same tuple is written by whoever helps the unstable cell next.
TEST(Mutation, SkippedSecondScIsRepairedByHelpers) {
  for (Mutation mu : {Mutation::kSkipDscSecondSc, Mutation::kSkipDscRecover}) {
    for (auto sc : pair_scenarios(4)) {
      sc.mutation = mu;
      EXPECT_EQ(check_of(explore_exhaustive(sc)), "ok") << sc.name;
    }
  }
}

// A lookup that reads <a, b, D> while b still sits at its home just after the
// D cell can neither answer nor puncture, so it restarts without anyone
// having written. With the delete stalled there, the schedule never ends.
TEST(Progress, LookupSpinsBehindStalledDelete) {
  for (std::size_t m : {4u, 5u}) {
    const Scenario sc = stalled_delete_scenario(m);
    AuditSet no_blame;
    no_blame.restart_blame = false;
    const Report r = explore_exhaustive(sc, no_blame);
    ASSERT_FALSE(r.ok);
    EXPECT_EQ(r.violation->check, "lock-freedom") << m;

    // The delete runs up to its D write, then only the lookup is scheduled.
    World w(sc, no_blame, false);
    bool done = false;
    while (w.snapshot()[2].mark != Mark::kDeleting) ASSERT_FALSE(w.step(0, done));
    EXPECT_EQ(w.snapshot()[2], (Cell{4, 0, Mark::kDeleting}));
    const auto before = w.snapshot();
    for (int i = 0; i < 200; ++i) {
      ASSERT_FALSE(w.step(1, done));
      ASSERT_FALSE(done);
    }
    EXPECT_EQ(w.snapshot(), before);
    EXPECT_GT(w.stats().restarts, 10u);

    const Report blamed = explore_exhaustive(sc);
    ASSERT_FALSE(blamed.ok);
    EXPECT_EQ(blamed.violation->check, "restart-blame");
    EXPECT_EQ(blamed.violation->detail.rfind("lookup 2", 0), 0u);
  }
}

// Letting the delete finish releases the lookup.
TEST(Progress, StalledDeleteResumedLetsLookupFinish) {
  AuditSet no_blame;
  no_blame.restart_blame = false;
  const Scenario sc = stalled_delete_scenario(4);
  World w(sc, no_blame, true);
  bool done = false;
  while (w.snapshot()[2].mark != Mark::kDeleting) ASSERT_FALSE(w.step(0, done));
  for (int i = 0; i < 50; ++i) ASSERT_FALSE(w.step(1, done));
  while (!w.finished()) {
    for (ProcessId p : w.enabled()) ASSERT_FALSE(w.step(p, done));
  }
  EXPECT_TRUE(linearizable(w.history(), 0b10001));
}
