#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sqhi/audit.hpp"
#include "sqhi/hash.hpp"
#include "sqhi/history.hpp"
#include "sqhi/llsc_memory.hpp"
#include "sqhi/operation.hpp"

namespace sqhi {

struct ProgramOp {
  OpKind kind = OpKind::kLookup;
  Key key = 0;
};

/// A closed concurrent program: initial table contents and, per process, the
/// operations it runs in order.
struct Scenario {
  std::string name;
  HashFn hash;
  std::vector<Key> initial;
  std::vector<std::vector<ProgramOp>> programs;
  Mutation mutation = Mutation::kNone;

  std::size_t processes() const { return programs.size(); }
  std::size_t op_count() const;
};

struct AuditSet {
  bool invariants = true;     // ordering a-c, structure a-c
  bool ghost = true;          // structure d-e, single propagation
  bool monotone = true;       // monotone priority
  bool presence = true;       // ambiguous presence, one dangling op per key
  bool restart_blame = true;  // a restart follows some successful write
  bool sqhi = true;
  bool linearizability = true;
};

struct Stats {
  std::uint64_t steps = 0;
  std::uint64_t completed_ops = 0;
  std::uint64_t quiescent_checks = 0;
  std::uint64_t restarts = 0;
  std::uint64_t blamed_restarts = 0;
  std::uint64_t audits = 0;
};

/// One configuration of a scenario: shared memory, every process's step
/// machine, ghost state and the linearizability tracker. Plain value; copies
/// are independent.
class World {
 public:
  World(const Scenario& sc, AuditSet audits, bool record_history);

  std::vector<ProcessId> enabled() const;
  bool finished() const;

  /// Runs one step of process `p` and every enabled audit. `completed` is set
  /// when the step finished an operation.
  std::optional<Violation> step(ProcessId p, bool& completed);

  /// Audits of the initial configuration.
  std::optional<Violation> audit_initial();

  void encode(std::string& out) const;

  const History& history() const noexcept { return history_; }
  std::vector<Cell> snapshot() const { return mem_.snapshot(); }
  const Stats& stats() const noexcept { return stats_; }
  const LinTracker& tracker() const noexcept { return lin_; }
  const Ghost& ghost() const noexcept { return ghost_; }
  bool state_quiescent() const;
  std::uint64_t initial_state() const noexcept { return initial_state_; }

 private:
  struct Proc {
    std::uint32_t next = 0;
    std::uint32_t op_id = 0;
    std::optional<Operation> op;
  };

  std::optional<Violation> update_ghost(const Access& a, std::uint32_t op_id);
  std::optional<Violation> audit_memory();
  std::optional<Violation> audit_quiescent();

  const Scenario* sc_;
  AuditSet audits_;
  bool record_;
  SimulatedMemory mem_;
  std::vector<Proc> procs_;
  std::vector<std::uint32_t> first_id_;
  Ghost ghost_;
  LinTracker lin_;
  std::vector<std::uint8_t> progress_;  // some SC succeeded since p last started
  History history_;
  Stats stats_;
  std::uint64_t initial_state_ = 0;
};

struct Report {
  bool ok = true;
  std::optional<Violation> violation;
  std::vector<ProcessId> schedule;  // leads to the violation, else the last run
  History history;
  std::vector<Cell> snapshot;
  std::uint64_t seed = 0;

  std::uint64_t states = 0;       // exhaustive: distinct configurations
  std::uint64_t schedules = 0;    // random: schedules run
  std::uint64_t max_completion_free = 0;  // longest step run without a completion
  Stats stats;
};

/// Stateful depth-first search over every interleaving. Configurations are
/// deduplicated by a 128-bit hash of their encoding. Any cycle in the state
/// graph is reported as a lock-freedom violation (it is an infinite schedule
/// on which no operation completes).
Report explore_exhaustive(const Scenario& sc, AuditSet audits = {},
                          std::uint64_t state_limit = 20'000'000);

/// Uniformly random schedules, one per seed in [first_seed, first_seed + count).
/// Each history is also checked by the brute-force linearizability search.
Report explore_random(const Scenario& sc, std::uint64_t first_seed, std::uint64_t count,
                      AuditSet audits = {}, std::uint64_t step_cap = 200'000);

/// Runs `schedule`, then finishes the program round-robin.
Report run_scripted(const Scenario& sc, const std::vector<ProcessId>& schedule,
                    AuditSet audits = {});

/// Two-process programs, two operations each, on m cells: insert||insert,
/// insert||delete and delete||lookup on the same key, keys sharing a home
/// and keys with adjacent homes, over several hash placements with a
/// colliding filler key. Every scenario respects the m - 1 capacity.
std::vector<Scenario> pair_scenarios(std::size_t m);

/// delete(0) || lookup(2) with 4 and 0 in the table, m >= 4. If the delete
/// stops right after marking its cell D, the lookup restarts forever: it
/// cannot decide at the D cell, does not puncture, and the next cell still
/// holds the element the delete is about to pull back.
Scenario stalled_delete_scenario(std::size_t m);

/// Random program: `processes` processes with `ops` operations each over
/// keys [0, u), random hash table, random initial set. Total distinct keys
/// (initial plus inserted) stay within m - 1.
Scenario random_scenario(std::uint64_t seed, std::size_t m, std::size_t u, std::size_t processes,
                         std::size_t ops);

struct SweepResult {
  std::uint64_t schedules = 0;
  std::uint64_t max_completion_free = 0;
  Stats stats;
  std::optional<std::size_t> failed_scenario;  // lowest failing index
  Report failure;
};

/// explore_random over every scenario with seeds [0, seeds). The parallel
/// version spreads scenarios over an OpenMP team and returns the same result.
SweepResult sweep_random(const std::vector<Scenario>& scenarios, std::uint64_t seeds,
                         AuditSet audits = {});
SweepResult sweep_random_parallel(const std::vector<Scenario>& scenarios, std::uint64_t seeds,
                                  AuditSet audits = {});

const char* mutation_name(Mutation m);
Mutation mutation_from(const std::string& name);

nlohmann::json to_json(const Scenario& sc);
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json snapshot_json(const std::vector<Cell>& cells);
nlohmann::json history_json(const History& h);
/// {config, seed, schedule, events, snapshot} plus the violation, if any.
nlohmann::json report_json(const Scenario& sc, const Report& r);

}  // namespace sqhi
