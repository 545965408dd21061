#include <omp.h>

#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "sqhi/explorer.hpp"

namespace sqhi {

namespace {

constexpr Key kA = 1, kB = 2, kFill = 3;

enum class Filler { kNone, kSameHome, kPrevHome };
enum class Relation { kSameKey, kSharedHome, kAdjacentHome };

const char* name(Filler f) {
  switch (f) {
    case Filler::kNone: return "nofill";
    case Filler::kSameHome: return "fill-same";
    case Filler::kPrevHome: return "fill-prev";
  }
  return "";
}

const char* name(Relation r) {
  switch (r) {
    case Relation::kSameKey: return "same-key";
    case Relation::kSharedHome: return "shared-home";
    case Relation::kAdjacentHome: return "adjacent-home";
  }
  return "";
}

}  // namespace

std::vector<Scenario> pair_scenarios(std::size_t m) {
  constexpr OpKind kIns = OpKind::kInsert, kDel = OpKind::kDelete, kLook = OpKind::kLookup;
  std::vector<Scenario> out;
  for (std::size_t home : {std::size_t{0}, m - 1}) {
    for (Filler fill : {Filler::kNone, Filler::kSameHome, Filler::kPrevHome}) {
      for (Relation rel : {Relation::kSameKey, Relation::kSharedHome, Relation::kAdjacentHome}) {
        std::vector<std::uint32_t> t(4, 0);
        t[kA] = static_cast<std::uint32_t>(home);
        t[kB] = static_cast<std::uint32_t>(rel == Relation::kAdjacentHome ? (home + 1) % m : home);
        t[kFill] = static_cast<std::uint32_t>(fill == Filler::kPrevHome ? (home + m - 1) % m : home);
        const HashFn h = HashFn::from_table(m, t);
        const Key b = rel == Relation::kSameKey ? kA : kB;
        std::vector<Key> base;
        if (fill != Filler::kNone) base.push_back(kFill);
        const std::string tag = std::string(name(rel)) + "/" + name(fill) + "/h" + std::to_string(home);

        auto with = [&](std::vector<Key> extra) {
          extra.insert(extra.end(), base.begin(), base.end());
          return extra;
        };
        out.push_back({"insert||insert " + tag, h, base,
                       {{{kIns, kA}, {kDel, kA}}, {{kIns, b}, {kLook, kA}}}});
        out.push_back({"insert||delete " + tag, h, with({b}),
                       {{{kIns, kA}, {kLook, b}}, {{kDel, b}, {kIns, b}}}});
        out.push_back({"delete||lookup " + tag, h, with({kA}),
                       {{{kDel, kA}, {kIns, b}}, {{kLook, kA}, {kLook, b}}}});
      }
    }
  }
  return out;
}

Scenario stalled_delete_scenario(std::size_t m) {
  if (m < 4) throw std::invalid_argument("stalled-delete scenario needs m >= 4");
  // 4 and 0 sit at their homes 2 and 3. The delete marks cell 2 <4,0,D>,
  // which the lookup of 2 (home 2) then keeps reading.
  std::vector<std::uint32_t> t(5, 0);
  t[0] = 3;
  t[2] = 2;
  t[4] = 2;
  return Scenario{"stalled-delete-m" + std::to_string(m), HashFn::from_table(m, t), {4, 0},
                  {{{OpKind::kDelete, 0}}, {{OpKind::kLookup, 2}}}, Mutation::kNone};
}

Scenario random_scenario(std::uint64_t seed, std::size_t m, std::size_t u, std::size_t processes,
                         std::size_t ops) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> t(u);
  for (auto& x : t) x = static_cast<std::uint32_t>(rng() % m);
  Scenario sc{"random-" + std::to_string(seed), HashFn::from_table(m, t), {}, {}};
  std::set<Key> keys;
  for (Key k = 0; k < u && keys.size() < (m - 1) / 2; ++k) {
    if (rng() % 3 == 0) keys.insert(k);
  }
  sc.initial.assign(keys.begin(), keys.end());
  for (std::size_t p = 0; p < processes; ++p) {
    std::vector<ProgramOp> prog;
    for (std::size_t j = 0; j < ops; ++j) {
      ProgramOp op{static_cast<OpKind>(rng() % 3), static_cast<Key>(rng() % u)};
      if (op.kind == OpKind::kInsert && !keys.count(op.key)) {
        if (keys.size() + 1 > m - 1) {
          op.kind = OpKind::kLookup;
        } else {
          keys.insert(op.key);
        }
      }
      prog.push_back(op);
    }
    sc.programs.push_back(std::move(prog));
  }
  return sc;
}

namespace {

void merge(SweepResult& r, std::size_t index, const Report& rep) {
  r.schedules += rep.schedules;
  r.max_completion_free = std::max(r.max_completion_free, rep.max_completion_free);
  r.stats.steps += rep.stats.steps;
  r.stats.completed_ops += rep.stats.completed_ops;
  r.stats.quiescent_checks += rep.stats.quiescent_checks;
  r.stats.restarts += rep.stats.restarts;
  r.stats.blamed_restarts += rep.stats.blamed_restarts;
  r.stats.audits += rep.stats.audits;
  if (!rep.ok && (!r.failed_scenario || index < *r.failed_scenario)) {
    r.failed_scenario = index;
    r.failure = rep;
  }
}

}  // namespace

SweepResult sweep_random(const std::vector<Scenario>& scenarios, std::uint64_t seeds,
                         AuditSet audits) {
  SweepResult r;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    merge(r, i, explore_random(scenarios[i], 0, seeds, audits));
  }
  return r;
}

SweepResult sweep_random_parallel(const std::vector<Scenario>& scenarios, std::uint64_t seeds,
                                  AuditSet audits) {
  std::vector<Report> reports(scenarios.size());
  const auto n = static_cast<std::int64_t>(scenarios.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    reports[i] = explore_random(scenarios[i], 0, seeds, audits);
  }
  SweepResult r;
  for (std::size_t i = 0; i < reports.size(); ++i) merge(r, i, reports[i]);
  return r;
}

}  // namespace sqhi
