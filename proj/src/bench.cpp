#include "sqhi/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "sqhi/canonical.hpp"
#include "sqhi/explorer.hpp"
#include "sqhi/lb_verifier.hpp"
#include "sqhi/llsc_memory.hpp"
#include "sqhi/table.hpp"

namespace sqhi::bench {

Mix parse_mix(const std::string& s) {
  double w[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? s.find(':', pos) : s.size();
    if (end == std::string::npos) throw std::invalid_argument("mix must look like i:d:l");
    try {
      std::size_t used = 0;
      const std::string part = s.substr(pos, end - pos);
      w[i] = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw std::invalid_argument("mix must look like i:d:l");
    }
    if (w[i] < 0) throw std::invalid_argument("mix weights must be non-negative");
    pos = end + 1;
  }
  if (w[0] + w[1] + w[2] <= 0) throw std::invalid_argument("mix needs a positive weight");
  return {w[0], w[1], w[2]};
}

std::string to_string(const Mix& mix) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%g:%g:%g", mix.insert, mix.erase, mix.lookup);
  return buf;
}

std::size_t universe_of(const WorkloadSpec& spec) {
  return spec.u != 0 ? spec.u : std::min(8 * spec.m, AtomicMemory::max_universe());
}

std::size_t pool_size(const WorkloadSpec& spec) {
  const double target = spec.alpha * static_cast<double>(spec.m);
  double p = target;
  // With inserts and deletes drawn uniformly over the pool, a key is present
  // about insert / (insert + delete) of the time.
  if (spec.mix.insert > 0 && spec.mix.erase > 0) {
    p = target * (spec.mix.insert + spec.mix.erase) / spec.mix.insert;
  }
  const auto groups = (spec.threads + spec.contention - 1) / spec.contention;
  const auto n = static_cast<std::size_t>(std::llround(p));
  return std::clamp<std::size_t>(std::max(n, groups), 1, spec.m - 1);
}

void validate(const WorkloadSpec& spec) {
  if (spec.m < 2) throw std::invalid_argument("m must be at least 2");
  if (spec.threads == 0) throw std::invalid_argument("threads must be positive");
  if (spec.contention == 0 || spec.contention > spec.threads) {
    throw std::invalid_argument("contention must be in [1, threads]");
  }
  if (!(spec.alpha >= 0 && spec.alpha < 1)) throw std::invalid_argument("alpha must be in [0, 1)");
  const std::size_t u = universe_of(spec);
  if (u > AtomicMemory::max_universe()) throw std::invalid_argument("universe too large for a cell");
  if (spec.m - 1 > u) throw std::invalid_argument("universe smaller than the table");
  const auto groups = (spec.threads + spec.contention - 1) / spec.contention;
  if (groups > spec.m - 1) throw std::invalid_argument("more key groups than usable cells");
}

std::vector<std::size_t> run_lengths(const std::vector<Cell>& cells) {
  const std::size_t m = cells.size();
  std::vector<std::size_t> out(m, 0);
  std::size_t start = 0;
  while (start < m && cells[start].val != kEmpty) ++start;
  if (start == m) {
    std::fill(out.begin(), out.end(), m);
    return out;
  }
  for (std::size_t k = 1; k <= m;) {
    const std::size_t first = (start + k) % m;
    if (cells[first].val == kEmpty) {
      ++k;
      continue;
    }
    std::size_t len = 0;
    while (cells[(start + k + len) % m].val != kEmpty) ++len;
    for (std::size_t j = 0; j < len; ++j) out[(start + k + j) % m] = len;
    k += len;
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

}  // namespace

RunStats run_bench(const WorkloadSpec& spec) {
  validate(spec);
  RunStats st;
  const std::size_t u = universe_of(spec), m = spec.m, threads = spec.threads;
  const std::size_t c = spec.contention, groups = (threads + c - 1) / c;
  const HashFn h(u, m, spec.seed);
  AtomicMemory mem(m, u, threads);
  HashTable table(mem, h);

  std::mt19937_64 rng(spec.seed);
  std::vector<Key> keys(u);
  std::iota(keys.begin(), keys.end(), Key{0});
  const std::size_t pool = pool_size(spec);
  for (std::size_t i = 0; i < pool; ++i) std::swap(keys[i], keys[i + rng() % (u - i)]);
  keys.resize(pool);

  // expected[j]: is keys[j] in the set. Written only by the thread that owns
  // the key when contention is 1.
  std::vector<std::uint8_t> expected(pool, 0);
  const double rho = std::min(1.0, spec.alpha * static_cast<double>(m) / static_cast<double>(pool));
  std::uniform_real_distribution<double> unit(0, 1);
  for (std::size_t j = 0; j < pool; ++j) {
    if (unit(rng) < rho) {
      expected[j] = 1;
      table.insert(keys[j]);
    }
  }

  std::vector<std::vector<std::size_t>> share(groups);
  for (std::size_t j = 0; j < pool; ++j) {
    auto& s = share[j % groups];
    if (spec.hot_keys == 0 || s.size() < spec.hot_keys) s.push_back(j);
  }

  const std::size_t phases = std::max<std::size_t>(1, spec.checkpoints);
  std::vector<RunStats> per(threads);
  std::atomic<bool> full{false};
  std::string error;
  double run_mean = 0, run_third = 0;
  std::uint64_t samples = 0;

  auto checkpoint = [&] {
    const std::vector<Cell> snap = mem.snapshot();
    std::vector<Key> set;
    if (c == 1) {
      for (std::size_t j = 0; j < pool; ++j) {
        if (expected[j]) set.push_back(keys[j]);
      }
    } else {
      for (const Cell& cell : snap) {
        if (cell.val != kEmpty && cell.val < u) set.push_back(cell.val);
      }
    }
    ++st.checkpoints;
    ++st.sqhi_checks;
    try {
      if (snap != canonical(set, h).cells()) ++st.sqhi_violations;
    } catch (const CapacityExceeded&) {
      ++st.sqhi_violations;
    }
    const auto lens = run_lengths(snap);
    double s1 = 0, s3 = 0;
    for (std::size_t n : lens) {
      s1 += static_cast<double>(n);
      s3 += std::pow(static_cast<double>(n), 3);
    }
    run_mean += s1 / static_cast<double>(m);
    run_third += s3 / static_cast<double>(m);
    ++samples;
    st.occupancy = static_cast<std::size_t>(
        std::count_if(snap.begin(), snap.end(), [](const Cell& x) { return x.val != kEmpty; }));
  };

  const auto t0 = Clock::now();
  omp_set_dynamic(0);
#pragma omp parallel num_threads(static_cast<int>(threads))
  {
    const auto tid = static_cast<std::size_t>(omp_get_thread_num());
    RunStats& mine = per[tid];
    const auto& my_keys = share[tid / c];
    std::seed_seq sseq{spec.seed, static_cast<std::uint64_t>(tid)};
    std::mt19937_64 trng(sseq);
    std::discrete_distribution<int> pick({spec.mix.insert, spec.mix.erase, spec.mix.lookup});
    const std::uint64_t count = spec.ops / threads + (tid < spec.ops % threads ? 1 : 0);

    for (std::size_t phase = 0; phase < phases; ++phase) {
      const std::uint64_t lo = count * phase / phases, hi = count * (phase + 1) / phases;
      for (std::uint64_t i = lo; i < hi && !full.load(std::memory_order_relaxed); ++i) {
        const auto kind = static_cast<OpKind>(pick(trng));
        const std::size_t j = my_keys[trng() % my_keys.size()];
        OpOutcome out;
        try {
          out = table.run(kind, keys[j], static_cast<ProcessId>(tid));
        } catch (const std::exception& e) {
#pragma omp critical
          error = e.what();
          full = true;
          break;
        }
        if (out.status == OpStatus::kTableFull) {
          full = true;
          break;
        }
        ++mine.ops;
        mine.steps += out.steps;
        mine.max_steps = std::max(mine.max_steps, out.steps);
        mine.restarts += out.restarts;
        if (kind == OpKind::kInsert) ++mine.inserts;
        if (kind == OpKind::kDelete) ++mine.deletes;
        if (kind == OpKind::kLookup) ++mine.lookups;
        if (c == 1) {
          const auto [next, value] = seq_apply(expected[j], kind, 0);
          mine.result_mismatches += value != out.value;
          expected[j] = static_cast<std::uint8_t>(next);
        }
      }
#pragma omp barrier
#pragma omp single
      if (spec.checkpoints > 0 && !full) checkpoint();
    }
  }
  st.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

  if (!error.empty()) throw std::runtime_error(error);
  if (full) {
    throw TableFullError("table full: m=" + std::to_string(m) + " pool=" + std::to_string(pool) +
                         " occupancy at last checkpoint=" + std::to_string(st.occupancy));
  }
  for (const RunStats& p : per) {
    st.ops += p.ops;
    st.steps += p.steps;
    st.max_steps = std::max(st.max_steps, p.max_steps);
    st.restarts += p.restarts;
    st.inserts += p.inserts;
    st.deletes += p.deletes;
    st.lookups += p.lookups;
    st.result_mismatches += p.result_mismatches;
  }
  if (samples > 0) {
    st.run_mean = run_mean / static_cast<double>(samples);
    st.run_third = run_third / static_cast<double>(samples);
  }
  return st;
}

// ---------------------------------------------------------------------------

SurveyResult run_length_survey(std::size_t m, double alpha, std::uint64_t seed,
                               std::uint64_t samples, std::uint64_t tables) {
  if (m < 2) throw std::invalid_argument("m must be at least 2");
  if (!(alpha >= 0 && alpha <= 0.7)) throw std::invalid_argument("alpha must be in [0, 0.7]");
  if (tables == 0) throw std::invalid_argument("need at least one table");
  const std::size_t u = std::min(8 * m, AtomicMemory::max_universe());
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(alpha * static_cast<double>(m)), m - 1);
  if (n > u) throw std::invalid_argument("table larger than the universe");

  SurveyResult r{m, alpha, seed, samples, tables, n, 0, 0};
  std::vector<Key> keys(u);
  for (std::uint64_t t = 0; t < tables; ++t) {
    std::seed_seq sseq{seed, t};
    std::mt19937_64 rng(sseq);
    const HashFn h(u, m, rng());
    AtomicMemory mem(m, u, 1);
    HashTable table(mem, h);
    std::iota(keys.begin(), keys.end(), Key{0});
    for (std::size_t i = 0; i < n; ++i) {
      std::swap(keys[i], keys[i + rng() % (u - i)]);
      table.insert(keys[i]);
    }
    const auto lens = run_lengths(mem.snapshot());
    const std::uint64_t count = samples / tables + (t < samples % tables ? 1 : 0);
    for (std::uint64_t s = 0; s < count; ++s) {
      const auto len = static_cast<double>(lens[rng() % m]);
      r.mean += len;
      r.third += len * len * len;
    }
  }
  if (samples > 0) {
    r.mean /= static_cast<double>(samples);
    r.third /= static_cast<double>(samples);
  }
  return r;
}

std::vector<SurveyResult> survey_sweep(const std::vector<std::size_t>& ms, double alpha,
                                       const std::vector<std::uint64_t>& seeds, std::uint64_t samples,
                                       std::uint64_t tables) {
  std::vector<SurveyResult> out;
  for (std::size_t m : ms) {
    for (std::uint64_t s : seeds) out.push_back(run_length_survey(m, alpha, s, samples, tables));
  }
  return out;
}

std::vector<SurveyResult> survey_sweep_parallel(const std::vector<std::size_t>& ms, double alpha,
                                                const std::vector<std::uint64_t>& seeds,
                                                std::uint64_t samples, std::uint64_t tables) {
  std::vector<SurveyResult> out(ms.size() * seeds.size());
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = run_length_survey(ms[k / seeds.size()], alpha, seeds[k % seeds.size()], samples, tables);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json violation_json(const Scenario& sc, const Report& r) {
  return {{"scenario", sc.name}, {"check", r.violation->check}, {"detail", r.violation->detail}};
}

std::string write_replay(const std::string& dir, const std::string& profile, const Scenario& sc,
                         const Report& r) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / ("verify-" + profile + "-replay.json");
  std::ofstream(path) << report_json(sc, r).dump(2) << "\n";
  return path.string();
}

}  // namespace

VerifyResult verify(const VerifyOptions& opt) {
  VerifyResult res;
  nlohmann::json& v = res.verdict;
  v["profile"] = opt.profile;
  v["mutation"] = mutation_name(opt.mutation);

  if (opt.profile == "quick") {
    std::vector<Scenario> scs = pair_scenarios(4);
    for (auto& sc : scs) sc.mutation = opt.mutation;
    std::vector<Report> reports(scs.size());
    const auto n = static_cast<std::int64_t>(scs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) reports[i] = explore_exhaustive(scs[i]);
    std::uint64_t states = 0, longest = 0;
    for (std::size_t i = 0; i < scs.size(); ++i) {
      states += reports[i].states;
      longest = std::max(longest, reports[i].max_completion_free);
      if (!reports[i].ok && res.ok) {
        res.ok = false;
        v["violation"] = violation_json(scs[i], reports[i]);
        res.replay_path = write_replay(opt.out_dir, opt.profile, scs[i], reports[i]);
      }
    }
    v["scenarios"] = scs.size();
    v["states"] = states;
    v["max_completion_free"] = longest;
  } else if (opt.profile == "deep") {
    // Safety (invariants, SQHI, linearizability) and the restart audit run as
    // separate sweeps: a restart violation ends a schedule early and would
    // hide whatever the rest of it does.
    AuditSet safety;
    safety.restart_blame = false;
    AuditSet progress{false, false, false, false, true, false, false};
    std::uint64_t schedules = 0, longest = 0, scenarios = 0, livelocked = 0;
    std::optional<std::pair<Scenario, Report>> progress_failure;
    for (std::size_t procs : {3u, 4u}) {
      std::vector<Scenario> scs;
      for (std::uint64_t i = 0; i < opt.deep_scenarios; ++i) {
        scs.push_back(random_scenario(opt.seed * 1'000'003 + procs * 10'007 + i, 5, 6, procs, 2));
        scs.back().mutation = opt.mutation;
      }
      scenarios += scs.size();
      const SweepResult r = sweep_random_parallel(scs, opt.deep_schedules, safety);
      schedules += r.schedules;
      longest = std::max(longest, r.max_completion_free);
      if (r.failed_scenario && res.ok) {
        res.ok = false;
        const Scenario& sc = scs[*r.failed_scenario];
        v["violation"] = violation_json(sc, r.failure);
        res.replay_path = write_replay(opt.out_dir, opt.profile, sc, r.failure);
      }
      if (!opt.progress) continue;
      std::vector<Report> reports(scs.size());
      const auto n = static_cast<std::int64_t>(scs.size());
#pragma omp parallel for schedule(dynamic)
      for (std::int64_t i = 0; i < n; ++i) reports[i] = explore_random(scs[i], 0, opt.deep_schedules, progress);
      for (std::size_t i = 0; i < scs.size(); ++i) {
        if (reports[i].ok) continue;
        ++livelocked;
        if (!progress_failure) progress_failure.emplace(scs[i], reports[i]);
      }
    }
    v["scenarios"] = scenarios;
    v["schedules"] = schedules;
    v["max_completion_free"] = longest;
    v["safety_ok"] = res.ok;
    if (opt.progress) {
      v["restart_violations"] = livelocked;
      if (progress_failure) {
        v["progress_violation"] = violation_json(progress_failure->first, progress_failure->second);
        if (res.ok) {
          res.ok = false;
          v["violation"] = v["progress_violation"];
          res.replay_path =
              write_replay(opt.out_dir, opt.profile, progress_failure->first, progress_failure->second);
        }
      }
    }
    nlohmann::json lb = nlohmann::json::array();
    for (auto [u, m] : {std::pair<std::size_t, std::size_t>{4, 3}, {5, 4}}) {
      for (const char* scheme : {"agerule", "keyorder"}) {
        LbOptions o;
        o.u = u;
        o.m = m;
        o.n = m;
        o.scheme = scheme;
        o.seed = opt.seed;
        nlohmann::json j = lb_verify(o);
        const bool expect_linear = std::string(scheme) == "agerule";
        bool good = j["linear_ambiguity_agree"].get<bool>();
        if (expect_linear) good = good && j["lemma_chain"].get<bool>() && j["all_linear"].get<bool>();
        if (!expect_linear) good = good && !j["all_linear"].get<bool>();
        j["as_expected"] = good;
        if (!good) res.ok = false;
        lb.push_back(std::move(j));
      }
    }
    v["lb"] = lb;
  } else {
    throw std::invalid_argument("profile must be quick or deep");
  }
  v["ok"] = res.ok;
  res.summary = std::string(res.ok ? "ok" : "VIOLATION") + " (" + opt.profile + ")";
  if (v.contains("violation")) {
    res.summary += ": " + v["violation"]["check"].get<std::string>() + " in " +
                   v["violation"]["scenario"].get<std::string>();
  }
  if (v.contains("safety_ok")) {
    res.summary += std::string("; safety ") + (v["safety_ok"].get<bool>() ? "ok" : "violated");
    if (v.contains("restart_violations")) {
      res.summary += ", restart audit failed in " + std::to_string(v["restart_violations"].get<std::uint64_t>()) +
                     " of " + std::to_string(v["scenarios"].get<std::uint64_t>()) + " programs";
    }
  }
  return res;
}

// ---------------------------------------------------------------------------

nlohmann::json lb_verify(const LbOptions& opt) {
  using namespace lb;
  std::optional<std::vector<std::vector<Key>>> custom;
  if (opt.scheme == "custom") {
    std::ifstream in(opt.custom_file);
    if (!in) throw std::invalid_argument("cannot read " + opt.custom_file);
    custom = nlohmann::json::parse(in).at("order").get<std::vector<std::vector<Key>>>();
  } else if (opt.scheme != "agerule" && opt.scheme != "keyorder") {
    throw std::invalid_argument("scheme must be agerule, keyorder or custom");
  }
  if (opt.u > kMaxUniverse || opt.m > kMaxCells || opt.m == 0) {
    throw ScaleError("lb-verify needs u <= 8 and 1 <= m <= 6");
  }

  std::vector<HashFn> hashes;
  if (std::pow(static_cast<double>(opt.m), static_cast<double>(opt.u)) <= static_cast<double>(opt.max_hashes)) {
    hashes = all_hashes(opt.u, opt.m);
  } else {
    std::mt19937_64 rng(opt.seed);
    for (std::size_t i = 0; i < opt.max_hashes; ++i) {
      std::vector<std::uint32_t> t(opt.u);
      for (auto& x : t) x = static_cast<std::uint32_t>(rng() % opt.m);
      hashes.push_back(HashFn::from_table(opt.m, t));
    }
  }

  std::uint64_t natural = 0, with_p1 = 0, with_p2 = 0, p1_not_p2 = 0, linear = 0, ambiguous = 0, disagree = 0;
  nlohmann::json example = nullptr;
  for (const HashFn& h : hashes) {
    const PriorityScheme p = opt.scheme == "agerule"    ? PriorityScheme::age_rule(h)
                             : opt.scheme == "keyorder" ? PriorityScheme::key_order(opt.m, opt.u)
                                                        : PriorityScheme::custom(*custom);
    const Assignment a = probe_assignment(h, p, opt.n);
    natural += is_natural(a);
    const auto w = property1_witnesses(a);
    with_p1 += !w.empty();
    with_p2 += check_property2(a).has_value();
    for (Key v : w) p1_not_p2 += !property2_holds(a, v);
    const auto lv = linear_violation(a);
    const auto amb = any_two_cell_ambiguity(a);
    linear += !lv;
    ambiguous += amb.has_value();
    disagree += !lv == amb.has_value();
    if (lv && example.is_null()) {
      example = {{"hash", std::vector<std::uint32_t>(h.table().begin(), h.table().end())},
                 {"state", lv->state},
                 {"added", lv->added},
                 {"moved", lv->moved},
                 {"distance", lv->distance}};
      if (amb) example["ambiguous"] = {{"state", amb->state}, {"key", amb->key}};
    }
  }
  const std::uint64_t total = hashes.size();
  return {{"u", opt.u},
          {"m", opt.m},
          {"n", opt.n},
          {"scheme", opt.scheme},
          {"hashes", total},
          {"natural", natural},
          {"with_property1", with_p1},
          {"with_property2", with_p2},
          {"property1_witnesses_without_property2", p1_not_p2},
          {"lemma_chain", natural == total && with_p1 == total && p1_not_p2 == 0},
          {"linear", linear},
          {"ambiguous", ambiguous},
          {"all_linear", linear == total},
          {"linear_ambiguity_agree", disagree == 0},
          {"nonlinear_example", example}};
}

// ---------------------------------------------------------------------------

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t x = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    x ^= ch;
    x *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::string config_string(const WorkloadSpec& s) {
  std::ostringstream os;
  os << "run m=" << s.m << " u=" << universe_of(s) << " threads=" << s.threads
     << " mix=" << to_string(s.mix) << " alpha=" << s.alpha << " ops=" << s.ops
     << " contention=" << s.contention << " hot=" << s.hot_keys << " checkpoints=" << s.checkpoints;
  return os.str();
}

std::vector<Row> rows(const RunStats& s, bool timing) {
  auto d = [](std::uint64_t x) { return static_cast<double>(x); };
  std::vector<Row> r{
      {"ops", d(s.ops), "ops"},
      {"steps", d(s.steps), "steps"},
      {"mean_steps", s.mean_steps(), "steps/op"},
      {"max_steps", d(s.max_steps), "steps"},
      {"restarts", d(s.restarts), "count"},
      {"inserts", d(s.inserts), "ops"},
      {"deletes", d(s.deletes), "ops"},
      {"lookups", d(s.lookups), "ops"},
      {"checkpoints", d(s.checkpoints), "count"},
      {"sqhi_checks", d(s.sqhi_checks), "count"},
      {"sqhi_violations", d(s.sqhi_violations), "count"},
      {"result_mismatches", d(s.result_mismatches), "count"},
      {"occupancy", d(s.occupancy), "cells"},
      {"run_mean", s.run_mean, "cells"},
      {"run_third_moment", s.run_third, "cells^3"},
  };
  if (timing) {
    r.push_back({"wall_time", s.wall_seconds, "s"});
    r.push_back({"throughput", s.wall_seconds > 0 ? d(s.ops) / s.wall_seconds : 0.0, "ops/s"});
  }
  return r;
}

std::vector<Row> rows(const SurveyResult& s) {
  const std::string at = "_m" + std::to_string(s.m);
  return {{"samples" + at, static_cast<double>(s.samples), "count"},
          {"tables" + at, static_cast<double>(s.tables), "count"},
          {"occupancy" + at, static_cast<double>(s.occupancy), "cells"},
          {"run_mean" + at, s.mean, "cells"},
          {"run_third_moment" + at, s.third, "cells^3"}};
}

namespace {

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string to_csv(const std::string& config_hash, std::uint64_t seed, const std::vector<Row>& rs,
                   bool header) {
  std::string out = header ? "config_hash,metric,value,unit,seed\n" : "";
  for (const Row& r : rs) {
    out += config_hash + "," + r.metric + "," + number(r.value) + "," + r.unit + "," +
           std::to_string(seed) + "\n";
  }
  return out;
}

nlohmann::json to_json(const std::string& config_hash, std::uint64_t seed, const std::vector<Row>& rs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Row& r : rs) arr.push_back({{"metric", r.metric}, {"value", r.value}, {"unit", r.unit}});
  return {{"config_hash", config_hash}, {"seed", seed}, {"rows", arr}};
}

}  // namespace sqhi::bench
