// bench: workloads, run-length survey, verification suites and lower-bound
// checks for the SQHI Robin Hood table.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "sqhi/bench.hpp"
#include "sqhi/explorer.hpp"

using namespace sqhi;
using namespace sqhi::bench;

namespace {

struct Common {
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
};

std::uint64_t effective_seed(std::uint64_t seed) {
  if (const char* env = std::getenv("BENCH_SEED"); env != nullptr && *env != '\0') {
    return std::stoull(env);
  }
  return seed;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << text;
}

void emit_rows(const Common& c, const std::string& config, std::uint64_t seed,
               const std::vector<Row>& rs) {
  const std::string hash = fnv1a_hex(config);
  emit(c, c.format == "json" ? to_json(hash, seed, rs).dump(2) + "\n" : to_csv(hash, seed, rs));
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output file (default stdout)");
  app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--seed", c.seed, "Seed (BENCH_SEED overrides)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SQHI Robin Hood hash table bench"};
  app.require_subcommand(1);

  Common run_c, survey_c, verify_c, lb_c;
  WorkloadSpec spec;
  std::string mix = "1:1:2";
  bool no_timing = false;
  auto* run = app.add_subcommand("run", "Multi-threaded workload on the atomic backend");
  add_common(run, run_c);
  run->add_option("--m", spec.m, "Cells");
  run->add_option("--u", spec.u, "Universe size (0: min(8m, 32767))");
  run->add_option("--threads", spec.threads, "Worker threads");
  run->add_option("--mix", mix, "insert:delete:lookup weights");
  run->add_option("--alpha", spec.alpha, "Target load");
  run->add_option("--ops", spec.ops, "Operations over all threads");
  run->add_option("--contention", spec.contention, "Threads sharing each key group (c)");
  run->add_option("--hot-keys", spec.hot_keys, "Keys per group (0: whole share)");
  run->add_option("--checkpoints", spec.checkpoints, "Quiescent checkpoints");
  run->add_flag("--no-timing", no_timing, "Omit wall-clock rows");

  std::vector<std::size_t> survey_ms{1024, 4096, 16384};
  double survey_alpha = 0.5;
  std::uint64_t samples = 10'000, tables = 100;
  auto* survey = app.add_subcommand("survey", "Run-length moments E[N], E[N^3]");
  add_common(survey, survey_c);
  survey->add_option("--m", survey_ms, "Cells (repeatable)");
  survey->add_option("--alpha", survey_alpha, "Load, at most 0.7");
  survey->add_option("--samples", samples, "Samples per m");
  survey->add_option("--tables", tables, "Independent fills the samples are spread over");

  VerifyOptions vopt;
  std::string mutation = "none";
  auto* ver = app.add_subcommand("verify", "Schedule exploration suites");
  add_common(ver, verify_c);
  ver->add_option("profile", vopt.profile, "quick or deep")->check(CLI::IsMember({"quick", "deep"}));
  ver->add_option("--mutation", mutation, "Deliberate defect to inject");
  ver->add_option("--replay-dir", vopt.out_dir, "Where a failing schedule is written");
  ver->add_option("--scenarios", vopt.deep_scenarios, "deep: random programs per process count");
  ver->add_option("--schedules", vopt.deep_schedules, "deep: schedules per program");
  bool safety_only = false;
  ver->add_flag("--safety-only", safety_only, "deep: skip the restart audit");

  LbOptions lopt;
  auto* lbv = app.add_subcommand("lb-verify", "Lower-bound properties at tiny scale");
  add_common(lbv, lb_c);
  lbv->add_option("--u", lopt.u, "Universe size (<= 8)");
  lbv->add_option("--m", lopt.m, "Cells (<= 6)");
  lbv->add_option("--n", lopt.n, "Capacity");
  lbv->add_option("--scheme", lopt.scheme, "agerule, keyorder or a JSON file with per-cell orders");
  lbv->add_option("--max-hashes", lopt.max_hashes, "Sample hashes beyond this many");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      spec.mix = parse_mix(mix);
      spec.seed = effective_seed(run_c.seed);
      const RunStats st = run_bench(spec);
      emit_rows(run_c, config_string(spec), spec.seed, rows(st, !no_timing));
      if (st.sqhi_violations != 0 || st.result_mismatches != 0) return 1;
    } else if (*survey) {
      const std::uint64_t seed = effective_seed(survey_c.seed);
      const auto res = survey_sweep_parallel(survey_ms, survey_alpha, {seed}, samples, tables);
      std::vector<Row> rs;
      std::string config = "survey alpha=" + std::to_string(survey_alpha) +
                           " samples=" + std::to_string(samples) + " tables=" + std::to_string(tables);
      for (const auto& r : res) {
        config += " m=" + std::to_string(r.m);
        for (auto& row : rows(r)) rs.push_back(std::move(row));
      }
      emit_rows(survey_c, config, seed, rs);
    } else if (*ver) {
      vopt.seed = effective_seed(verify_c.seed);
      vopt.mutation = mutation_from(mutation);
      vopt.progress = !safety_only;
      const VerifyResult res = verify(vopt);
      if (verify_c.format == "json") {
        emit(verify_c, res.verdict.dump(2) + "\n");
      } else {
        std::vector<Row> rs{{"ok", res.ok ? 1.0 : 0.0, "bool"}};
        for (const char* k : {"scenarios", "states", "schedules", "max_completion_free", "restart_violations"}) {
          if (res.verdict.contains(k)) rs.push_back({k, res.verdict[k].get<double>(), "count"});
        }
        emit_rows(verify_c, "verify " + vopt.profile + " mutation=" + mutation + (safety_only ? " safety-only" : ""), vopt.seed, rs);
      }
      std::cerr << res.summary << "\n";
      if (!res.ok) {
        if (res.replay_path) std::cerr << "replay: " << *res.replay_path << "\n";
        return 1;
      }
    } else if (*lbv) {
      if (lopt.scheme != "agerule" && lopt.scheme != "keyorder") {
        lopt.custom_file = lopt.scheme;
        lopt.scheme = "custom";
      }
      lopt.seed = effective_seed(lb_c.seed);
      const nlohmann::json j = lb_verify(lopt);
      if (lb_c.format == "json") {
        emit(lb_c, j.dump(2) + "\n");
      } else {
        std::vector<Row> rs;
        for (const char* k : {"hashes", "natural", "with_property1", "with_property2",
                              "property1_witnesses_without_property2", "linear", "ambiguous"}) {
          rs.push_back({k, j[k].get<double>(), "count"});
        }
        for (const char* k : {"lemma_chain", "all_linear", "linear_ambiguity_agree"}) {
          rs.push_back({k, j[k].get<bool>() ? 1.0 : 0.0, "bool"});
        }
        emit_rows(lb_c, "lb-verify " + j["scheme"].get<std::string>() + " u=" + std::to_string(lopt.u) +
                            " m=" + std::to_string(lopt.m) + " n=" + std::to_string(lopt.n),
                  lopt.seed, rs);
      }
    }
  } catch (const TableFullError& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
