#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sqhi/bench.hpp"
#include "sqhi/explorer.hpp"

using namespace sqhi;
using namespace sqhi::bench;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Cell full(Key k) { return Cell{k, kEmpty, Mark::kStable}; }

WorkloadSpec small(std::size_t threads, std::size_t c) {
  WorkloadSpec s;
  s.m = 128;
  s.threads = threads;
  s.contention = c;
  s.ops = 4000;
  s.seed = 3;
  return s;
}

}  // namespace

TEST(Mix, ParsesWeights) {
  const Mix m = parse_mix("1:0.5:2");
  EXPECT_EQ(m.insert, 1);
  EXPECT_EQ(m.erase, 0.5);
  EXPECT_EQ(m.lookup, 2);
  EXPECT_EQ(to_string(parse_mix("0:0:1")), "0:0:1");
}

TEST(Mix, RejectsMalformed) {
  for (const char* s : {"", "1:1", "1:1:", "a:1:1", "1:1:2x", "-1:1:1", "0:0:0", "1;1;1"}) {
    EXPECT_THROW(parse_mix(s), std::invalid_argument) << s;
  }
}

TEST(Workload, ValidateRejectsImpossibleSpecs) {
  WorkloadSpec s;
  s.m = 1;
  EXPECT_THROW(validate(s), std::invalid_argument);
  s = {};
  s.threads = 2;
  s.contention = 3;
  EXPECT_THROW(validate(s), std::invalid_argument);
  s = {};
  s.alpha = 1.0;
  EXPECT_THROW(validate(s), std::invalid_argument);
  s = {};
  s.m = 4;
  s.threads = 8;
  EXPECT_THROW(validate(s), std::invalid_argument);  // 8 groups, 3 usable cells
  s = {};
  s.m = 64;
  s.u = 10;
  EXPECT_THROW(validate(s), std::invalid_argument);
}

TEST(Workload, PoolStaysBelowCapacity) {
  WorkloadSpec s;
  s.m = 16;
  s.alpha = 0.9;
  EXPECT_EQ(pool_size(s), 15u);
  s.alpha = 0.25;
  EXPECT_EQ(pool_size(s), 8u);  // 4 present on average, insert:delete = 1:1
  s.mix = parse_mix("1:0:1");
  EXPECT_EQ(pool_size(s), 4u);
}

TEST(Workload, ZeroOperations) {
  WorkloadSpec s = small(2, 1);
  s.ops = 0;
  const RunStats st = run_bench(s);
  EXPECT_EQ(st.ops, 0u);
  EXPECT_EQ(st.mean_steps(), 0.0);
  EXPECT_EQ(st.checkpoints, 4u);
  EXPECT_EQ(st.sqhi_violations, 0u);
}

TEST(Workload, CountsAddUpAndCheckpointsAreCanonical) {
  for (auto [t, c] : {std::pair<std::size_t, std::size_t>{1, 1}, {4, 1}, {4, 2}, {4, 4}}) {
    WorkloadSpec s = small(t, c);
    s.hot_keys = c > 1 ? 3 : 0;
    const RunStats st = run_bench(s);
    EXPECT_EQ(st.ops, s.ops);
    EXPECT_EQ(st.inserts + st.deletes + st.lookups, st.ops);
    EXPECT_EQ(st.checkpoints, s.checkpoints);
    EXPECT_EQ(st.sqhi_violations, 0u) << t << "/" << c;
    EXPECT_EQ(st.result_mismatches, 0u) << t << "/" << c;
    EXPECT_GE(st.mean_steps(), 1.0);
    EXPECT_LE(st.max_steps, 100'000u);
  }
}

TEST(Workload, SingleThreadIsDeterministic) {
  WorkloadSpec s = small(1, 1);
  EXPECT_EQ(to_csv("x", 3, rows(run_bench(s), false)), to_csv("x", 3, rows(run_bench(s), false)));
}

// Frozen output of `bench run --m 256 --ops 2000 --seed 7 --no-timing`.
TEST(Workload, GoldenCsv) {
  WorkloadSpec s;
  s.m = 256;
  s.ops = 2000;
  s.seed = 7;
  const std::string got = to_csv(fnv1a_hex(config_string(s)), 7, rows(run_bench(s), false));
  EXPECT_EQ(got, slurp(std::filesystem::path(SQHI_GOLDEN_DIR) / "run_m256_ops2000_seed7.csv"));
}

TEST(RunLengths, HandBuiltSnapshots) {
  const Cell e{};
  EXPECT_EQ(run_lengths({e, e, e}), (std::vector<std::size_t>{0, 0, 0}));
  EXPECT_EQ(run_lengths({full(1), full(2), full(3)}), (std::vector<std::size_t>{3, 3, 3}));
  // The run through cells 5 and 0 wraps around.
  EXPECT_EQ(run_lengths({full(1), e, full(2), full(3), e, full(4)}),
            (std::vector<std::size_t>{2, 0, 2, 2, 0, 2}));
  EXPECT_EQ(run_lengths({e, full(1), full(2), full(3), e}), (std::vector<std::size_t>{0, 3, 3, 3, 0}));
}

TEST(Survey, EmptyTableHasNoRuns) {
  const SurveyResult r = run_length_survey(64, 0.0, 1, 500, 5);
  EXPECT_EQ(r.occupancy, 0u);
  EXPECT_EQ(r.mean, 0.0);
  EXPECT_EQ(r.third, 0.0);
}

TEST(Survey, DeterministicAndOrdered) {
  const SurveyResult a = run_length_survey(256, 0.5, 9, 2000, 10);
  const SurveyResult b = run_length_survey(256, 0.5, 9, 2000, 10);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.third, b.third);
  EXPECT_EQ(a.occupancy, 128u);
  // A uniform position is occupied with probability 1/2, then the run has length >= 1.
  EXPECT_GT(a.mean, 0.5);
  EXPECT_GE(a.third, a.mean);  // N^3 >= N for integers
  EXPECT_THROW(run_length_survey(256, 0.8, 1, 10), std::invalid_argument);
}

TEST(Survey, SerialAndParallelSweepsAgree) {
  const std::vector<std::size_t> ms{64, 256};
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const auto a = survey_sweep(ms, 0.5, seeds, 1000, 8);
  const auto b = survey_sweep_parallel(ms, 0.5, seeds, 1000, 8);
  ASSERT_EQ(a.size(), 6u);
  ASSERT_EQ(b.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].m, b[i].m);
    EXPECT_EQ(a[i].seed, b[i].seed);
    EXPECT_EQ(a[i].mean, b[i].mean);
    EXPECT_EQ(a[i].third, b[i].third);
  }
}

// Published FNV-1a 64 test vectors.
TEST(Output, FnvVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(Output, ConfigHashIgnoresSeed) {
  WorkloadSpec a, b;
  b.seed = 99;
  EXPECT_EQ(config_string(a), config_string(b));
  b.m = 2048;
  EXPECT_NE(config_string(a), config_string(b));
}

TEST(Output, CsvAndJsonShape) {
  const std::vector<Row> rs{{"x", 1.0 / 3, "u"}, {"y", 12345678901.0, "v"}};
  EXPECT_EQ(to_csv("abc", 5, rs),
            "config_hash,metric,value,unit,seed\nabc,x,0.3333333333,u,5\nabc,y,1.23456789e+10,v,5\n");
  EXPECT_EQ(to_csv("abc", 5, rs, false).find("config_hash"), std::string::npos);
  const auto j = to_json("abc", 5, rs);
  EXPECT_EQ(j["config_hash"], "abc");
  EXPECT_EQ(j["seed"], 5);
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(j["rows"][1]["metric"], "y");
}

TEST(Verify, QuickPassesOnPristineBuild) {
  VerifyOptions o;
  o.out_dir = testing::TempDir() + "verify-quick-pristine";
  const VerifyResult r = verify(o);
  EXPECT_TRUE(r.ok) << r.summary;
  EXPECT_FALSE(r.replay_path);
  EXPECT_EQ(r.verdict["scenarios"], 54);
}

TEST(Verify, QuickCatchesInjectedDefectWithReplay) {
  VerifyOptions o;
  o.mutation = Mutation::kStaleReleaseLookahead;
  o.out_dir = testing::TempDir() + "verify-quick-mutant";
  const VerifyResult r = verify(o);
  ASSERT_FALSE(r.ok);
  ASSERT_TRUE(r.replay_path);
  const auto j = nlohmann::json::parse(slurp(*r.replay_path));
  const Scenario sc = scenario_from_json(j["config"]);
  EXPECT_EQ(sc.mutation, Mutation::kStaleReleaseLookahead);
  const Report again = run_scripted(sc, j["schedule"].get<std::vector<ProcessId>>());
  ASSERT_FALSE(again.ok);
  EXPECT_EQ(again.violation->check, j["violation"]["check"]);
}

TEST(Verify, DeepVerdictsAreReproducible) {
  VerifyOptions o;
  o.profile = "deep";
  o.seed = 5;
  o.deep_scenarios = 6;
  o.deep_schedules = 20;
  o.out_dir = testing::TempDir() + "verify-deep";
  const VerifyResult a = verify(o);
  const VerifyResult b = verify(o);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_TRUE(a.verdict["safety_ok"].get<bool>());
  for (const auto& lb : a.verdict["lb"]) EXPECT_TRUE(lb["as_expected"].get<bool>());

  o.progress = false;
  const VerifyResult c = verify(o);
  EXPECT_TRUE(c.ok) << c.summary;
  EXPECT_FALSE(c.verdict.contains("restart_violations"));
}

// The restart audit flags the stalled-delete lookup livelock in random programs.
TEST(Verify, DeepReportsLookupRestartsSeparately) {
  VerifyOptions o;
  o.profile = "deep";
  o.out_dir = testing::TempDir() + "verify-deep-default";
  const VerifyResult r = verify(o);
  EXPECT_TRUE(r.verdict["safety_ok"].get<bool>());
  EXPECT_GT(r.verdict["restart_violations"].get<std::uint64_t>(), 0u);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.verdict["violation"]["check"], "restart-blame");
  EXPECT_EQ(r.verdict["violation"]["detail"].get<std::string>().rfind("lookup", 0), 0u);
}

TEST(LbVerify, AgeRuleAndKeyOrderVerdicts) {
  LbOptions o;
  const auto age = lb_verify(o);
  EXPECT_EQ(age["hashes"], 81);  // 3^4
  EXPECT_EQ(age["natural"], 81);
  EXPECT_EQ(age["with_property1"], 81);
  EXPECT_TRUE(age["lemma_chain"].get<bool>());
  EXPECT_TRUE(age["all_linear"].get<bool>());
  EXPECT_EQ(age["ambiguous"], 0);

  o.scheme = "keyorder";
  const auto key = lb_verify(o);
  EXPECT_FALSE(key["all_linear"].get<bool>());
  EXPECT_TRUE(key["linear_ambiguity_agree"].get<bool>());
  EXPECT_EQ(key["ambiguous"].get<int>() + key["linear"].get<int>(), 81);

  o.scheme = "agerule";
  o.u = 9;
  EXPECT_THROW(lb_verify(o), std::exception);
}
