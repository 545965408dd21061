#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "sqhi/operation.hpp"

namespace sqhi::bench {

/// Relative weights of insert, delete and lookup.
struct Mix {
  double insert = 1;
  double erase = 1;
  double lookup = 2;
};

/// Parses "i:d:l", e.g. "1:1:2".
Mix parse_mix(const std::string& s);
std::string to_string(const Mix& mix);

struct WorkloadSpec {
  std::size_t m = 1024;
  std::size_t u = 0;  // 0: min(8m, largest universe the atomic cells hold)
  std::size_t threads = 1;
  Mix mix;
  double alpha = 0.5;
  std::uint64_t ops = 100'000;  // total over all threads
  std::uint64_t seed = 1;
  // Threads are split into groups of `contention`; each group works on its own
  // share of the key pool, so at most `contention` threads touch a key.
  std::size_t contention = 1;
  std::size_t hot_keys = 0;  // keys per group; 0: the group's whole share
  std::size_t checkpoints = 4;
};

class TableFullError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws std::invalid_argument on a spec the generator cannot honour.
void validate(const WorkloadSpec& spec);
std::size_t universe_of(const WorkloadSpec& spec);
/// Keys the generator ever touches; at most m - 1.
std::size_t pool_size(const WorkloadSpec& spec);

struct RunStats {
  std::uint64_t ops = 0;
  std::uint64_t steps = 0;
  std::uint64_t max_steps = 0;
  std::uint64_t restarts = 0;
  std::uint64_t inserts = 0, deletes = 0, lookups = 0;
  std::uint64_t checkpoints = 0;
  std::uint64_t sqhi_checks = 0;
  std::uint64_t sqhi_violations = 0;
  std::uint64_t result_mismatches = 0;  // only tracked when contention == 1
  std::size_t occupancy = 0;             // at the last checkpoint
  // Run length around a uniform position, averaged over checkpoints.
  double run_mean = 0;
  double run_third = 0;
  double wall_seconds = 0;

  double mean_steps() const { return ops == 0 ? 0.0 : static_cast<double>(steps) / ops; }
};

/// Length of the run of occupied cells through each position, wrapping
/// around; 0 at empty cells, m everywhere when the table is full.
std::vector<std::size_t> run_lengths(const std::vector<Cell>& cells);

/// Runs the workload on the atomic backend with an OpenMP team. Every
/// checkpoint drains the team at a barrier and compares the table with the
/// canonical representation.
RunStats run_bench(const WorkloadSpec& spec);

struct SurveyResult {
  std::size_t m = 0;
  double alpha = 0;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::uint64_t tables = 0;
  std::size_t occupancy = 0;
  double mean = 0;   // E[N]
  double third = 0;  // E[N^3]
};

/// Fills tables to load alpha through the concurrent algorithm (one
/// process), then samples the length of the run at uniform positions. The
/// expectation is over the hash function too, so the samples are spread over
/// `tables` independently hashed fills.
SurveyResult run_length_survey(std::size_t m, double alpha, std::uint64_t seed,
                               std::uint64_t samples, std::uint64_t tables = 100);
/// One survey per (m, seed) pair, row-major in m.
std::vector<SurveyResult> survey_sweep(const std::vector<std::size_t>& ms, double alpha,
                                       const std::vector<std::uint64_t>& seeds, std::uint64_t samples,
                                       std::uint64_t tables = 100);
std::vector<SurveyResult> survey_sweep_parallel(const std::vector<std::size_t>& ms, double alpha,
                                                const std::vector<std::uint64_t>& seeds,
                                                std::uint64_t samples, std::uint64_t tables = 100);

struct VerifyOptions {
  std::string profile = "quick";  // quick | deep
  std::uint64_t seed = 1;
  Mutation mutation = Mutation::kNone;
  std::string out_dir = ".";
  std::uint64_t deep_scenarios = 64;   // per process count
  std::uint64_t deep_schedules = 200;  // per scenario
  bool progress = true;                // deep: also audit lookup restarts
};

struct VerifyResult {
  bool ok = true;
  std::string summary;
  std::optional<std::string> replay_path;
  nlohmann::json verdict;
};

VerifyResult verify(const VerifyOptions& opt);

struct LbOptions {
  std::size_t u = 4, m = 3, n = 3;
  std::string scheme = "agerule";  // agerule | keyorder | custom
  std::string custom_file;          // JSON {"order": [[keys, highest first], ...]}
  std::uint64_t seed = 1;
  std::size_t max_hashes = 4096;    // beyond this, a seeded sample of hashes
};

/// Natural, Property 1/2, linearity and two-cell ambiguity over hash functions.
nlohmann::json lb_verify(const LbOptions& opt);

// --- output ---------------------------------------------------------------

struct Row {
  std::string metric;
  double value = 0;
  std::string unit;
};

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);
/// Canonical description of a workload, seed excluded.
std::string config_string(const WorkloadSpec& spec);

std::vector<Row> rows(const RunStats& s, bool timing = true);
std::vector<Row> rows(const SurveyResult& s);

/// Header plus one line per row: config_hash,metric,value,unit,seed.
std::string to_csv(const std::string& config_hash, std::uint64_t seed, const std::vector<Row>& rs,
                   bool header = true);
nlohmann::json to_json(const std::string& config_hash, std::uint64_t seed, const std::vector<Row>& rs);

}  // namespace sqhi::bench
