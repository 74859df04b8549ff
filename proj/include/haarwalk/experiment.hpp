#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "haarwalk/uniformity.hpp"

namespace haarwalk {

/// Usage or validation problem in an experiment config (exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Thresholds {
  double weyl = 0.02;
  double discrepancy = 0.02;
  double tv = 0.02;
  double benford = 0.01;
  double first_digit = 0.01;
  double lattice_mass = 0.03;
};

/// One JSON document describing an experiment. `group` and `process` are
/// kept as JSON and interpreted by the runners:
///
///   group:   {"family": "torus", "dim": d}
///            {"family": "finite", "builtin": "S3"} or {"family": "finite", "table": {...}}
///            {"family": "rotation3d"}
///   process: {"type": "levy_triple", "beta", "sigma2", "nu": [{"x", "mass"}]}
///            {"type": "steps", "support": [{"step", "p"}], "rate", "discrete"}
///            {"type": "geometric", "triple": {...}, "a", "c", "d", "base"}
///            {"type": "product", "support": [{"xi" | "log_b", "p"}], "base"}
///
/// Exact quantities are rational strings ("1/2", "-3", "0.25") or integers;
/// irrational values must be flagged as {"irrational": 0.618...}.
struct ExperimentConfig {
  std::string kind = "verify";
  nlohmann::ordered_json group = {{"family", "torus"}, {"dim", 1}};
  nlohmann::ordered_json process;
  double T = 1e4;
  double dt = 1e-3;
  std::vector<double> checkpoints;  ///< empty: 20 log-spaced points in [T/1000, T]
  int K = 5;
  std::size_t bins = 0;  ///< 0: the group's default partition
  std::uint64_t seed = 42;
  std::size_t replicas = 1;
  std::string out_dir = "out";
  std::string initial;  ///< torus start (rational) or element label; empty: 0 / identity
  std::string target = "predicted";  ///< "predicted" or "haar"
  std::string sweep_of = "verify";   ///< pipeline repeated by sweep
  Thresholds thresholds;
};

/// Throws ConfigError on unknown kinds, out-of-range numbers or type errors.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::ordered_json to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies "a.b.c=value" to a JSON document. The value is parsed as JSON
/// when possible and taken as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

struct RunResult {
  nlohmann::ordered_json report;
  std::vector<TestReport> tests;
  std::string occupation_csv;
  std::string series_csv;
  std::string path_csv;

  /// Every test passed (vacuously true when there are none).
  bool pass() const;
};

RunResult run_classify(const ExperimentConfig& config);
RunResult run_simulate(const ExperimentConfig& config);
RunResult run_verify(const ExperimentConfig& config, bool emit_path = false);
RunResult run_benford(const ExperimentConfig& config, bool emit_path = false);
/// Replicas with seeds seed + r, run in parallel across replicas; per-test
/// mean and max of the statistics.
RunResult run_sweep(const ExperimentConfig& config);
RunResult run_experiment(const ExperimentConfig& config, bool emit_path = false);

/// Writes report.json and the non-empty CSVs into `dir` (created if needed).
void write_outputs(const RunResult& result, const std::filesystem::path& dir);

}  // namespace haarwalk
