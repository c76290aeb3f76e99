#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "marcink/norms.hpp"
#include "marcink/probe.hpp"

namespace marcink::cli {

// exit codes: 0 success, 2 invalid config, 3 numerical/runtime failure,
// 4 verification failure
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string command;  // check|apply|probe|sweep|verify|bench
  nlohmann::json resolved;  // manifest echo of every tunable

  std::optional<multiplier::HomogeneousMultiplier> mult;
  fields::Grid grid{2, 256, 3.14159265358979323846};
  std::vector<double> p_list{2.0};
  std::vector<int> sizes{64, 128, 256};
  std::vector<probe::Strategy> strategies{
      probe::Strategy::RandomGaussian, probe::Strategy::RectangleIndicators,
      probe::Strategy::TubeIndicators, probe::Strategy::Ascent};
  int trials = 8;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: library default
  std::string out_dir = "out";

  norms::ReportParams report;

  std::string apply_input;
  std::string apply_output = "applied.field";

  int verify_n = 64;
  int verify_trials = 10;

  std::vector<int> bench_sizes{64, 128, 256};
};

// Parse and validate a config document for the given subcommand. Flag
// overrides (seed/out/threads) are applied when set.
ExperimentConfig parse_config(const std::string& command,
                              const nlohmann::json& doc,
                              const std::optional<std::uint64_t>& seed_flag,
                              const std::optional<std::string>& out_flag,
                              const std::optional<int>& threads_flag);

// Run the experiment; writes artifacts under cfg.out_dir. Returns 0 on
// success; throws ConfigError / VerificationFailure / std::exception.
int run(const ExperimentConfig& cfg);

// Single verification suite result.
struct SuiteResult {
  std::string suite;
  bool pass = false;
  double metric = 0.0;
  std::string detail;
};

// The invariant suites behind `marcink verify`.
std::vector<SuiteResult> run_verify_suites(int n, int trials,
                                           std::uint64_t seed);

nlohmann::json error_json(int code, const std::string& kind,
                          const std::string& message);

}  // namespace marcink::cli
