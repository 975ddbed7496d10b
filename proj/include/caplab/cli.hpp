#pragma once

// Experiment driver behind the caplab executable.

#include <cstdint>
#include <optional>
#include <string>

#include "caplab/io.hpp"

namespace caplab {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNonRegular = 2,
  kExitDegenerate = 3,
  kExitToleranceFail = 4,
};

struct ExperimentConfig {
  std::string command;
  Json map;         // map descriptor
  Json set;         // set descriptor
  Json polydisc_p;  // {"prime", "radii_log_p"}
  int n_max = 8;
  FeketeBudget budget;
  std::uint64_t seed = 1;
  int samples = 100000;
  int depth = 12;
  int cap = 64;
  std::optional<std::uint64_t> prime;
  std::optional<double> tolerance;
  std::string format = "json";
  std::string out;

  /// Every field, with defaults and the effective thread count filled in.
  Json to_json() const;
  static ExperimentConfig from_json(const Json& j);
};

/// Tolerance used when the config does not set one.
double default_tolerance(const std::string& command);

struct CommandResult {
  int exit_code = kExitOk;
  Json report;
  /// Rendered output in the configured format.
  std::string output;
  /// One human-readable line, e.g. "res = 1" or "pass: gap = 0.01 <= 0.05".
  std::string summary;
};

/// Runs one subcommand; errors are mapped to exit codes, never thrown.
CommandResult run_command(const ExperimentConfig& config);

CommandResult cmd_resultant(const ExperimentConfig& config);
CommandResult cmd_diam(const ExperimentConfig& config);
CommandResult cmd_pullback(const ExperimentConfig& config);
CommandResult cmd_julia(const ExperimentConfig& config);
CommandResult cmd_bb(const ExperimentConfig& config);
CommandResult cmd_padic(const ExperimentConfig& config);

/// Seeds used by diam_sequence at each n: the per-n seed, the greedy seed
/// and one seed per exchange restart.
Json seed_table(std::uint64_t seed, int n_max, int restarts);

int cli_main(int argc, char** argv);

}  // namespace caplab
