#pragma once

#include "ahlab/report.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ahlab::cli {

enum class ExitCode { ok = 0, check_failed = 1, schema = 2, runtime = 3 };

constexpr int kSchemaVersion = 1;

std::string library_version();

struct ExperimentInfo {
  std::string id;
  std::string summary;
};
const std::vector<ExperimentInfo>& experiments();

/// A config after defaults are merged in. Top-level keys: schema_version,
/// experiment, seed, output_dir, tolerances, parameters; nothing else.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  Json tolerances;
  Json parameters;

  Json resolved() const;
};

/// Merges `user` over the defaults of `experiment`; command-line seed and
/// output directory take precedence. Throws Errc::config on unknown keys,
/// wrong types, out-of-range values or an experiment mismatch.
ExperimentConfig resolve_config(const std::string& experiment, const Json& user,
                                std::optional<std::uint64_t> seed = {},
                                std::optional<std::filesystem::path> output_dir = {});

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunResult {
  std::vector<CheckResult> checks;
  std::vector<std::string> artifacts;  // relative to the experiment directory
  bool pass() const;
};

/// Runs the experiment, writing its artifacts and manifest.json into
/// output_dir / experiment.
RunResult run_experiment(const ExperimentConfig& config);

/// Full command: read the config file (if any), resolve, run, summarize to
/// `log`. Maps failures onto the exit codes.
ExitCode run_command(const std::string& experiment, const std::optional<std::filesystem::path>& config_path,
                     std::optional<std::filesystem::path> output_dir, std::optional<std::uint64_t> seed,
                     std::ostream& log);

/// Sign convention and tensor identity checks; one line each to `log`.
ExitCode selftest(std::ostream& log);

}  // namespace ahlab::cli
