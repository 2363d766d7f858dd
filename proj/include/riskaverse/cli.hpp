#pragma once
// Command-line front end: experiment configs, the four subcommands and
// their CSV/JSON artifacts.

#include "riskaverse/axioms.hpp"
#include "riskaverse/estimators.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace riskaverse::cli {

inline constexpr const char* kToolVersion = "riskaverse 0.1.0";

enum ExitCode { kOk = 0, kMismatch = 1, kConfigError = 2, kNumericalError = 3 };

/// Raised for anything wrong with a config file; maps to exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  /// Absent only for configs that run nothing but the necessity experiments.
  std::optional<EstimationProblem> problem;
  nlohmann::json problem_spec;
  Observation observation;
  nlohmann::json observation_spec;
  std::vector<std::string> estimators;
  std::string loss_name = "hellinger_sq";
  nlohmann::json loss_params = nlohmann::json::object();
  std::string attenuation = "truncated_quadratic";
  KSchedule schedule = KSchedule::geometric();
  GridSpec grid;
  /// Parameter points for `fisher`; empty means 9 interior points per axis.
  std::vector<Vector> theta_grid;
  int theta_grid_per_dim = 9;
  /// `axioms`: explicit checks, or the necessity experiments.
  std::vector<std::string> checks;
  std::vector<std::string> necessity;
  double axiom_tolerance = 0.0;
  nlohmann::json expect = nlohmann::json::object();
  /// Artifact paths relative to the output directory; empty picks
  /// "<command>.csv" and "<command>.json".
  std::string csv_name;
  std::string json_name;
  /// FNV-1a digest of the config text, embedded in every artifact.
  std::string digest;
};

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Shortest-safe decimal with 17 significant digits.
std::string format_double(double v);

/// Parses and validates a config. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies --grid-points / --refine overrides (0 leaves a field alone).
void override_grid(ExperimentConfig& cfg, int points_per_dim, int refinement_rounds);

/// Each command writes its artifacts into `out_dir` and returns an exit code.
int cmd_estimate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_trace(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_fisher(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_axioms(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

/// Entry point; never throws.
int run(int argc, char** argv);

}  // namespace riskaverse::cli
