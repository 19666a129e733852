#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "randgame/ensembles.hpp"
#include "randgame/game_solver.hpp"
#include "randgame/parallel.hpp"
#include "randgame/trials.hpp"

namespace randgame::runner {

enum ExitCode : int { kOk = 0, kConfigError = 1, kSolverFailure = 2, kIoError = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Values, Scaling, Gordon, Cones, Rectangular, Supports };

const char* to_string(Mode mode);
// Throws ConfigError on unknown names.
Mode parse_mode(std::string_view text);

struct OutputPaths {
  std::string trials_path = "trials.csv";
  std::string summary_path = "summary.json";
  std::string plot_path = "plot.csv";  // scaling mode only
};

// One JSON document:
//   {"ensemble": "gaussian" | {"kind": "bernoulli", "p": 0.3},
//    "sizes": [[16, 16], ...], "batch": 200, "seed": 7,
//    "solver": {"tolerance", "support_threshold", "max_pivots", "anti_cycling"},
//    "outputs": {"trials_path", "summary_path", "plot_path"},
//    "mode": "values", "timing": false,
//    "epsilons": [...], "t_points": [...], "lambdas": [...]}
// Relative output paths resolve against the --out directory.
struct ExperimentConfig {
  ensembles::EnsembleSpec ensemble;
  std::vector<std::pair<std::size_t, std::size_t>> sizes;
  std::size_t batch = 0;
  std::uint64_t seed = 0;
  solver::SolveOptions solver;
  OutputPaths outputs;
  Mode mode = Mode::Values;
  bool timing = false;
  std::vector<double> epsilons;  // cones; empty means a default grid
  std::vector<double> t_points;  // gordon; empty means default_t_grid(n)
  std::vector<double> lambdas;   // rectangular; sizes[0].first is n

  // Throws ConfigError.
  void validate() const;

  // Throws ConfigError on missing or mistyped fields (validate() included).
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Throws IoError when unreadable, ConfigError when not valid JSON or invalid.
ExperimentConfig load_config(const std::filesystem::path& path);

// The sizes actually sampled: config.sizes, or (n, n + ceil(lambda sqrt n))
// per lambda in rectangular mode.
std::vector<std::pair<std::size_t, std::size_t>> effective_sizes(const ExperimentConfig& config);

struct TrialRecord {
  std::uint64_t trial_index = 0;
  std::uint64_t seed = 0;  // stream index of derive_stream(config.seed, trial_index)
  std::size_t n = 0;
  std::size_t m = 0;
  std::string ensemble;
  double value = 0.0;  // NaN when the solver failed
  std::size_t support_size = 0;
  double y_norm2 = 0.0;
  bool degenerate = false;
  std::size_t iterations = 0;
  double wall_ms = 0.0;

  bool failed() const;
  static TrialRecord from_trial(const trials::GameTrial& t, const std::string& ensemble);
};

inline constexpr std::string_view kTrialsHeader =
    "trial_index,seed,n,m,ensemble,value,support_size,y_norm2,degenerate,iterations,wall_ms";

std::string trials_csv(const std::vector<TrialRecord>& records);
// Throws IoError on an empty file, a header mismatch or a malformed row
// (the message carries the line number).
std::vector<TrialRecord> parse_trials_csv(std::string_view text);

// Trials for every size in order; global index s * batch + b.
std::vector<TrialRecord> run_trials(const ExperimentConfig& config, Execution exec = {});

struct SizeGroup {
  std::size_t n = 0, m = 0;
  std::vector<double> values;
  std::vector<std::size_t> support_sizes;
  std::size_t count = 0;
  std::size_t failures = 0;
  std::size_t degenerate = 0;
};

// Groups by (n, m) in order of first appearance.
std::vector<SizeGroup> group_by_size(const std::vector<TrialRecord>& records);

struct Report {
  nlohmann::json summary;
  std::optional<std::string> plot_csv;  // header n,m,sigma,stderr
  std::size_t trials = 0;
  std::size_t failures = 0;
};

// Per-size summary of trial records. Mode Scaling adds the slope fit,
// Supports the binomial comparison, Rectangular the monotonicity check.
// Throws IoError when a group has too few successful trials to summarize.
Report build_report(const std::vector<TrialRecord>& records, Mode mode,
                    const std::vector<double>& lambdas = {});

struct RunOutcome {
  int exit_code = kOk;
  std::filesystem::path trials_file;
  std::filesystem::path summary_file;
  std::optional<std::filesystem::path> plot_file;
  std::size_t trials = 0;
  std::size_t failures = 0;
};

// Runs the configured mode and writes its outputs under out_dir. Throws
// IoError on write failure; solver failures beyond 1% give kSolverFailure.
RunOutcome run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                          Execution exec = {});

// Entry point of the command-line tool; returns the process exit code.
int cli_main(int argc, char** argv);

}  // namespace randgame::runner
