#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "randgame/game_solver.hpp"
#include "randgame/matrix_io.hpp"
#include "randgame/runner.hpp"

namespace randgame::runner {

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> batch;
  int threads = 0;
  std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required) {
  auto* opt = cmd->add_option("--config", f.config_path, "experiment config (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--seed", f.seed, "override the config seed");
  cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", f.out_dir, "output directory");
}

ExperimentConfig preset(Mode mode) {
  ExperimentConfig c;
  c.mode = mode;
  c.seed = 1;
  switch (mode) {
    case Mode::Scaling:
      c.sizes = {{8, 8}, {16, 16}, {32, 32}, {64, 64}, {128, 128}};
      c.batch = 400;
      break;
    case Mode::Gordon:
      c.sizes = {{20, 20}};
      c.batch = 2000;
      c.outputs.trials_path = "gordon_comparison.csv";
      break;
    case Mode::Cones:
      c.sizes = {{64, 64}};
      c.batch = 200;
      c.outputs.trials_path = "delta_sweep.csv";
      break;
    case Mode::Supports:
      c.sizes = {{64, 64}};
      c.batch = 1000;
      break;
    case Mode::Rectangular:
      c.sizes = {{64, 64}};
      c.lambdas = {1.0, 2.0, 4.0};
      c.batch = 1000;
      break;
    case Mode::Values:
      c.sizes = {{16, 16}};
      c.batch = 200;
      break;
  }
  return c;
}

int run_configured(const CommonFlags& f, std::optional<Mode> forced) {
  ExperimentConfig config = f.config_path.empty() ? preset(forced.value_or(Mode::Values))
                                                  : load_config(f.config_path);
  if (forced) config.mode = *forced;
  if (f.seed) config.seed = *f.seed;
  if (f.batch) config.batch = *f.batch;
  config.validate();
  const RunOutcome out = run_experiment(config, f.out_dir, Execution{f.threads});
  std::cout << "trials:  " << out.trials_file.string() << "\n"
            << "summary: " << out.summary_file.string() << "\n";
  if (out.plot_file) std::cout << "plot:    " << out.plot_file->string() << "\n";
  if (out.exit_code == kSolverFailure)
    std::cerr << "solver failed on " << out.failures << " of " << out.trials << " trials\n";
  return out.exit_code;
}

int cmd_solve(const std::string& path) {
  try {
    const Matrix m = io::read_matrix_file(path);
    const auto sol = solver::solve_game(m);
    std::cout << solver::to_json(sol).dump(2) << "\n";
    return sol.ok() ? kOk : kSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return kIoError;
  }
}

int cmd_report(const std::string& path, const std::string& mode_name, const std::string& out_dir,
               const std::vector<double>& lambdas) {
  const Mode mode = parse_mode(mode_name);
  if (mode == Mode::Gordon || mode == Mode::Cones)
    throw ConfigError("report works on game-trial files (values, scaling, supports, rectangular)");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto records = parse_trials_csv(buf.str());
  const Report rep = build_report(records, mode, lambdas);

  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto summary_file = dir / "report.json";
  const auto plot_file = dir / "plot.csv";
  std::ofstream js(summary_file, std::ios::binary | std::ios::trunc);
  std::ofstream pc(plot_file, std::ios::binary | std::ios::trunc);
  if (!js || !pc) throw IoError("cannot write report files under " + dir.string());
  js << rep.summary.dump(2) << "\n";
  pc << rep.plot_csv.value_or("");
  if (!js || !pc) throw IoError("write failed under " + dir.string());
  std::cout << "summary: " << summary_file.string() << "\n"
            << "plot:    " << plot_file.string() << "\n";
  return kOk;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Random zero-sum matrix games: solver and Monte Carlo experiments"};
  app.require_subcommand(1);

  std::string solve_path;
  auto* solve = app.add_subcommand("solve", "solve one game from a CSV or JSON matrix file");
  solve->add_option("matrix", solve_path, "matrix file")->required();

  CommonFlags exp_flags;
  auto* experiment = app.add_subcommand("experiment", "run an experiment config");
  add_common(experiment, exp_flags, true);

  std::string report_path, report_mode = "values", report_out = ".";
  std::vector<double> report_lambdas;
  auto* report = app.add_subcommand("report", "summarize an existing trials CSV");
  report->add_option("trials", report_path, "trials CSV")->required();
  report->add_option("--mode", report_mode, "values, scaling, supports or rectangular");
  report->add_option("--lambdas", report_lambdas, "lambda per size (rectangular)");
  report->add_option("--out", report_out, "output directory");

  const std::pair<const char*, Mode> shortcuts[] = {
      {"scaling", Mode::Scaling}, {"gordon", Mode::Gordon}, {"cones", Mode::Cones},
      {"supports", Mode::Supports}, {"rectangular", Mode::Rectangular}};
  std::vector<CommonFlags> short_flags(std::size(shortcuts));
  std::vector<CLI::App*> short_cmds;
  for (std::size_t i = 0; i < std::size(shortcuts); ++i) {
    auto* cmd = app.add_subcommand(shortcuts[i].first,
                                   std::string("run the ") + shortcuts[i].first + " experiment");
    add_common(cmd, short_flags[i], false);
    cmd->add_option("--batch", short_flags[i].batch, "override the batch size");
    short_cmds.push_back(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*solve) return cmd_solve(solve_path);
    if (*experiment) return run_configured(exp_flags, std::nullopt);
    if (*report) return cmd_report(report_path, report_mode, report_out, report_lambdas);
    for (std::size_t i = 0; i < short_cmds.size(); ++i)
      if (*short_cmds[i]) return run_configured(short_flags[i], shortcuts[i].second);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailure;
  }
  return kConfigError;
}

}  // namespace randgame::runner
