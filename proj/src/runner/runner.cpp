#include "randgame/runner.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include "randgame/cones.hpp"
#include "randgame/gordon.hpp"
#include "randgame/stats.hpp"

namespace randgame::runner {

using nlohmann::json;

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_uint(std::string_view field, std::size_t line_no, const char* name) {
  T v{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw IoError("line " + std::to_string(line_no) + ": bad " + name + " '" + std::string(field) + "'");
  return v;
}

double parse_real(std::string_view field, std::size_t line_no, const char* name) {
  // strtod accepts "nan", which marks failed solves
  const std::string s(field);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw IoError("line " + std::to_string(line_no) + ": bad " + name + " '" + s + "'");
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

std::filesystem::path resolve(const std::filesystem::path& out_dir, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : out_dir / path;
}

json summary_or_null(const std::vector<double>& xs) {
  if (xs.size() < 2) return nullptr;
  return stats::to_json(stats::summarize(xs));
}

bool over_failure_budget(std::size_t failures, std::size_t total) {
  return total > 0 && 100 * failures > total;
}

std::vector<double> default_epsilons(std::size_t n) {
  const double cap = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> out;
  for (int k = 0; k <= 8; ++k) out.push_back(cap * k / 8.0);
  return out;
}

}  // namespace

bool TrialRecord::failed() const { return std::isnan(value); }

TrialRecord TrialRecord::from_trial(const trials::GameTrial& t, const std::string& ensemble) {
  TrialRecord r;
  r.trial_index = t.trial_index;
  r.seed = t.seed.stream_index;
  r.n = t.n;
  r.m = t.m;
  r.ensemble = ensemble;
  r.value = t.failed ? std::numeric_limits<double>::quiet_NaN() : t.value;
  r.support_size = t.support_size;
  r.y_norm2 = t.y_norm2;
  r.degenerate = t.degenerate;
  r.iterations = t.iterations;
  r.wall_ms = t.wall_ms;
  return r;
}

std::string trials_csv(const std::vector<TrialRecord>& records) {
  std::string out(kTrialsHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.trial_index);
    out += ',' + std::to_string(r.seed);
    out += ',' + std::to_string(r.n);
    out += ',' + std::to_string(r.m);
    out += ',' + r.ensemble;
    out += ',' + fmt17(r.value);
    out += ',' + std::to_string(r.support_size);
    out += ',' + fmt17(r.y_norm2);
    out += r.degenerate ? ",1" : ",0";
    out += ',' + std::to_string(r.iterations);
    out += ',' + fmt17(r.wall_ms);
    out += '\n';
  }
  return out;
}

std::vector<TrialRecord> parse_trials_csv(std::string_view text) {
  std::vector<TrialRecord> records;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != kTrialsHeader) throw IoError("line 1: trials header mismatch");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 11)
      throw IoError("line " + std::to_string(line_no) + ": expected 11 fields, got " +
                    std::to_string(f.size()));
    TrialRecord r;
    r.trial_index = parse_uint<std::uint64_t>(f[0], line_no, "trial_index");
    r.seed = parse_uint<std::uint64_t>(f[1], line_no, "seed");
    r.n = parse_uint<std::size_t>(f[2], line_no, "n");
    r.m = parse_uint<std::size_t>(f[3], line_no, "m");
    r.ensemble = std::string(f[4]);
    try {
      (void)ensembles::EnsembleSpec::parse(r.ensemble);
    } catch (const std::invalid_argument&) {
      throw IoError("line " + std::to_string(line_no) + ": unknown ensemble '" + r.ensemble + "'");
    }
    r.value = parse_real(f[5], line_no, "value");
    r.support_size = parse_uint<std::size_t>(f[6], line_no, "support_size");
    r.y_norm2 = parse_real(f[7], line_no, "y_norm2");
    if (f[8] != "0" && f[8] != "1") throw IoError("line " + std::to_string(line_no) + ": bad degenerate flag");
    r.degenerate = f[8] == "1";
    r.iterations = parse_uint<std::size_t>(f[9], line_no, "iterations");
    r.wall_ms = parse_real(f[10], line_no, "wall_ms");
    if (r.n == 0 || r.m == 0) throw IoError("line " + std::to_string(line_no) + ": empty game size");
    records.push_back(std::move(r));
  }
  if (!header_seen) throw IoError("trials file is empty");
  if (records.empty()) throw IoError("trials file has no records");
  return records;
}

std::vector<TrialRecord> run_trials(const ExperimentConfig& config, Execution exec) {
  const RandomSeed root{config.seed, 0};
  const std::string tag = config.ensemble.tag();
  const auto sizes = effective_sizes(config);
  std::vector<TrialRecord> records;
  records.reserve(sizes.size() * config.batch);
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const auto [n, m] = sizes[s];
    const auto batch = trials::run_game_batch(config.ensemble, n, m, config.batch, root,
                                              s * config.batch, config.solver, exec, config.timing);
    for (const auto& t : batch) records.push_back(TrialRecord::from_trial(t, tag));
  }
  return records;
}

std::vector<SizeGroup> group_by_size(const std::vector<TrialRecord>& records) {
  std::vector<SizeGroup> groups;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> where;
  for (const auto& r : records) {
    auto [it, fresh] = where.try_emplace({r.n, r.m}, groups.size());
    if (fresh) {
      SizeGroup g;
      g.n = r.n;
      g.m = r.m;
      groups.push_back(g);
    }
    SizeGroup& g = groups[it->second];
    ++g.count;
    if (r.failed()) {
      ++g.failures;
      continue;
    }
    g.values.push_back(r.value);
    g.support_sizes.push_back(r.support_size);
    if (r.degenerate) ++g.degenerate;
  }
  return groups;
}

Report build_report(const std::vector<TrialRecord>& records, Mode mode,
                    const std::vector<double>& lambdas) {
  Report rep;
  const auto groups = group_by_size(records);
  json sizes = json::array();
  std::vector<std::pair<double, double>> sigma_points;
  std::string plot = "n,m,sigma,stderr\n";
  for (const auto& g : groups) {
    rep.trials += g.count;
    rep.failures += g.failures;
    json entry = {{"n", g.n}, {"m", g.m}, {"trials", g.count}, {"failures", g.failures},
                  {"degenerate", g.degenerate}};
    entry["value"] = summary_or_null(g.values);
    std::vector<double> supports(g.support_sizes.begin(), g.support_sizes.end());
    entry["support_size"] = summary_or_null(supports);
    if (g.values.size() >= 2) {
      const auto s = stats::summarize(g.values);
      entry["sigma"] = s.stddev();
      entry["sigma_stderr"] = s.stderr_stddev();
      sigma_points.emplace_back(static_cast<double>(g.n), s.stddev());
      plot += std::to_string(g.n) + ',' + std::to_string(g.m) + ',' + fmt17(s.stddev()) + ',' +
              fmt17(s.stderr_stddev()) + '\n';
    }
    if (mode == Mode::Supports) {
      if (g.support_sizes.size() < 100)
        throw IoError("supports report needs >= 100 successful trials per size");
      entry["support_compare"] = stats::to_json(
          stats::binomial_support_compare(g.support_sizes, std::min(g.n, g.m)));
    }
    sizes.push_back(entry);
  }
  rep.summary["sizes"] = sizes;
  rep.summary["trials"] = rep.trials;
  rep.summary["failures"] = rep.failures;
  rep.summary["mode"] = to_string(mode);
  rep.plot_csv = plot;

  if (mode == Mode::Scaling) {
    bool usable = sigma_points.size() >= 3;
    for (const auto& [n, s] : sigma_points) usable = usable && s > 0.0;
    rep.summary["slope_fit"] =
        usable ? stats::to_json(stats::fit_log_slope(sigma_points)) : json(nullptr);
  }
  if (mode == Mode::Rectangular) {
    if (lambdas.size() != groups.size())
      throw IoError("rectangular report needs one size per lambda");
    std::vector<stats::RectangularRow> rows;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (groups[i].values.size() < 2) throw IoError("rectangular report needs >= 2 values per size");
      stats::RectangularRow row;
      row.lambda = lambdas[i];
      row.n = groups[i].n;
      row.m = groups[i].m;
      row.value = stats::summarize(groups[i].values);
      row.failures = groups[i].failures;
      rows.push_back(row);
    }
    rep.summary["rectangular"] = stats::to_json(stats::assemble_rectangular(std::move(rows)));
  }
  return rep;
}

RunOutcome run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                          Execution exec) {
  config.validate();
  RunOutcome out;
  out.trials_file = resolve(out_dir, config.outputs.trials_path);
  out.summary_file = resolve(out_dir, config.outputs.summary_path);
  json summary;

  if (config.mode == Mode::Gordon) {
    const auto [n, m] = config.sizes[0];
    const auto grid = config.t_points.empty() ? gordon::default_t_grid(n) : config.t_points;
    const auto res = gordon::gordon_comparison_experiment(n, m, config.batch, grid,
                                                          RandomSeed{config.seed, 0}, config.solver,
                                                          {}, exec);
    write_file(out.trials_file, gordon::comparison_csv(res.rows));
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& r : res.rows)
      worst = std::max(worst, r.p_v_le_t - r.p_2phi_le_t - 3.0 * std::hypot(r.se_v, r.se_phi));
    summary = {{"mode", "gordon"}, {"n", n}, {"m", m}, {"batch", config.batch},
               {"resamples", res.resamples}, {"solver_failures", res.solver_failures},
               {"sandwich_violations", res.sandwich_violations},
               {"worst_excess_over_3se", worst}, {"holds_within_3se", worst <= 0.0}};
    out.trials = config.batch;
    out.failures = res.solver_failures;
  } else if (config.mode == Mode::Cones) {
    const std::size_t n = config.sizes[0].first;
    const auto eps = config.epsilons.empty() ? default_epsilons(n) : config.epsilons;
    const auto rows = cones::delta_sweep(n, eps, config.batch, RandomSeed{config.seed, 0}, exec);
    write_file(out.trials_file, cones::delta_sweep_csv(rows));
    json jr = json::array();
    for (const auto& r : rows)
      jr.push_back({{"epsilon", r.epsilon}, {"delta_hat", r.delta_hat}, {"stderr", r.stderr_mean},
                    {"upper_bound", r.upper_bound}});
    summary = {{"mode", "cones"}, {"n", n}, {"batch", config.batch}, {"rows", jr}};
    out.trials = config.batch * eps.size();
  } else {
    const auto records = run_trials(config, exec);
    write_file(out.trials_file, trials_csv(records));
    const Report rep = build_report(records, config.mode, config.lambdas);
    summary = rep.summary;
    out.trials = rep.trials;
    out.failures = rep.failures;
    if (config.mode == Mode::Scaling && rep.plot_csv) {
      out.plot_file = resolve(out_dir, config.outputs.plot_path);
      write_file(*out.plot_file, *rep.plot_csv);
    }
  }

  summary["config"] = config.to_json();
  write_file(out.summary_file, summary.dump(2) + "\n");
  out.exit_code = over_failure_budget(out.failures, out.trials) ? kSolverFailure : kOk;
  return out;
}

}  // namespace randgame::runner
