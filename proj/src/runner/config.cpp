#include "randgame/runner.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "randgame/stats.hpp"

namespace randgame::runner {

using nlohmann::json;

namespace {

constexpr std::pair<Mode, const char*> kModes[] = {
    {Mode::Values, "values"},   {Mode::Scaling, "scaling"},
    {Mode::Gordon, "gordon"},   {Mode::Cones, "cones"},
    {Mode::Rectangular, "rectangular"}, {Mode::Supports, "supports"},
};

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t as_size(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw ConfigError(std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

std::vector<double> as_doubles(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw ConfigError(std::string(what) + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

ensembles::EnsembleSpec parse_ensemble(const json& j) {
  try {
    if (j.is_string()) return ensembles::EnsembleSpec::parse(j.get<std::string>());
    if (j.is_object()) {
      const auto kind = require(j, "kind").get<std::string>();
      if (kind == "bernoulli") return ensembles::EnsembleSpec::bernoulli(j.value("p", 0.5));
      if (j.contains("p")) throw ConfigError("field 'p' only applies to the bernoulli ensemble");
      return ensembles::EnsembleSpec::parse(kind);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("ensemble: ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("ensemble: ") + e.what());
  }
  throw ConfigError("ensemble must be a string or an object");
}

}  // namespace

const char* to_string(Mode mode) {
  for (const auto& [m, name] : kModes)
    if (m == mode) return name;
  return "?";
}

Mode parse_mode(std::string_view text) {
  for (const auto& [m, name] : kModes)
    if (text == name) return m;
  throw ConfigError("unknown mode '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
  if (sizes.empty() && mode != Mode::Rectangular) throw ConfigError("sizes must be non-empty");
  if (mode == Mode::Rectangular && sizes.size() != 1)
    throw ConfigError("rectangular mode takes exactly one size (n, n)");
  if (batch < 1) throw ConfigError("batch must be >= 1");
  for (const auto& [n, m] : sizes) {
    if (n < 1 || m < 1) throw ConfigError("sizes must be positive");
    if (ensemble.kind == ensembles::EnsembleKind::HaarOrthogonal && n != m)
      throw ConfigError("the haar ensemble needs square sizes");
  }
  try {
    ensemble.validate();
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (outputs.trials_path.empty() || outputs.summary_path.empty())
    throw ConfigError("output paths must be non-empty");

  switch (mode) {
    case Mode::Scaling:
      if (sizes.size() < 3) throw ConfigError("scaling mode needs at least 3 sizes");
      if (batch < 2) throw ConfigError("scaling mode needs batch >= 2");
      break;
    case Mode::Supports:
      if (batch < 100) throw ConfigError("supports mode needs batch >= 100");
      break;
    case Mode::Gordon:
      if (ensemble.kind != ensembles::EnsembleKind::GaussianIID)
        throw ConfigError("gordon mode uses the gaussian ensemble");
      if (sizes.size() != 1) throw ConfigError("gordon mode takes exactly one size");
      if (batch < 100) throw ConfigError("gordon mode needs batch >= 100");
      for (double t : t_points)
        if (std::isnan(t)) throw ConfigError("t_points must not contain NaN");
      break;
    case Mode::Cones: {
      if (sizes.size() != 1) throw ConfigError("cones mode takes exactly one size");
      if (batch < 30) throw ConfigError("cones mode needs batch >= 30");
      const double cap = 1.0 / std::sqrt(static_cast<double>(sizes[0].first));
      for (double e : epsilons)
        if (!(e >= 0.0) || e > cap * (1.0 + 1e-12))
          throw ConfigError("epsilons must lie in [0, 1/sqrt(n)]");
      break;
    }
    case Mode::Rectangular:
      if (ensemble.kind != ensembles::EnsembleKind::GaussianIID)
        throw ConfigError("rectangular mode uses the gaussian ensemble");
      if (sizes[0].first != sizes[0].second) throw ConfigError("rectangular mode takes a square base size");
      if (lambdas.empty()) throw ConfigError("rectangular mode needs lambdas");
      if (batch < 2) throw ConfigError("rectangular mode needs batch >= 2");
      for (double l : lambdas)
        if (!(l >= 0.0) || !std::isfinite(l)) throw ConfigError("lambdas must be finite and >= 0");
      break;
    case Mode::Values:
      break;
  }
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  try {
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("ensemble")) c.ensemble = parse_ensemble(j.at("ensemble"));

    const json& sizes = require(j, "sizes");
    if (!sizes.is_array()) throw ConfigError("sizes must be an array of [n, m] pairs");
    for (const auto& s : sizes) {
      if (s.is_array() && s.size() == 2) {
        c.sizes.emplace_back(as_size(s[0], "n"), as_size(s[1], "m"));
      } else if (s.is_number_integer()) {
        const auto n = as_size(s, "n");
        c.sizes.emplace_back(n, n);
      } else {
        throw ConfigError("sizes must be an array of [n, m] pairs");
      }
    }

    c.batch = as_size(require(j, "batch"), "batch");
    const json& seed = require(j, "seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
      throw ConfigError("seed must be a non-negative 64-bit integer");
    c.seed = seed.get<std::uint64_t>();

    if (j.contains("solver")) {
      const json& s = j.at("solver");
      if (!s.is_object()) throw ConfigError("solver must be an object");
      if (s.contains("tolerance")) c.solver.tolerance = s.at("tolerance").get<double>();
      if (s.contains("support_threshold"))
        c.solver.support_threshold = s.at("support_threshold").get<double>();
      if (s.contains("max_pivots") && !s.at("max_pivots").is_null())
        c.solver.max_pivots = as_size(s.at("max_pivots"), "max_pivots");
      if (s.contains("anti_cycling")) c.solver.anti_cycling = s.at("anti_cycling").get<bool>();
    }
    if (j.contains("outputs")) {
      const json& o = j.at("outputs");
      if (!o.is_object()) throw ConfigError("outputs must be an object");
      if (o.contains("trials_path")) c.outputs.trials_path = o.at("trials_path").get<std::string>();
      if (o.contains("summary_path")) c.outputs.summary_path = o.at("summary_path").get<std::string>();
      if (o.contains("plot_path")) c.outputs.plot_path = o.at("plot_path").get<std::string>();
    }
    if (j.contains("timing")) c.timing = j.at("timing").get<bool>();
    if (j.contains("epsilons")) c.epsilons = as_doubles(j.at("epsilons"), "epsilons");
    if (j.contains("t_points")) c.t_points = as_doubles(j.at("t_points"), "t_points");
    if (j.contains("lambdas")) c.lambdas = as_doubles(j.at("lambdas"), "lambdas");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  j["mode"] = runner::to_string(mode);
  j["ensemble"] = ensemble.tag();
  j["sizes"] = json::array();
  for (const auto& [n, m] : sizes) j["sizes"].push_back({n, m});
  j["batch"] = batch;
  j["seed"] = seed;
  j["solver"] = {{"tolerance", solver.tolerance},
                 {"support_threshold", solver.support_threshold},
                 {"anti_cycling", solver.anti_cycling}};
  j["solver"]["max_pivots"] = solver.max_pivots ? json(*solver.max_pivots) : json(nullptr);
  j["outputs"] = {{"trials_path", outputs.trials_path},
                  {"summary_path", outputs.summary_path},
                  {"plot_path", outputs.plot_path}};
  j["timing"] = timing;
  if (!epsilons.empty()) j["epsilons"] = epsilons;
  if (!t_points.empty()) j["t_points"] = t_points;
  if (!lambdas.empty()) j["lambdas"] = lambdas;
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return ExperimentConfig::from_json(j);
}

std::vector<std::pair<std::size_t, std::size_t>> effective_sizes(const ExperimentConfig& config) {
  if (config.mode != Mode::Rectangular) return config.sizes;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = config.sizes.at(0).first;
  for (double lambda : config.lambdas) out.emplace_back(n, stats::rectangular_columns(n, lambda));
  return out;
}

}  // namespace randgame::runner
