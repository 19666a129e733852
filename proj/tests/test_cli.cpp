#include <doctest.h>

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "randgame/ensembles.hpp"
#include "randgame/runner.hpp"
#include "randgame/stats.hpp"
#include "randgame/trials.hpp"

using namespace randgame;
using namespace randgame::runner;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
  static std::atomic<int> counter{0};
  const auto dir = fs::temp_directory_path() /
                   ("randgame_cli_" + name + "_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct Captured {
  int code = 0;
  std::string out, err;
};

Captured run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "randgame");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  Captured c;
  c.code = cli_main(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  c.out = out.str();
  c.err = err.str();
  return c;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const auto c = ExperimentConfig::from_json(
      json::parse(R"({"ensemble":{"kind":"bernoulli","p":0.3},"sizes":[[3,4],5],"batch":10,"seed":18446744073709551615})"));
  CHECK(c.ensemble == ensembles::EnsembleSpec::bernoulli(0.3));
  CHECK(c.sizes == std::vector<std::pair<std::size_t, std::size_t>>{{3, 4}, {5, 5}});
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK(c.mode == Mode::Values);

  const auto round = ExperimentConfig::from_json(c.to_json());
  CHECK(round.to_json() == c.to_json());

  auto bad = [](const char* text) {
    CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(text)), ConfigError);
  };
  bad(R"({"sizes":[[4,4]],"batch":0,"seed":1})");
  bad(R"({"sizes":[],"batch":5,"seed":1})");
  bad(R"({"sizes":[[4,4]],"seed":1})");
  bad(R"({"sizes":[[4,4]],"batch":5,"seed":-3})");
  bad(R"({"sizes":[[4,5]],"batch":5,"seed":1,"ensemble":"haar"})");
  bad(R"({"sizes":[[4,4]],"batch":5,"seed":1,"ensemble":"cauchy"})");
  bad(R"({"sizes":[[4,4]],"batch":5,"seed":1,"mode":"plots"})");
  bad(R"({"sizes":[[4,4]],"batch":5,"seed":1,"solver":{"tolerance":0.5}})");
  bad(R"({"sizes":[[4,4],[8,8]],"batch":5,"seed":1,"mode":"scaling"})");
  bad(R"({"sizes":[[4,4]],"batch":50,"seed":1,"mode":"supports"})");
  bad(R"({"sizes":[[16,16]],"batch":50,"seed":1,"mode":"cones","epsilons":[0.5]})");
  bad(R"({"sizes":[[16,16]],"batch":50,"seed":1,"mode":"rectangular"})");
  bad(R"({"sizes":[[4,4]],"batch":5,"seed":1,"ensemble":{"kind":"gaussian","p":0.2}})");
}

TEST_CASE("rectangular sizes") {
  const auto c = ExperimentConfig::from_json(
      json::parse(R"({"sizes":[[64,64]],"batch":5,"seed":1,"mode":"rectangular","lambdas":[0,1,2,4]})"));
  const auto sizes = effective_sizes(c);
  REQUIRE(sizes.size() == 4);
  CHECK(sizes[0].second == 64);
  CHECK(sizes[1].second == 72);
  CHECK(sizes[2].second == 80);
  CHECK(sizes[3].second == 96);
}

TEST_CASE("trial seeds depend only on the root seed and the global index") {
  ExperimentConfig c;
  c.sizes = {{4, 5}, {6, 6}};
  c.batch = 7;
  c.seed = 99;
  const auto records = run_trials(c, Execution::serial());
  REQUIRE(records.size() == 14);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    CHECK(r.trial_index == i);
    const RandomSeed s = derive_stream(RandomSeed{99, 0}, i);
    CHECK(r.seed == s.stream_index);
    // recompute the trial in isolation
    const auto t = trials::run_game_trial(c.ensemble, r.n, r.m, s, c.solver);
    CHECK(t.value == r.value);
    CHECK(r.wall_ms == 0.0);
    CHECK(r.ensemble == "gaussian");
  }
  CHECK(records[6].n == 4);
  CHECK(records[7].n == 6);
}

TEST_CASE("trials CSV round trip") {
  ExperimentConfig c;
  c.sizes = {{3, 3}, {5, 2}};
  c.batch = 20;
  c.seed = 3;
  c.ensemble = ensembles::EnsembleSpec::bernoulli(0.25);
  auto records = run_trials(c);
  records[4].value = std::nan("");
  const std::string text = trials_csv(records);
  CHECK(lines_of(text).front() == kTrialsHeader);
  CHECK(lines_of(text).size() == records.size() + 1);
  const auto back = parse_trials_csv(text);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].trial_index == records[i].trial_index);
    CHECK(back[i].seed == records[i].seed);
    CHECK(back[i].ensemble == "bernoulli(0.25)");
    if (i == 4) {
      CHECK(back[i].failed());
    } else {
      CHECK(back[i].value == records[i].value);  // 17 digits round-trip exactly
      CHECK(back[i].y_norm2 == records[i].y_norm2);
    }
    CHECK(back[i].degenerate == records[i].degenerate);
    CHECK(back[i].support_size == records[i].support_size);
  }
  CHECK(trials_csv(back) == text);
}

TEST_CASE("trials CSV schema errors") {
  const std::string header(kTrialsHeader);
  CHECK_THROWS_AS(parse_trials_csv(""), IoError);
  CHECK_THROWS_AS(parse_trials_csv(header + "\n"), IoError);
  CHECK_THROWS_AS(parse_trials_csv("trial_index,seed\n0,1\n"), IoError);
  CHECK_THROWS_AS(parse_trials_csv(header + "\n0,1,2,2,gaussian,0.5,1,0.7,0,3\n"), IoError);
  CHECK_THROWS_AS(parse_trials_csv(header + "\n0,1,2,2,gaussian,abc,1,0.7,0,3,0\n"), IoError);
  CHECK_THROWS_AS(parse_trials_csv(header + "\n0,1,2,2,cauchy,0.5,1,0.7,0,3,0\n"), IoError);
  CHECK_THROWS_AS(parse_trials_csv(header + "\n0,1,2,2,gaussian,0.5,1,0.7,2,3,0\n"), IoError);
  try {
    parse_trials_csv(header + "\n0,1,2,2,gaussian,0.5,1,0.7,0,3,0\n0,1,2\n");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("experiment is byte-reproducible across runs and thread counts") {
  const auto dir = fresh_dir("repro");
  spit(dir / "c.json", R"({"ensemble":"gaussian","sizes":[[16,16]],"batch":200,"seed":7})");
  const auto cfg = (dir / "c.json").string();
  REQUIRE(run_cli({"experiment", "--config", cfg, "--out", (dir / "a").string()}).code == 0);
  REQUIRE(run_cli({"experiment", "--config", cfg, "--out", (dir / "b").string(), "--threads", "1"}).code == 0);
  REQUIRE(run_cli({"experiment", "--config", cfg, "--out", (dir / "c").string(), "--threads", "4"}).code == 0);
  const auto a = slurp(dir / "a" / "trials.csv");
  CHECK(lines_of(a).size() == 201);
  CHECK(a == slurp(dir / "b" / "trials.csv"));
  CHECK(a == slurp(dir / "c" / "trials.csv"));
  CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "c" / "summary.json"));

  // --seed overrides the config
  REQUIRE(run_cli({"experiment", "--config", cfg, "--out", (dir / "d").string(), "--seed", "8"}).code == 0);
  CHECK(a != slurp(dir / "d" / "trials.csv"));
  fs::remove_all(dir);
}

TEST_CASE("timing fills wall_ms only on request") {
  ExperimentConfig c;
  c.sizes = {{20, 20}};
  c.batch = 10;
  c.timing = true;
  double total = 0.0;
  for (const auto& r : run_trials(c)) total += r.wall_ms;
  CHECK(total > 0.0);
}

TEST_CASE("exit codes") {
  const auto dir = fresh_dir("exit");
  spit(dir / "zero.json", R"({"mode":"values","sizes":[[4,4]],"batch":0,"seed":1})");
  CHECK(run_cli({"experiment", "--config", (dir / "zero.json").string(), "--out", dir.string()}).code == 1);
  spit(dir / "broken.json", R"({"sizes":[[4,4]],)");
  CHECK(run_cli({"experiment", "--config", (dir / "broken.json").string()}).code == 1);
  CHECK(run_cli({"experiment", "--config", (dir / "missing.json").string()}).code == 3);
  CHECK(run_cli({"experiment"}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"experiment", "--config", (dir / "zero.json").string(), "--threads", "-2"}).code == 1);

  // one pivot cannot solve these games
  spit(dir / "starved.json",
       R"({"sizes":[[12,12]],"batch":50,"seed":1,"solver":{"max_pivots":1}})");
  const auto starved = run_cli({"experiment", "--config", (dir / "starved.json").string(), "--out",
                                (dir / "s").string()});
  CHECK(starved.code == 2);
  const auto recs = parse_trials_csv(slurp(dir / "s" / "trials.csv"));
  CHECK(recs.size() == 50);
  CHECK(std::isnan(recs[0].value));

  // the output directory cannot be created under a regular file
  spit(dir / "blocker", "x");
  spit(dir / "ok.json", R"({"sizes":[[4,4]],"batch":3,"seed":1})");
  CHECK(run_cli({"experiment", "--config", (dir / "ok.json").string(), "--out",
                 (dir / "blocker" / "sub").string()}).code == 3);
  fs::remove_all(dir);
}

TEST_CASE("solve subcommand") {
  const auto dir = fresh_dir("solve");
  spit(dir / "mp.csv", "1,-1\n-1,1\n");
  auto r = run_cli({"solve", (dir / "mp.csv").string()});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j.at("value").get<double>() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(j.at("x").size() == 2);
  CHECK(j.contains("residuals"));

  spit(dir / "one.csv", "3.5\n");
  r = run_cli({"solve", (dir / "one.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("value").get<double>() == 3.5);

  spit(dir / "one.json", R"({"n":2,"m":2,"data":[1,2,3,4]})");
  r = run_cli({"solve", (dir / "one.json").string()});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("value").get<double>() == doctest::Approx(2.0));

  spit(dir / "bad.csv", "1,2\n3,4\n5\n");
  r = run_cli({"solve", (dir / "bad.csv").string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("line 3") != std::string::npos);

  CHECK(run_cli({"solve", (dir / "nope.csv").string()}).code == 3);
  fs::remove_all(dir);
}

TEST_CASE("scaling mode and report") {
  const auto dir = fresh_dir("scaling");
  const auto r = run_cli({"scaling", "--out", dir.string(), "--seed", "11"});
  REQUIRE(r.code == 0);
  const auto summary = json::parse(slurp(dir / "summary.json"));
  const double slope = summary.at("slope_fit").at("slope").get<double>();
  CHECK(slope >= -1.15);
  CHECK(slope <= -0.85);
  CHECK(summary.at("sizes").size() == 5);

  const auto plot = lines_of(slurp(dir / "plot.csv"));
  REQUIRE(plot.size() == 6);
  CHECK(plot[0] == "n,m,sigma,stderr");
  CHECK(plot[1].rfind("8,8,", 0) == 0);
  CHECK(plot[5].rfind("128,128,", 0) == 0);

  // report recomputes the same numbers from the CSV
  const auto rep = run_cli({"report", (dir / "trials.csv").string(), "--mode", "scaling", "--out",
                            (dir / "rep").string()});
  REQUIRE(rep.code == 0);
  CHECK(slurp(dir / "rep" / "plot.csv") == slurp(dir / "plot.csv"));
  const auto again = json::parse(slurp(dir / "rep" / "report.json"));
  CHECK(again.at("slope_fit") == summary.at("slope_fit"));
  CHECK(again.at("sizes") == summary.at("sizes"));

  spit(dir / "empty.csv", "");
  CHECK(run_cli({"report", (dir / "empty.csv").string()}).code == 3);
  spit(dir / "wrong.csv", "a,b,c\n1,2,3\n");
  CHECK(run_cli({"report", (dir / "wrong.csv").string()}).code == 3);
  CHECK(run_cli({"report", (dir / "trials.csv").string(), "--mode", "bogus"}).code == 1);
  fs::remove_all(dir);
}

TEST_CASE("supports mode embeds the binomial comparison") {
  const auto dir = fresh_dir("supports");
  spit(dir / "c.json", R"({"mode":"supports","sizes":[[16,16],[24,24]],"batch":300,"seed":5})");
  REQUIRE(run_cli({"experiment", "--config", (dir / "c.json").string(), "--out", dir.string()}).code == 0);
  const auto summary = json::parse(slurp(dir / "summary.json"));
  const auto records = parse_trials_csv(slurp(dir / "trials.csv"));
  const auto groups = group_by_size(records);
  REQUIRE(groups.size() == 2);
  for (std::size_t g = 0; g < 2; ++g) {
    const auto& cmp = summary.at("sizes").at(g).at("support_compare");
    // recompute straight from the CSV column
    std::vector<std::size_t> ks;
    for (const auto& r : records)
      if (r.n == groups[g].n && !r.failed()) ks.push_back(r.support_size);
    const auto direct = stats::binomial_support_compare(ks, groups[g].n);
    CHECK(cmp.at("tv_distance").get<double>() == direct.tv_distance);
    CHECK(cmp.at("mean").get<double>() == direct.mean);
    CHECK(cmp.at("n").get<std::size_t>() == groups[g].n);
    // equal supports: mean support size near n/2
    CHECK(std::abs(direct.mean - groups[g].n / 2.0) < 0.15 * groups[g].n);
  }
  const auto rep = run_cli({"report", (dir / "trials.csv").string(), "--mode", "supports", "--out",
                            (dir / "rep").string()});
  REQUIRE(rep.code == 0);
  CHECK(json::parse(slurp(dir / "rep" / "report.json")).at("sizes") == summary.at("sizes"));
  fs::remove_all(dir);
}

TEST_CASE("gordon, cones and rectangular modes") {
  const auto dir = fresh_dir("modes");
  REQUIRE(run_cli({"gordon", "--batch", "150", "--out", (dir / "g").string()}).code == 0);
  const auto g = lines_of(slurp(dir / "g" / "gordon_comparison.csv"));
  CHECK(g[0] == "t,p_v_le_t,se_v,p_2phi_le_t,se_phi,p_v_ge_t,p_2phi_ge_t");
  CHECK(g.size() == 22);
  const auto gs = json::parse(slurp(dir / "g" / "summary.json"));
  CHECK(gs.at("sandwich_violations").get<int>() == 0);

  spit(dir / "cones.json",
       R"({"mode":"cones","sizes":[[16,16]],"batch":40,"seed":2,"epsilons":[0,0.25]})");
  REQUIRE(run_cli({"experiment", "--config", (dir / "cones.json").string(), "--out",
                   (dir / "c").string()}).code == 0);
  const auto c = lines_of(slurp(dir / "c" / "trials.csv"));
  CHECK(c[0] == "epsilon,n,batch,delta_hat,stderr,upper_bound");
  CHECK(c.size() == 3);

  REQUIRE(run_cli({"rectangular", "--batch", "60", "--out", (dir / "r").string()}).code == 0);
  const auto rs = json::parse(slurp(dir / "r" / "summary.json"));
  const auto& rows = rs.at("rectangular").at("rows");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].at("m").get<int>() == 72);
  CHECK(rows[2].at("m").get<int>() == 96);
  const auto recs = parse_trials_csv(slurp(dir / "r" / "trials.csv"));
  CHECK(recs.size() == 180);
  CHECK(recs.back().trial_index == 179);
  CHECK(run_cli({"report", (dir / "r" / "trials.csv").string(), "--mode", "rectangular", "--lambdas",
                 "1", "2", "4", "--out", (dir / "rr").string()}).code == 0);
  CHECK(json::parse(slurp(dir / "rr" / "report.json")).at("rectangular") == rs.at("rectangular"));
  fs::remove_all(dir);
}
