#include "randgame/trials.hpp"

#include <chrono>
#include <cmath>

namespace randgame::trials {

GameTrial run_game_trial(const ensembles::EnsembleSpec& spec, std::size_t n, std::size_t m,
                         RandomSeed seed, const solver::SolveOptions& opts, bool timed) {
  const auto start = std::chrono::steady_clock::now();
  GameTrial t;
  t.seed = seed;
  t.n = n;
  t.m = m;
  const Matrix game = ensembles::sample(spec, n, m, seed);
  const solver::GameSolution sol = solver::solve_game(game, opts);
  t.failed = !sol.ok();
  t.value = sol.value;
  t.support_size = sol.support_cols.size();
  double sq = 0.0;
  for (double y : sol.y) sq += y * y;
  t.y_norm2 = std::sqrt(sq);
  t.degenerate = sol.degenerate;
  t.iterations = sol.iterations;
  if (timed) {
    const auto stop = std::chrono::steady_clock::now();
    t.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  }
  return t;
}

std::vector<GameTrial> run_game_batch(const ensembles::EnsembleSpec& spec, std::size_t n,
                                      std::size_t m, std::size_t batch, RandomSeed base,
                                      std::uint64_t first_index, const solver::SolveOptions& opts,
                                      Execution exec, bool timed) {
  return map_trials(
      batch,
      [&](std::size_t i) {
        const std::uint64_t index = first_index + i;
        GameTrial t = run_game_trial(spec, n, m, derive_stream(base, index), opts, timed);
        t.trial_index = index;
        return t;
      },
      exec);
}

std::vector<double> values_of(const std::vector<GameTrial>& trials) {
  std::vector<double> out;
  out.reserve(trials.size());
  for (const auto& t : trials)
    if (!t.failed) out.push_back(t.value);
  return out;
}

std::size_t failures_in(const std::vector<GameTrial>& trials) {
  std::size_t k = 0;
  for (const auto& t : trials) k += t.failed ? 1 : 0;
  return k;
}

}  // namespace randgame::trials
