#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "randgame/ensembles.hpp"
#include "randgame/game_solver.hpp"
#include "randgame/parallel.hpp"
#include "randgame/rng.hpp"

namespace randgame::trials {

// One sampled game and the summary of its solution.
struct GameTrial {
  std::uint64_t trial_index = 0;
  RandomSeed seed;
  std::size_t n = 0;
  std::size_t m = 0;
  double value = 0.0;
  std::size_t support_size = 0;  // |C|
  double y_norm2 = 0.0;          // Euclidean norm of the column strategy
  bool degenerate = false;
  bool failed = false;
  std::size_t iterations = 0;
  double wall_ms = 0.0;  // 0 unless timing was requested
};

GameTrial run_game_trial(const ensembles::EnsembleSpec& spec, std::size_t n, std::size_t m,
                         RandomSeed seed, const solver::SolveOptions& opts, bool timed = false);

// Trials first_index .. first_index + batch - 1; trial i uses
// derive_stream(base, i). Results are in index order regardless of `exec`.
std::vector<GameTrial> run_game_batch(const ensembles::EnsembleSpec& spec, std::size_t n,
                                      std::size_t m, std::size_t batch, RandomSeed base,
                                      std::uint64_t first_index, const solver::SolveOptions& opts,
                                      Execution exec = {}, bool timed = false);

// Values of the non-failed trials.
std::vector<double> values_of(const std::vector<GameTrial>& trials);
std::size_t failures_in(const std::vector<GameTrial>& trials);

}  // namespace randgame::trials
