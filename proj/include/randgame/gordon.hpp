#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "randgame/game_solver.hpp"
#include "randgame/parallel.hpp"
#include "randgame/rng.hpp"

namespace randgame::gordon {

// Maximizer of h^T v - gamma ||v|| over the simplex.
struct WaterFillingResult {
  double mu = 0.0;
  std::vector<double> maximizer;
  double objective = 0.0;
};

// The level mu with ||(h - mu 1)^+|| = gamma. Throws std::invalid_argument
// unless gamma > 0 and h is non-empty and finite.
double water_fill_mu(std::span<const double> h, double gamma);

WaterFillingResult solve_R(std::span<const double> h, double gamma);

// ||h+|| / 1^T h+  *  min_{u in simplex} { g^T u + ||h+|| ||u|| }.
// Throws std::domain_error when h+ = 0.
double phi2_lower_bound(std::span<const double> g, std::span<const double> h);

// The inner maximum at u = g- / 1^T g-. Throws std::domain_error when g- = 0.
double phi2_upper_bound(std::span<const double> g, std::span<const double> h);

// max over v in the m-simplex of ||v|| g^T u + ||u|| h^T v.
// Throws std::invalid_argument when u is not in the simplex (1e-9 slack).
double inner_max(std::span<const double> u, std::span<const double> g, std::span<const double> h);

struct EstimateOptions {
  std::size_t random_starts = 8;
  std::size_t iterations = 300;
  double initial_step = 0.5;
  double final_step = 1e-4;
  RandomSeed seed{0x5eed, 0};  // Dirichlet starting points
};

// Upper estimate of min_u inner_max(u, g, h) by multi-start projected
// subgradient descent. Never exceeds the value at any start point, so it is
// <= phi2_upper_bound when g- != 0 and >= phi2_lower_bound when h+ != 0.
double phi2_estimate(std::span<const double> g, std::span<const double> h,
                     const EstimateOptions& opts = {});

struct GordonBoundPair {
  double lower = 0.0;
  double upper = 0.0;
  double estimate = 0.0;
};

// All three quantities; requires g- != 0 and h+ != 0.
GordonBoundPair gordon_bounds(std::span<const double> g, std::span<const double> h,
                              const EstimateOptions& opts = {});

// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex(std::span<const double> x);

// ---------------------------------------------------------------------------
// Experiments

// Frequencies with which each high-probability event holds over a batch of
// independent (g, h) with g ~ N(0, I_n), h ~ N(0, I_m).
struct ConcentrationFacts {
  std::size_t n = 0, m = 0, batch = 0;
  double gminus_norm_le_sqrt_n = 0.0;    // ||g-|| <= sqrt(n)
  double gminus_sum_ge_quarter_n = 0.0;  // 1^T g- >= n / 4
  double c_mu_ge_m_over_20 = 0.0;        // sum (h - mu)^+ >= m / 20, gamma = ||g-||
  double hplus_norm_ge_half_sqrt_m = 0.0;
  double hplus_sum_le_half_m = 0.0;
  double c_prime_le_sqrt2_n = 0.0;       // sum (-g - mu')^+ <= sqrt(2) n, gamma = ||h+||
  std::size_t resamples = 0;

  double worst() const;  // smallest of the six frequencies
};

ConcentrationFacts concentration_statistics(std::size_t n, std::size_t m, std::size_t batch,
                                            RandomSeed seed, Execution exec = {});

struct ComparisonRow {
  double t = 0.0;
  double p_v_le_t = 0.0;
  double se_v = 0.0;
  double p_2phi_le_t = 0.0;  // 2 P(lower bound <= t), capped at 1
  double se_phi = 0.0;
  double p_v_ge_t = 0.0;
  double p_2phi_ge_t = 0.0;  // 2 P(estimate >= t), capped at 1
  double se_v_ge = 0.0;
  double se_phi_ge = 0.0;
};

struct ComparisonResult {
  std::size_t n = 0, m = 0, batch = 0;
  std::vector<ComparisonRow> rows;
  std::vector<double> values;  // v(M), one per trial (NaN on solver failure)
  std::vector<GordonBoundPair> bounds;
  std::size_t resamples = 0;        // (g, h) draws rejected for g- = 0 or h+ = 0
  std::size_t solver_failures = 0;
  std::size_t sandwich_violations = 0;  // lower - 1e-8 > estimate or estimate > upper + 1e-8
};

// 21 evenly spaced points on [-3/sqrt(n), 3/sqrt(n)].
std::vector<double> default_t_grid(std::size_t n);

// Requires batch >= 100. Infinite t values are allowed as sentinels.
ComparisonResult gordon_comparison_experiment(std::size_t n, std::size_t m, std::size_t batch,
                                              std::span<const double> t_grid, RandomSeed seed,
                                              const solver::SolveOptions& solve_opts = {},
                                              const EstimateOptions& est_opts = {},
                                              Execution exec = {});

// CSV with header t,p_v_le_t,se_v,p_2phi_le_t,se_phi,p_v_ge_t,p_2phi_ge_t.
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

}  // namespace randgame::gordon
