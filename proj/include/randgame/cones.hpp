#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "randgame/game_solver.hpp"
#include "randgame/matrix.hpp"
#include "randgame/parallel.hpp"
#include "randgame/rng.hpp"

namespace randgame::cones {

// K(eps) = { z : z_i >= eps ||z|| for all i } in R^n.
struct ConeSpec {
  double epsilon = 0.0;
  std::size_t n = 1;

  // Throws std::invalid_argument unless n >= 1 and 0 <= eps <= 1/sqrt(n).
  void validate() const;
  // eps at (or within rounding of) 1/sqrt(n): the cone is the ray through 1.
  bool is_ray() const;
};

enum class ProjectionStatus { Converged, Failed };

struct ProjectionResult {
  std::vector<double> z;
  double sq_distance = 0.0;
  double kkt_residual = 0.0;
  std::size_t iterations = 0;  // candidate active sets examined
  ProjectionStatus status = ProjectionStatus::Converged;
};

struct ProjectionOptions {
  double kkt_tolerance = 1e-7;
};

// Euclidean projection onto K(eps). Exact: sorts g, tries each split into a
// free top block and an active block pinned at eps ||z||, and keeps the best
// feasible candidate (or 0). The KKT residual is recomputed from the
// multipliers of that split and must fall below opts.kkt_tolerance, otherwise
// status is Failed and z is still the best candidate found.
ProjectionResult project_K(std::span<const double> g, double epsilon, const ProjectionOptions& opts = {});

// Lagrangian lower bound on the squared distance from g to K(eps).
double lagrangian_minorant(std::span<const double> g, double epsilon);

struct DeltaEstimate {
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::size_t batch = 0;
};

// Monte Carlo statistical dimension E ||Pi_K(g)||^2. batch >= 30. Throws
// std::runtime_error if any projection fails, naming the trial.
DeltaEstimate estimate_delta(double epsilon, std::size_t n, std::size_t batch, RandomSeed seed,
                             Execution exec = {});

// n/2 - eps n sqrt(n) / 8 + 2 eps^2 n^2; eps >= 0, n >= 2.
double delta_upper_bound(double epsilon, std::size_t n);

// sqrt(8 ln(4 / eta)) for eta in (0, 1).
double kinematic_threshold(double eta);

struct DeltaSweepRow {
  double epsilon = 0.0;
  std::size_t n = 0;
  std::size_t batch = 0;
  double delta_hat = 0.0;
  double stderr_mean = 0.0;
  double upper_bound = 0.0;
};

std::vector<DeltaSweepRow> delta_sweep(std::size_t n, std::span<const double> epsilons, std::size_t batch,
                                       RandomSeed seed, Execution exec = {});

// Header: epsilon,n,batch,delta_hat,stderr,upper_bound
std::string delta_sweep_csv(const std::vector<DeltaSweepRow>& rows);

// ---------------------------------------------------------------------------
// v'(Q) = max over y >= 0, ||y|| = 1 of min_i (Q y)_i

enum class VPrimeFlag {
  Certified,    // ball optimum > 0; value exact
  Nonpositive,  // ball optimum is 0; value is a best-effort sphere estimate
  Failed,       // the quadratic program did not converge
};

const char* to_string(VPrimeFlag flag);

struct VPrimeOptions {
  solver::SolveOptions game;
  std::size_t max_iterations = 0;  // active-set iterations; 0 means 20 n + 100
  std::size_t sphere_iterations = 400;
  std::size_t sphere_random_starts = 4;
  RandomSeed seed{0x7e57, 0};
};

struct VPrimeResult {
  double value = 0.0;
  VPrimeFlag flag = VPrimeFlag::Certified;
  std::vector<double> y;  // unit-norm maximizer (certified) or best sphere point
  std::size_t iterations = 0;
};

// Positive case: the sign comes from the game LP (v(Q) > 0 iff some y >= 0
// has Q y > 0), then min ||y||^2 / 2 subject to Q y >= 1, y >= 0 is solved by
// a primal active-set method started from the game's optimal strategy, and
// v' = 1 / ||y*||. Q must be square.
VPrimeResult v_prime(const Matrix& q, const VPrimeOptions& opts = {});

enum class Intersection { Intersects, Disjoint, Indeterminate };

const char* to_string(Intersection r);

// Whether K(0) meets Q^T K(eps) outside the origin, i.e. v'(Q) >= eps.
// Requires 0 < eps <= 1/sqrt(n). Indeterminate only when the positive-branch
// solve failed and its best value lies within 1e-6 of eps.
Intersection intersection_test(const Matrix& q, double epsilon, const VPrimeOptions& opts = {});

struct TailRow {
  double t = 0.0;
  double frequency = 0.0;  // share of Q with v'(Q) >= t / n
  double stderr_freq = 0.0;
  double bound = 0.0;      // 4 exp(-t^2 / 32)
  std::size_t indeterminate = 0;
};

// Haar Q of size n, one batch shared by all t values.
std::vector<TailRow> vprime_tail_experiment(std::size_t n, std::size_t batch, std::span<const double> ts,
                                            RandomSeed seed, const VPrimeOptions& opts = {},
                                            Execution exec = {});

struct StrategyNormReport {
  std::size_t n = 0;
  std::size_t batch = 0;
  std::size_t failures = 0;
  double scaled_norm_q25 = 0.0, scaled_norm_median = 0.0, scaled_norm_q75 = 0.0, scaled_norm_max = 0.0;
  double scaled_norm_min = 0.0;  // >= 1 by Cauchy-Schwarz
  double support_fraction_q25 = 0.0, support_fraction_median = 0.0, support_fraction_q75 = 0.0;
  double small_support_frequency = 0.0;  // share with |C| <= n / 20
};

// Solves Haar games and summarizes sqrt(n) ||y|| and |C| / n. batch >= 100.
StrategyNormReport strategy_norm_experiment(std::size_t n, std::size_t batch, RandomSeed seed,
                                            const solver::SolveOptions& opts = {}, Execution exec = {});

}  // namespace randgame::cones
