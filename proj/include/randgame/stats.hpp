#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "randgame/game_solver.hpp"
#include "randgame/parallel.hpp"
#include "randgame/rng.hpp"
#include "randgame/trials.hpp"

namespace randgame::stats {

// ---------------------------------------------------------------------------
// Estimation layer

struct Quantiles {
  double q01 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q99 = 0.0;
};

struct SummaryStats {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double stderr_mean = 0.0;
  Quantiles quantiles;

  double stddev() const;
  // Standard error of the sample standard deviation (normal approximation).
  double stderr_stddev() const;
};

// Throws std::invalid_argument when fewer than two samples are given.
// Sums are compensated, so the result does not depend on summation order
// beyond ~1e-15 relative.
SummaryStats summarize(std::span<const double> samples);

// Linear-interpolation quantile (type 7) of already sorted data.
double quantile_sorted(std::span<const double> sorted, double prob);

// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares of log(sigma) on log(n). Needs >= 3 points, all
// strictly positive.
SlopeFit fit_log_slope(std::span<const std::pair<double, double>> points);

// Standard normal CDF.
double normal_cdf(double x);

// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
// Two-sample statistic sup |F_a - F_b|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
// Asymptotic critical values: c(alpha) / sqrt(n) and c(alpha) sqrt((n+m)/(n m)).
double ks_critical_value(std::size_t n, double alpha);
double ks_two_sample_critical_value(std::size_t n, std::size_t m, double alpha);

// Binomial standard error sqrt(p (1 - p) / n).
double binomial_stderr(double p, std::size_t n);

// ---------------------------------------------------------------------------
// Closed-form reference quantities

// P(X <= m) for X ~ Binomial(n + m - 1, 1/2): the sign probability
// P(v(M) > 0) for an n x m game with i.i.d. symmetric continuous entries.
double cover_sign_probability(std::size_t n, std::size_t m);

// log P(X = k) and P(X <= k) for X ~ Binomial(trials, 1/2).
double log_binomial_half_pmf(std::size_t trials, std::size_t k);
double binomial_half_cdf(std::size_t trials, std::size_t k);

// m exp(-n t^2 / 2); throws std::invalid_argument for t < 0.
double naive_tail_bound(std::size_t n, std::size_t m, double t);

// 1 / (n m).
double variance_lower_bound(std::size_t n, std::size_t m);

// E||g|| for g ~ N(0, I_n), via log-gamma.
double chi_mean(std::size_t n);

// (max(0, sqrt(n/2) - 3/sqrt(n)), sqrt(n/2)).
std::pair<double, double> gplus_norm_bounds(std::size_t n);

// ---------------------------------------------------------------------------
// Support-size and rectangular-game reports

struct SupportReport {
  std::size_t n = 0;
  std::size_t samples = 0;
  double mean = 0.0;
  double variance = 0.0;
  double expected_mean = 0.0;      // n / 2
  double expected_variance = 0.0;  // n / 4
  double tv_distance = 0.0;        // to Binomial(n, 1/2)
  double outside_fraction = 0.0;   // share outside [0.1 n, 0.9 n]
  bool close_to_binomial = false;  // tv_distance <= 0.1
};

// Requires >= 100 samples.
SupportReport binomial_support_compare(std::span<const std::size_t> support_sizes, std::size_t n);

struct RectangularRow {
  double lambda = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  SummaryStats value;
  // E(v) n / (sqrt(m) - sqrt(n)); NaN when m == n.
  double normalized_mean = 0.0;
  std::size_t failures = 0;
};

struct RectangularReport {
  std::vector<RectangularRow> rows;
  // Means increase from each lambda to the next by more than the combined
  // standard error.
  bool strictly_increasing = false;
};

// n + ceil(lambda sqrt(n)); throws for lambda < 0.
std::size_t rectangular_columns(std::size_t n, double lambda);

// Fills normalized_mean and the monotonicity flag from rows whose lambda, n,
// m, value and failures are set.
RectangularReport assemble_rectangular(std::vector<RectangularRow> rows);

// m = rectangular_columns(n, lambda) for each lambda in the grid.
RectangularReport rectangular_expectation_check(std::size_t n, std::span<const double> lambdas,
                                                std::size_t batch, RandomSeed seed,
                                                const solver::SolveOptions& opts = {},
                                                Execution exec = {});

struct CoverRow {
  std::size_t n = 0;
  std::size_t m = 0;
  double formula = 0.0;
  double mc_frequency = 0.0;
  double stderr_mc = 0.0;
  double z_score = 0.0;  // (mc - formula) / stderr
  bool within_3se = false;
};

// Monte Carlo frequency of v(M) > 0 for Gaussian games against
// cover_sign_probability, one row per size.
std::vector<CoverRow> cover_adjudication(std::span<const std::pair<std::size_t, std::size_t>> sizes,
                                         std::size_t batch, RandomSeed seed,
                                         const solver::SolveOptions& opts = {},
                                         Execution exec = {});

nlohmann::json to_json(const SummaryStats& s);
nlohmann::json to_json(const SlopeFit& f);
nlohmann::json to_json(const SupportReport& r);
nlohmann::json to_json(const RectangularReport& r);
nlohmann::json to_json(const std::vector<CoverRow>& rows);

}  // namespace randgame::stats
