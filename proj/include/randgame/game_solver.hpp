#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "randgame/matrix.hpp"

namespace randgame::solver {

struct SolveOptions {
  double tolerance = 1e-9;
  double support_threshold = 1e-8;
  // Defaults to 50 * (n + m) when unset.
  std::optional<std::size_t> max_pivots;
  // Switch from Dantzig to Bland's rule after 10 * (n + m) degenerate pivots.
  bool anti_cycling = true;

  // Throws std::invalid_argument unless 0 < tolerance < support_threshold < 1.
  void validate() const;
};

enum class SolveStatus {
  Optimal,
  PivotLimit,     // simplex hit max_pivots; the strategies are not trustworthy
  NoCandidate,    // support enumeration found no saddle candidate
};

const char* to_string(SolveStatus status);

// Residuals are measured against the game, not the normalized LP the solver
// pivots on:
//   primal_feas = max(0, v - min_i (M y)_i)
//   dual_feas   = max(0, max_j (x^T M)_j - v)
// and simplex_sum_* = max(|sum - 1|, largest negative entry magnitude).
struct Residuals {
  double primal_feas = 0.0;
  double dual_feas = 0.0;
  double simplex_sum_x = 0.0;
  double simplex_sum_y = 0.0;

  double max() const;
};

struct GameSolution {
  SolveStatus status = SolveStatus::Optimal;
  double value = 0.0;
  std::vector<double> x;  // row player, in the n-simplex
  std::vector<double> y;  // column player, in the m-simplex
  std::vector<std::size_t> support_rows;
  std::vector<std::size_t> support_cols;
  Residuals residuals;
  // Set when thresholding and complementary slackness disagree on a support,
  // when |R| != |C|, or when several optimal vertices were found.
  bool degenerate = false;
  std::size_t iterations = 0;

  bool ok() const { return status == SolveStatus::Optimal; }
};

// Exact value and optimal strategies via a dense tableau simplex on the
// positively shifted matrix. Throws std::invalid_argument on non-finite input
// or invalid options; a pivot-limit failure is reported through `status`.
GameSolution solve_game(const Matrix& m, const SolveOptions& opts = {});

// Brute-force oracle over all equal-size supports (R, C), using the
// equalizing-strategy formulas on M_RC. Requires n, m <= 8.
GameSolution solve_by_support_enumeration(const Matrix& m, double tolerance = 1e-9);

struct VerifyReport {
  Residuals residuals;
  bool equal_support_sizes = false;
  bool pass = false;
};

VerifyReport verify_solution(const Matrix& m, const GameSolution& sol, double tolerance);

// Computes the residuals for (value, x, y) against m.
Residuals compute_residuals(const Matrix& m, double value, const std::vector<double>& x,
                            const std::vector<double>& y);

struct PureSaddle {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

// The pure saddle point, present iff max_j min_i M_ij == min_i max_j M_ij.
std::optional<PureSaddle> pure_saddle(const Matrix& m);

// Returns (v(M), v(-M^T)).
std::pair<double, double> value_symmetry_check(const Matrix& m, const SolveOptions& opts = {});

nlohmann::json to_json(const GameSolution& sol);

}  // namespace randgame::solver
