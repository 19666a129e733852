#include "randgame/game_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace randgame::solver {

namespace {

constexpr double kOptimalityTol = 1e-11;
constexpr double kPivotTol = 1e-11;
constexpr double kDegenerateStep = 1e-12;

// Dense tableau for
//   maximize 1^T q  subject to  A q + s = 1,  q, s >= 0
// where A has strictly positive entries. At the optimum
// min_q max_p p^T A q = 1 / (1^T q) with the minimizer q / (1^T q); the
// maximizer is the normalized vector of simplex multipliers. solve_game
// feeds it the transpose of the shifted game so that q is the row player.
class Tableau {
 public:
  explicit Tableau(const Matrix& shifted)
      : n_(shifted.rows()), m_(shifted.cols()), width_(m_ + n_ + 1),
        t_(n_ * width_, 0.0), obj_(width_, 0.0), basis_(n_) {
    for (std::size_t i = 0; i < n_; ++i) {
      double* row = &t_[i * width_];
      for (std::size_t j = 0; j < m_; ++j) row[j] = shifted(i, j);
      row[m_ + i] = 1.0;
      row[width_ - 1] = 1.0;
      basis_[i] = m_ + i;
    }
    for (std::size_t j = 0; j < m_; ++j) obj_[j] = 1.0;
  }

  // Returns the entering column or width_ when optimal.
  std::size_t entering(bool bland) const {
    std::size_t best = width_;
    double best_d = kOptimalityTol;
    for (std::size_t j = 0; j + 1 < width_; ++j) {
      if (obj_[j] > best_d) {
        best = j;
        if (bland) break;
        best_d = obj_[j];
      }
    }
    return best;
  }

  // Returns the leaving row or n_ when the column is unbounded.
  std::size_t leaving(std::size_t e, bool bland, double& ratio) const {
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
      const double a = t_[i * width_ + e];
      if (a > kPivotTol) min_ratio = std::min(min_ratio, rhs(i) / a);
    }
    if (!std::isfinite(min_ratio)) return n_;
    const double slack = 1e-12 * (1.0 + min_ratio);
    std::size_t best = n_;
    for (std::size_t i = 0; i < n_; ++i) {
      const double a = t_[i * width_ + e];
      if (a <= kPivotTol || rhs(i) / a > min_ratio + slack) continue;
      if (best == n_) {
        best = i;
      } else if (bland ? basis_[i] < basis_[best] : a > t_[best * width_ + e]) {
        best = i;
      }
    }
    ratio = min_ratio;
    return best;
  }

  void pivot(std::size_t r, std::size_t e) {
    double* prow = &t_[r * width_];
    const double inv = 1.0 / prow[e];
    for (std::size_t j = 0; j < width_; ++j) prow[j] *= inv;
    prow[e] = 1.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * width_];
      const double f = row[e];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) row[j] -= f * prow[j];
      row[e] = 0.0;
    }
    const double f = obj_[e];
    if (f != 0.0) {
      for (std::size_t j = 0; j < width_; ++j) obj_[j] -= f * prow[j];
      obj_[e] = 0.0;
    }
    basis_[r] = e;
  }

  double rhs(std::size_t i) const { return t_[i * width_ + width_ - 1]; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  // Primal q and multipliers p read straight off the tableau.
  void raw_solution(std::vector<double>& q, std::vector<double>& p) const {
    q.assign(m_, 0.0);
    p.assign(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      if (basis_[i] < m_) q[basis_[i]] = rhs(i);
    for (std::size_t i = 0; i < n_; ++i) p[i] = -obj_[m_ + i];
  }

 private:
  std::size_t n_, m_, width_;
  std::vector<double> t_;
  std::vector<double> obj_;
  std::vector<std::size_t> basis_;
};

// Re-solves B q_B = 1 and B^T p = c_B from the original data so that the
// reported solution does not carry accumulated tableau round-off.
bool polish(const Matrix& shifted, const std::vector<std::size_t>& basis, std::vector<double>& q,
            std::vector<double>& p) {
  const auto n = static_cast<Eigen::Index>(shifted.rows());
  const std::size_t m = shifted.cols();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd cb = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const std::size_t var = basis[static_cast<std::size_t>(k)];
    if (var < m) {
      for (Eigen::Index i = 0; i < n; ++i) b(i, k) = shifted(static_cast<std::size_t>(i), var);
      cb(k) = 1.0;
    } else {
      b(static_cast<Eigen::Index>(var - m), k) = 1.0;
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
  if (!(std::abs(lu.determinant()) > 0.0) || lu.rcond() < 1e-13) return false;
  const Eigen::VectorXd xb = lu.solve(Eigen::VectorXd::Ones(n));
  Eigen::PartialPivLU<Eigen::MatrixXd> lut(b.transpose());
  const Eigen::VectorXd pi = lut.solve(cb);
  if (!xb.allFinite() || !pi.allFinite()) return false;
  if (xb.minCoeff() < -1e-9 || pi.minCoeff() < -1e-9) return false;

  std::vector<double> q2(m, 0.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    const std::size_t var = basis[static_cast<std::size_t>(k)];
    if (var < m) q2[var] = std::max(0.0, xb(k));
  }
  std::vector<double> p2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) p2[static_cast<std::size_t>(i)] = std::max(0.0, pi(i));
  q = std::move(q2);
  p = std::move(p2);
  return true;
}

std::vector<double> normalized(std::vector<double> v) {
  for (double& e : v) e = std::max(0.0, e);
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  if (s > 0.0)
    for (double& e : v) e /= s;
  return v;
}

double simplex_defect(const std::vector<double>& v) {
  double sum = 0.0;
  double neg = 0.0;
  for (double e : v) {
    sum += e;
    neg = std::max(neg, -e);
  }
  return std::max(std::abs(sum - 1.0), neg);
}

void extract_supports(const Matrix& m, GameSolution& sol, const SolveOptions& opts) {
  const std::size_t n = m.rows();
  const std::size_t k = m.cols();
  const Eigen::Map<const Eigen::VectorXd> x(sol.x.data(), static_cast<Eigen::Index>(n));
  const Eigen::Map<const Eigen::VectorXd> y(sol.y.data(), static_cast<Eigen::Index>(k));
  const Eigen::VectorXd my = m.eigen() * y;
  const Eigen::VectorXd xm = m.eigen().transpose() * x;

  sol.support_rows.clear();
  sol.support_cols.clear();
  bool disagree = false;
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = sol.x[i] > opts.support_threshold;
    const bool tight = my(static_cast<Eigen::Index>(i)) - sol.value <= opts.tolerance;
    if (positive && tight) sol.support_rows.push_back(i);
    if (positive != tight) disagree = true;
  }
  for (std::size_t j = 0; j < k; ++j) {
    const bool positive = sol.y[j] > opts.support_threshold;
    const bool tight = sol.value - xm(static_cast<Eigen::Index>(j)) <= opts.tolerance;
    if (positive && tight) sol.support_cols.push_back(j);
    if (positive != tight) disagree = true;
  }
  sol.degenerate = disagree || sol.support_rows.size() != sol.support_cols.size();
}

}  // namespace

void SolveOptions::validate() const {
  if (!(tolerance > 0.0 && tolerance < support_threshold && support_threshold < 1.0)) {
    throw std::invalid_argument("SolveOptions: require 0 < tolerance < support_threshold < 1");
  }
  if (max_pivots && *max_pivots == 0) throw std::invalid_argument("SolveOptions: max_pivots must be > 0");
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::PivotLimit: return "pivot_limit";
    case SolveStatus::NoCandidate: return "no_candidate";
  }
  return "unknown";
}

double Residuals::max() const {
  return std::max({primal_feas, dual_feas, simplex_sum_x, simplex_sum_y});
}

Residuals compute_residuals(const Matrix& m, double value, const std::vector<double>& x,
                            const std::vector<double>& y) {
  if (x.size() != m.rows() || y.size() != m.cols()) {
    throw std::invalid_argument("compute_residuals: strategy dimensions do not match the matrix");
  }
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  const Eigen::VectorXd my = m.eigen() * yv;
  const Eigen::VectorXd xm = m.eigen().transpose() * xv;
  Residuals r;
  r.primal_feas = std::max(0.0, value - my.minCoeff());
  r.dual_feas = std::max(0.0, xm.maxCoeff() - value);
  r.simplex_sum_x = simplex_defect(x);
  r.simplex_sum_y = simplex_defect(y);
  return r;
}

GameSolution solve_game(const Matrix& m, const SolveOptions& opts) {
  opts.validate();
  if (m.empty()) throw std::invalid_argument("solve_game: empty matrix");
  if (!m.all_finite()) throw std::invalid_argument("solve_game: matrix has non-finite entries");

  const std::size_t n = m.rows();
  const std::size_t k = m.cols();
  const double shift = 1.0 + m.max_abs();
  const Matrix shifted = m.shifted(shift).transposed();

  Tableau tab(shifted);
  const std::size_t max_pivots = opts.max_pivots.value_or(50 * (n + k));
  const std::size_t bland_after = 10 * (n + k);
  std::size_t pivots = 0;
  std::size_t degenerate_pivots = 0;
  bool bland = false;
  GameSolution sol;

  while (true) {
    const std::size_t e = tab.entering(bland);
    if (e == n + k + 1) break;
    double ratio = 0.0;
    const std::size_t r = tab.leaving(e, bland, ratio);
    if (r == shifted.rows()) {
      // Cannot happen for a positive matrix; treat as numerical breakdown.
      sol.status = SolveStatus::PivotLimit;
      break;
    }
    if (pivots >= max_pivots) {
      sol.status = SolveStatus::PivotLimit;
      break;
    }
    if (ratio <= kDegenerateStep) {
      ++degenerate_pivots;
      if (opts.anti_cycling && degenerate_pivots >= bland_after) bland = true;
    }
    tab.pivot(r, e);
    ++pivots;
  }
  sol.iterations = pivots;

  std::vector<double> q, p;
  tab.raw_solution(q, p);
  if (sol.status == SolveStatus::Optimal) polish(shifted, tab.basis(), q, p);

  const double total = std::accumulate(q.begin(), q.end(), 0.0);
  sol.x = normalized(q);
  sol.y = normalized(p);
  if (sol.status != SolveStatus::Optimal || !(total > 0.0)) {
    sol.status = SolveStatus::PivotLimit;
    sol.value = std::numeric_limits<double>::quiet_NaN();
    sol.degenerate = true;
    return sol;
  }
  sol.value = 1.0 / total - shift;
  sol.residuals = compute_residuals(m, sol.value, sol.x, sol.y);
  extract_supports(m, sol, opts);
  return sol;
}

GameSolution solve_by_support_enumeration(const Matrix& m, double tolerance) {
  if (m.empty()) throw std::invalid_argument("support enumeration: empty matrix");
  if (m.rows() > 8 || m.cols() > 8) {
    throw std::invalid_argument("support enumeration is limited to n, m <= 8");
  }
  if (!m.all_finite()) throw std::invalid_argument("support enumeration: non-finite entries");

  const std::size_t n = m.rows();
  const std::size_t k = m.cols();
  // The shift keeps the value positive so that M_RC is invertible on the
  // support even for games whose value is zero.
  const double shift = 1.0 + m.max_abs();
  const Matrix a = m.shifted(shift);
  const auto full = a.eigen();
  const double tol = tolerance * shift;

  GameSolution best;
  best.status = SolveStatus::NoCandidate;
  best.value = std::numeric_limits<double>::quiet_NaN();
  std::size_t candidates = 0;
  std::size_t tried = 0;

  for (std::size_t size = 1; size <= std::min(n, k); ++size) {
    std::vector<bool> row_mask(n, false), col_mask(k, false);
    std::fill(row_mask.end() - static_cast<std::ptrdiff_t>(size), row_mask.end(), true);
    do {
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < n; ++i)
        if (row_mask[i]) rows.push_back(i);
      std::fill(col_mask.begin(), col_mask.end(), false);
      std::fill(col_mask.end() - static_cast<std::ptrdiff_t>(size), col_mask.end(), true);
      do {
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < k; ++j)
          if (col_mask[j]) cols.push_back(j);
        ++tried;

        const auto sz = static_cast<Eigen::Index>(size);
        Eigen::MatrixXd sub(sz, sz);
        for (Eigen::Index r = 0; r < sz; ++r)
          for (Eigen::Index c = 0; c < sz; ++c)
            sub(r, c) = a(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
        if (!lu.isInvertible()) continue;
        const Eigen::VectorXd z = lu.solve(Eigen::VectorXd::Ones(sz));
        const Eigen::VectorXd w = sub.transpose().fullPivLu().solve(Eigen::VectorXd::Ones(sz));
        const double s = z.sum();
        if (!(s > 0.0)) continue;
        const double v = 1.0 / s;

        std::vector<double> x(n, 0.0), y(k, 0.0);
        bool nonneg = true;
        for (Eigen::Index r = 0; r < sz; ++r) {
          x[rows[static_cast<std::size_t>(r)]] = v * w(r);
          y[cols[static_cast<std::size_t>(r)]] = v * z(r);
          if (v * w(r) < -tol || v * z(r) < -tol) nonneg = false;
        }
        if (!nonneg) continue;
        const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(n));
        const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(k));
        const Eigen::VectorXd ay = full * yv;
        const Eigen::VectorXd xa = full.transpose() * xv;
        if (xa.maxCoeff() > v + tol || ay.minCoeff() < v - tol) continue;

        ++candidates;
        if (candidates == 1) {
          best.status = SolveStatus::Optimal;
          best.value = v - shift;
          best.x = normalized(x);
          best.y = normalized(y);
          best.support_rows = rows;
          best.support_cols = cols;
        }
      } while (std::next_permutation(col_mask.begin(), col_mask.end()));
    } while (std::next_permutation(row_mask.begin(), row_mask.end()));
  }

  best.iterations = tried;
  if (best.status == SolveStatus::Optimal) {
    best.residuals = compute_residuals(m, best.value, best.x, best.y);
    best.degenerate = candidates > 1;
  }
  return best;
}

VerifyReport verify_solution(const Matrix& m, const GameSolution& sol, double tolerance) {
  VerifyReport report;
  report.residuals = compute_residuals(m, sol.value, sol.x, sol.y);
  report.equal_support_sizes = sol.support_rows.size() == sol.support_cols.size();
  report.pass = std::isfinite(sol.value) && report.residuals.max() <= tolerance;
  return report;
}

std::optional<PureSaddle> pure_saddle(const Matrix& m) {
  if (m.empty()) return std::nullopt;
  const auto e = m.eigen();
  Eigen::Index best_col = 0;
  const double maxmin = e.colwise().minCoeff().maxCoeff(&best_col);
  Eigen::Index best_row = 0;
  const double minmax = e.rowwise().maxCoeff().minCoeff(&best_row);
  if (maxmin != minmax) return std::nullopt;
  return PureSaddle{static_cast<std::size_t>(best_row), static_cast<std::size_t>(best_col), maxmin};
}

std::pair<double, double> value_symmetry_check(const Matrix& m, const SolveOptions& opts) {
  const double v = solve_game(m, opts).value;
  const double w = solve_game(m.transposed().negated(), opts).value;
  return {v, w};
}

nlohmann::json to_json(const GameSolution& sol) {
  nlohmann::json j;
  j["status"] = to_string(sol.status);
  j["value"] = sol.value;
  j["x"] = sol.x;
  j["y"] = sol.y;
  j["support_rows"] = sol.support_rows;
  j["support_cols"] = sol.support_cols;
  j["residuals"] = {{"primal_feas", sol.residuals.primal_feas},
                    {"dual_feas", sol.residuals.dual_feas},
                    {"simplex_sum_x", sol.residuals.simplex_sum_x},
                    {"simplex_sum_y", sol.residuals.simplex_sum_y}};
  j["degenerate"] = sol.degenerate;
  j["iterations"] = sol.iterations;
  return j;
}

}  // namespace randgame::solver
