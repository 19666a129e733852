#include "randgame/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "randgame/ensembles.hpp"
#include "randgame/matrix_io.hpp"
#include "randgame/stats.hpp"
#include "randgame/trials.hpp"

namespace randgame::cones {

namespace {

constexpr double kRayRelTol = 1e-12;

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void require_vector(std::span<const double> g) {
  if (g.empty()) throw std::invalid_argument("cone projection: empty vector");
  for (double x : g)
    if (!std::isfinite(x)) throw std::invalid_argument("cone projection: non-finite entry");
}

ProjectionResult project_ray(std::span<const double> g) {
  const double n = static_cast<double>(g.size());
  const double s = std::accumulate(g.begin(), g.end(), 0.0);
  const double a = std::max(s / n, 0.0);
  ProjectionResult r;
  r.z.assign(g.size(), a);
  r.iterations = 1;
  for (std::size_t i = 0; i < g.size(); ++i) r.sq_distance += (g[i] - a) * (g[i] - a);
  // Optimality on a ray: (g - z) orthogonal to 1 when a > 0, 1^T g <= 0 otherwise.
  const double resid = a > 0.0 ? std::abs(s - a * n) : std::max(0.0, s);
  r.kkt_residual = resid / std::sqrt(n) / (1.0 + norm2(g));
  return r;
}

}  // namespace

void ConeSpec::validate() const {
  if (n == 0) throw std::invalid_argument("cone dimension must be >= 1");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("cone epsilon must be >= 0");
  if (epsilon > (1.0 + kRayRelTol) / std::sqrt(static_cast<double>(n))) {
    throw std::invalid_argument("cone epsilon exceeds 1/sqrt(n); K(eps) is {0}");
  }
}

bool ConeSpec::is_ray() const {
  return epsilon >= (1.0 - kRayRelTol) / std::sqrt(static_cast<double>(n));
}

ProjectionResult project_K(std::span<const double> g, double epsilon, const ProjectionOptions& opts) {
  require_vector(g);
  const ConeSpec spec{epsilon, g.size()};
  spec.validate();
  if (spec.is_ray()) {
    ProjectionResult r = project_ray(g);
    if (r.kkt_residual > opts.kkt_tolerance) r.status = ProjectionStatus::Failed;
    return r;
  }

  const std::size_t n = g.size();
  const double eps = epsilon, e2 = epsilon * epsilon;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g[a] > g[b]; });
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = g[order[i]];

  // top1[j], top2[j]: sum and sum of squares of the j largest entries.
  std::vector<double> top1(n + 1, 0.0), top2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    top1[i + 1] = top1[i] + s[i];
    top2[i + 1] = top2[i] + s[i] * s[i];
  }
  const double total1 = top1[n], total2 = top2[n];

  // Candidate j keeps the j largest entries free (scaled by r / rho) and pins
  // the other k = n - j at eps r. Every such point with s[j-1] >= eps rho lies
  // in K, and the projection is one of them or 0.
  double best_dist = total2;
  std::size_t best_j = 0;
  double best_r = 0.0, best_rho = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double k = static_cast<double>(n - j);
    const double denom = 1.0 - k * e2;
    const double st2 = top2[j];
    const double rest1 = total1 - top1[j];
    const double rest2 = total2 - top2[j];
    if (!(st2 > 0.0) || !(denom > 0.0)) continue;
    const double rho = std::sqrt(st2 / denom);
    const double r = std::sqrt(st2 * denom) + eps * rest1;
    if (!(r > 0.0)) continue;
    if (s[j - 1] < eps * rho) continue;
    const double c = r / rho;
    const double dist = (1.0 - c) * (1.0 - c) * st2 + rest2 - 2.0 * eps * r * rest1 + k * e2 * r * r;
    if (dist < best_dist) {
      best_dist = dist;
      best_j = j;
      best_r = r;
      best_rho = rho;
    }
  }

  ProjectionResult res;
  res.iterations = n;
  res.z.assign(n, 0.0);
  const double gnorm = norm2(g);
  if (best_j == 0) {
    res.sq_distance = total2;
    // 0 is optimal iff min over theta of ||max(g, theta)|| - eps sum (theta - g)^+
    // is <= 0. The function is convex between consecutive sorted entries, so
    // it suffices to check the clamped stationary point on each piece.
    double hmin = std::numeric_limits<double>::infinity();
    auto h_at = [&](std::size_t j, double theta) {
      const double k = static_cast<double>(n - j);
      return std::sqrt(top2[j] + k * theta * theta) - eps * (k * theta - (total1 - top1[j]));
    };
    hmin = std::min(hmin, h_at(0, std::max(s[0], 0.0)));
    hmin = std::min(hmin, gnorm);
    for (std::size_t j = 1; j < n; ++j) {
      const double k = static_cast<double>(n - j);
      const double denom = 1.0 - k * e2;
      const double rho = denom > 0.0 ? std::sqrt(top2[j] / denom) : 0.0;
      hmin = std::min(hmin, h_at(j, std::clamp(eps * rho, s[j], s[j - 1])));
    }
    res.kkt_residual = std::max(0.0, hmin) / (1.0 + gnorm);
  } else {
    const double c = best_r / best_rho;
    const double theta = eps * best_rho;
    for (std::size_t i = 0; i < n; ++i)
      res.z[order[i]] = i < best_j ? s[i] * c : eps * best_r;
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) d2 += (g[i] - res.z[i]) * (g[i] - res.z[i]);
    res.sq_distance = d2;

    // Multipliers lambda_i = theta - g_i on the pinned block; stationarity
    // reads z (1 + eps Lambda / ||z||) = g + lambda.
    const double r = norm2(res.z);
    double lam_sum = 0.0, dual = 0.0;
    for (std::size_t i = best_j; i < n; ++i) {
      const double lam = theta - s[i];
      lam_sum += lam;
      dual = std::max(dual, -lam);
    }
    double stat = 0.0, primal = 0.0;
    const double scale = 1.0 + eps * lam_sum / r;
    for (std::size_t i = 0; i < n; ++i) {
      const double lam = i < best_j ? 0.0 : theta - s[i];
      const double zi = res.z[order[i]];
      stat = std::max(stat, std::abs(zi * scale - s[i] - lam));
      primal = std::max(primal, eps * r - zi);
    }
    res.kkt_residual = std::max({stat, dual, primal}) / (1.0 + gnorm);
  }
  if (!(res.kkt_residual <= opts.kkt_tolerance)) res.status = ProjectionStatus::Failed;
  return res;
}

double lagrangian_minorant(std::span<const double> g, double epsilon) {
  require_vector(g);
  if (!(epsilon >= 0.0)) throw std::invalid_argument("lagrangian_minorant: epsilon must be >= 0");
  double pos2 = 0.0, neg_sum = 0.0;
  for (double x : g) {
    if (x > 0.0) pos2 += x * x;
    else neg_sum -= x;
  }
  const double pos = std::sqrt(pos2);
  const double scale = pos > 0.0 ? std::max(0.0, 1.0 - epsilon * neg_sum / pos) : 0.0;
  double dist2 = 0.0, z2 = 0.0;
  for (double x : g) {
    const double z = scale * std::max(x, 0.0);
    dist2 += (x - z) * (x - z);
    z2 += z * z;
  }
  return dist2 + 2.0 * epsilon * neg_sum * std::sqrt(z2);
}

DeltaEstimate estimate_delta(double epsilon, std::size_t n, std::size_t batch, RandomSeed seed, Execution exec) {
  ConeSpec{epsilon, n}.validate();
  if (batch < 30) throw std::invalid_argument("estimate_delta: batch must be >= 30");
  struct Sample {
    double sq_norm;
    bool failed;
    double residual;
  };
  const auto samples = map_trials(
      batch,
      [&](std::size_t i) {
        const auto g = ensembles::sample_gaussian_vector(n, derive_stream(seed, i));
        const auto p = project_K(g, epsilon);
        double z2 = 0.0;
        for (double z : p.z) z2 += z * z;
        return Sample{z2, p.status != ProjectionStatus::Converged, p.kkt_residual};
      },
      exec);
  std::vector<double> values;
  values.reserve(batch);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].failed) {
      std::ostringstream os;
      os << "estimate_delta: projection failed at trial " << i << " (eps=" << epsilon << ", n=" << n
         << ", kkt residual " << samples[i].residual << ")";
      throw std::runtime_error(os.str());
    }
    values.push_back(samples[i].sq_norm);
  }
  const auto st = stats::summarize(values);
  return {st.mean, st.stderr_mean, batch};
}

double delta_upper_bound(double epsilon, std::size_t n) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("delta_upper_bound: epsilon must be >= 0");
  if (n < 2) throw std::invalid_argument("delta_upper_bound: n must be >= 2");
  const double d = static_cast<double>(n);
  return d / 2.0 - epsilon * d * std::sqrt(d) / 8.0 + 2.0 * epsilon * epsilon * d * d;
}

double kinematic_threshold(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("kinematic_threshold: eta must lie in (0, 1)");
  return std::sqrt(8.0 * std::log(4.0 / eta));
}

std::vector<DeltaSweepRow> delta_sweep(std::size_t n, std::span<const double> epsilons, std::size_t batch,
                                       RandomSeed seed, Execution exec) {
  std::vector<DeltaSweepRow> rows;
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    const auto est = estimate_delta(epsilons[k], n, batch, derive_stream(seed, k), exec);
    rows.push_back({epsilons[k], n, batch, est.mean, est.stderr_mean, delta_upper_bound(epsilons[k], n)});
  }
  return rows;
}

std::string delta_sweep_csv(const std::vector<DeltaSweepRow>& rows) {
  std::ostringstream os;
  os << "epsilon,n,batch,delta_hat,stderr,upper_bound\n";
  using io::format_double;
  for (const auto& r : rows) {
    os << format_double(r.epsilon) << ',' << r.n << ',' << r.batch << ',' << format_double(r.delta_hat) << ','
       << format_double(r.stderr_mean) << ',' << format_double(r.upper_bound) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct QpOutcome {
  VectorXd y;
  bool converged = false;
  bool singular = false;
  std::size_t iterations = 0;
};

// Primal active-set method for min ||y||^2 / 2 s.t. Q y >= 1, y >= 0, from a
// feasible y. `rows` holds the working row constraints (held at equality) and
// `fixed[j]` marks y_j held at 0.
QpOutcome min_norm_qp(const MatrixXd& q, VectorXd y, std::vector<Index> rows, std::vector<bool> fixed,
                      std::size_t max_iterations) {
  const Index n = q.cols();
  const Index nrows = q.rows();
  QpOutcome out;
  std::vector<bool> in_rows(static_cast<std::size_t>(nrows), false);
  for (Index i : rows) in_rows[static_cast<std::size_t>(i)] = true;
  const double scale = 1.0 + q.cwiseAbs().maxCoeff();

  for (std::size_t it = 0; it < max_iterations; ++it) {
    out.iterations = it + 1;
    std::vector<Index> free;
    for (Index j = 0; j < n; ++j)
      if (!fixed[static_cast<std::size_t>(j)]) free.push_back(j);
    const Index t = static_cast<Index>(rows.size());
    const Index f = static_cast<Index>(free.size());

    VectorXd yhat = VectorXd::Zero(n);
    VectorXd lambda(t);
    if (t > 0) {
      if (t > f) {
        out.singular = true;
        out.y = y;
        return out;
      }
      MatrixXd a(t, f);
      for (Index r = 0; r < t; ++r)
        for (Index c = 0; c < f; ++c) a(r, c) = q(rows[static_cast<std::size_t>(r)], free[static_cast<std::size_t>(c)]);
      const MatrixXd gram = a * a.transpose();
      Eigen::LDLT<MatrixXd> ldlt(gram);
      if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-14)) {
        out.singular = true;
        out.y = y;
        return out;
      }
      lambda = ldlt.solve(VectorXd::Ones(t));
      const VectorXd yf = a.transpose() * lambda;
      for (Index c = 0; c < f; ++c) yhat(free[static_cast<std::size_t>(c)]) = yf(c);
    }

    const VectorXd p = yhat - y;
    if (p.cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + y.cwiseAbs().maxCoeff())) {
      y = yhat;
      // Multipliers: lambda on rows, nu_j = -(Q_{T,j})^T lambda on fixed
      // coordinates. Drop the most negative one, or stop.
      double worst = -1e-12 * scale;
      Index drop_row = -1, drop_fixed = -1;
      for (Index r = 0; r < t; ++r) {
        if (lambda(r) < worst) {
          worst = lambda(r);
          drop_row = r;
          drop_fixed = -1;
        }
      }
      for (Index j = 0; j < n; ++j) {
        if (!fixed[static_cast<std::size_t>(j)]) continue;
        double nu = 0.0;
        for (Index r = 0; r < t; ++r) nu -= lambda(r) * q(rows[static_cast<std::size_t>(r)], j);
        if (nu < worst) {
          worst = nu;
          drop_fixed = j;
          drop_row = -1;
        }
      }
      if (drop_row < 0 && drop_fixed < 0) {
        out.y = y;
        out.converged = true;
        return out;
      }
      if (drop_row >= 0) {
        in_rows[static_cast<std::size_t>(rows[static_cast<std::size_t>(drop_row)])] = false;
        rows.erase(rows.begin() + drop_row);
      } else {
        fixed[static_cast<std::size_t>(drop_fixed)] = false;
      }
      continue;
    }

    // Longest feasible step toward yhat.
    double alpha = 1.0;
    Index block_row = -1, block_var = -1;
    const VectorXd qp = q * p;
    const VectorXd qy = q * y;
    for (Index i = 0; i < nrows; ++i) {
      if (in_rows[static_cast<std::size_t>(i)] || !(qp(i) < -1e-14 * scale)) continue;
      const double a = std::max(0.0, qy(i) - 1.0) / -qp(i);
      if (a < alpha) {
        alpha = a;
        block_row = i;
        block_var = -1;
      }
    }
    for (Index j = 0; j < n; ++j) {
      if (fixed[static_cast<std::size_t>(j)] || !(p(j) < 0.0)) continue;
      const double a = std::max(0.0, y(j)) / -p(j);
      if (a < alpha) {
        alpha = a;
        block_var = j;
        block_row = -1;
      }
    }
    y += alpha * p;
    if (block_row >= 0) {
      rows.push_back(block_row);
      in_rows[static_cast<std::size_t>(block_row)] = true;
    } else if (block_var >= 0) {
      y(block_var) = 0.0;
      fixed[static_cast<std::size_t>(block_var)] = true;
    }
  }
  out.y = y;
  return out;
}

// Best-effort maximum of min_i (Q y)_i over the unit sphere intersected with
// the orthant, by multi-start projected supergradient ascent.
VPrimeResult sphere_estimate(const MatrixXd& q, const VectorXd& game_y, const VPrimeOptions& opts) {
  const Index n = q.cols();
  auto project = [&](VectorXd y) {
    y = y.cwiseMax(0.0);
    const double nrm = y.norm();
    if (nrm > 0.0) return VectorXd(y / nrm);
    VectorXd e = VectorXd::Zero(n);
    e(0) = 1.0;
    return e;
  };
  auto value = [&](const VectorXd& y, Index* arg) { return (q * y).minCoeff(arg); };

  std::vector<VectorXd> starts;
  starts.push_back(VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n))));
  Index best_col = 0;
  q.colwise().minCoeff().maxCoeff(&best_col);
  starts.push_back(VectorXd::Unit(n, best_col));
  if (game_y.size() == n && game_y.norm() > 0.0) starts.push_back(project(game_y));
  StreamRng rng(opts.seed);
  for (std::size_t s = 0; s < opts.sphere_random_starts; ++s) {
    VectorXd y(n);
    for (Index j = 0; j < n; ++j) y(j) = std::abs(rng.gaussian());
    starts.push_back(project(y));
  }

  VPrimeResult best;
  best.flag = VPrimeFlag::Nonpositive;
  best.value = -std::numeric_limits<double>::infinity();
  const std::size_t iters = opts.sphere_iterations;
  const double ratio = iters > 1 ? std::pow(1e-5 / 0.5, 1.0 / static_cast<double>(iters - 1)) : 1.0;
  for (VectorXd y : starts) {
    double step = 0.5;
    Index arg = 0;
    double val = value(y, &arg);
    for (std::size_t k = 0; k <= iters; ++k) {
      if (val > best.value) {
        best.value = val;
        best.y.assign(y.data(), y.data() + n);
      }
      if (k == iters) break;
      const VectorXd dir = q.row(arg).transpose();
      const double dn = dir.norm();
      if (!(dn > 0.0)) break;
      y = project(y + step * dir / dn);
      val = value(y, &arg);
      step *= ratio;
    }
    best.iterations += iters;
  }
  return best;
}

}  // namespace

const char* to_string(VPrimeFlag flag) {
  switch (flag) {
    case VPrimeFlag::Certified: return "certified";
    case VPrimeFlag::Nonpositive: return "nonpositive";
    case VPrimeFlag::Failed: return "failed";
  }
  return "unknown";
}

const char* to_string(Intersection r) {
  switch (r) {
    case Intersection::Intersects: return "intersects";
    case Intersection::Disjoint: return "disjoint";
    case Intersection::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

VPrimeResult v_prime(const Matrix& qm, const VPrimeOptions& opts) {
  if (qm.empty() || qm.rows() != qm.cols()) throw std::invalid_argument("v_prime: Q must be square and non-empty");
  const auto sol = solver::solve_game(qm, opts.game);
  const Index n = static_cast<Index>(qm.cols());
  const MatrixXd q = qm.eigen();
  VectorXd game_y = VectorXd::Zero(n);
  for (Index j = 0; j < n; ++j) game_y(j) = sol.y.empty() ? 0.0 : sol.y[static_cast<std::size_t>(j)];

  if (!sol.ok()) {
    VPrimeResult r;
    r.flag = VPrimeFlag::Failed;
    r.value = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  if (!(sol.value > 1e-12)) return sphere_estimate(q, game_y, opts);

  // Feasible start: the game strategy scaled so that min (Q y) = 1.
  const double slack = (q * game_y).minCoeff();
  const VectorXd y0 = game_y / slack;
  const std::size_t max_it = opts.max_iterations ? opts.max_iterations : 20 * static_cast<std::size_t>(n) + 100;

  std::vector<Index> warm_rows(sol.support_rows.begin(), sol.support_rows.end());
  std::vector<bool> warm_fixed(static_cast<std::size_t>(n), true);
  for (std::size_t j : sol.support_cols) warm_fixed[j] = false;
  QpOutcome qp = min_norm_qp(q, y0, warm_rows, warm_fixed, max_it);
  if (qp.singular) {
    const auto it = qp.iterations;
    qp = min_norm_qp(q, y0, {}, std::vector<bool>(static_cast<std::size_t>(n), false), max_it);
    qp.iterations += it;
  }

  VPrimeResult r;
  r.iterations = qp.iterations;
  const double nrm = qp.y.norm();
  r.value = 1.0 / nrm;
  r.flag = qp.converged ? VPrimeFlag::Certified : VPrimeFlag::Failed;
  r.y.resize(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) r.y[static_cast<std::size_t>(j)] = std::max(0.0, qp.y(j)) / nrm;
  return r;
}

Intersection intersection_test(const Matrix& q, double epsilon, const VPrimeOptions& opts) {
  if (q.empty() || q.rows() != q.cols()) throw std::invalid_argument("intersection_test: Q must be square");
  const ConeSpec spec{epsilon, q.rows()};
  spec.validate();
  if (!(epsilon > 0.0)) throw std::invalid_argument("intersection_test: epsilon must be > 0");
  const VPrimeResult r = v_prime(q, opts);
  switch (r.flag) {
    case VPrimeFlag::Nonpositive: return Intersection::Disjoint;
    case VPrimeFlag::Certified:
      return r.value >= epsilon * (1.0 - 1e-12) ? Intersection::Intersects : Intersection::Disjoint;
    case VPrimeFlag::Failed:
      // A failed solve still ends at a feasible point, so its value is a
      // lower bound on v'(Q).
      if (std::isnan(r.value) || std::abs(r.value - epsilon) <= 1e-6) return Intersection::Indeterminate;
      return r.value > epsilon ? Intersection::Intersects : Intersection::Indeterminate;
  }
  return Intersection::Indeterminate;
}

std::vector<TailRow> vprime_tail_experiment(std::size_t n, std::size_t batch, std::span<const double> ts,
                                            RandomSeed seed, const VPrimeOptions& opts, Execution exec) {
  if (n == 0 || batch == 0) throw std::invalid_argument("vprime_tail_experiment: empty input");
  const auto results = map_trials(
      batch,
      [&](std::size_t i) {
        const RandomSeed s = derive_stream(seed, i);
        const Matrix q = ensembles::sample_haar_orthogonal(n, derive_stream(s, 0));
        VPrimeOptions o = opts;
        o.seed = derive_stream(s, 1);
        return v_prime(q, o);
      },
      exec);
  std::vector<TailRow> rows;
  for (double t : ts) {
    TailRow row;
    row.t = t;
    row.bound = 4.0 * std::exp(-t * t / 32.0);
    const double eps = t / static_cast<double>(n);
    std::size_t hits = 0;
    for (const auto& r : results) {
      if (r.flag == VPrimeFlag::Failed && (std::isnan(r.value) || r.value <= eps)) {
        ++row.indeterminate;
        continue;
      }
      if (r.flag != VPrimeFlag::Nonpositive && r.value >= eps * (1.0 - 1e-12)) ++hits;
    }
    row.frequency = static_cast<double>(hits) / static_cast<double>(batch);
    row.stderr_freq = stats::binomial_stderr(row.frequency, batch);
    rows.push_back(row);
  }
  return rows;
}

StrategyNormReport strategy_norm_experiment(std::size_t n, std::size_t batch, RandomSeed seed,
                                            const solver::SolveOptions& opts, Execution exec) {
  if (n == 0) throw std::invalid_argument("strategy_norm_experiment: n must be positive");
  if (batch < 100) throw std::invalid_argument("strategy_norm_experiment: batch must be >= 100");
  const auto trials = trials::run_game_batch(ensembles::EnsembleSpec::haar(), n, n, batch, seed, 0, opts, exec);
  StrategyNormReport rep;
  rep.n = n;
  rep.batch = batch;
  std::vector<double> norms, fracs;
  std::size_t small = 0;
  const double sn = std::sqrt(static_cast<double>(n));
  for (const auto& t : trials) {
    if (t.failed) {
      ++rep.failures;
      continue;
    }
    norms.push_back(sn * t.y_norm2);
    fracs.push_back(static_cast<double>(t.support_size) / static_cast<double>(n));
    if (static_cast<double>(t.support_size) <= static_cast<double>(n) / 20.0) ++small;
  }
  if (norms.empty()) throw std::runtime_error("strategy_norm_experiment: every solve failed");
  std::sort(norms.begin(), norms.end());
  std::sort(fracs.begin(), fracs.end());
  rep.scaled_norm_min = norms.front();
  rep.scaled_norm_max = norms.back();
  rep.scaled_norm_q25 = stats::quantile_sorted(norms, 0.25);
  rep.scaled_norm_median = stats::quantile_sorted(norms, 0.5);
  rep.scaled_norm_q75 = stats::quantile_sorted(norms, 0.75);
  rep.support_fraction_q25 = stats::quantile_sorted(fracs, 0.25);
  rep.support_fraction_median = stats::quantile_sorted(fracs, 0.5);
  rep.support_fraction_q75 = stats::quantile_sorted(fracs, 0.75);
  rep.small_support_frequency = static_cast<double>(small) / static_cast<double>(norms.size());
  return rep;
}

}  // namespace randgame::cones
