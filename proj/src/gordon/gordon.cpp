#include "randgame/gordon.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "randgame/ensembles.hpp"
#include "randgame/matrix_io.hpp"

namespace randgame::gordon {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void require_finite(std::span<const double> v, const char* what) {
  if (v.empty()) throw std::invalid_argument(std::string(what) + " is empty");
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " has non-finite entries");
}

std::vector<double> positive_part(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i], 0.0);
  return out;
}

std::vector<double> negative_part(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(-v[i], 0.0);
  return out;
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Value of the inner problem plus what the outer subgradient needs from the
// maximizer v*: ||v*|| and h^T v*.
struct InnerEval {
  double value = 0.0;
  double v_norm = 0.0;
  double hv = 0.0;
};

InnerEval inner_eval(std::span<const double> u, std::span<const double> g, std::span<const double> h) {
  const double a = dot(g, u);
  const double b = norm2(u);
  InnerEval e;
  if (a >= 0.0) {
    // Convex in v, so a vertex wins; ||e_j|| = 1.
    const double hmax = *std::max_element(h.begin(), h.end());
    e.value = a + b * hmax;
    e.v_norm = 1.0;
    e.hv = hmax;
    return e;
  }
  const WaterFillingResult r = solve_R(h, -a / b);
  e.value = b * r.objective;
  e.v_norm = norm2(r.maximizer);
  e.hv = dot(h, r.maximizer);
  return e;
}

double descend(std::vector<double> u, std::span<const double> g, std::span<const double> h,
               const EstimateOptions& opts) {
  InnerEval cur = inner_eval(u, g, h);
  double best = cur.value;
  const std::size_t iters = opts.iterations;
  const double ratio = iters > 1 ? std::pow(opts.final_step / opts.initial_step, 1.0 / (iters - 1)) : 1.0;
  double step = opts.initial_step;
  std::vector<double> d(u.size());
  for (std::size_t k = 0; k < iters; ++k, step *= ratio) {
    const double un = norm2(u);
    for (std::size_t i = 0; i < u.size(); ++i) d[i] = cur.v_norm * g[i] + cur.hv * u[i] / un;
    const double dn = norm2(d);
    if (!(dn > 0.0)) break;
    for (std::size_t i = 0; i < u.size(); ++i) d[i] = u[i] - step * d[i] / dn;
    u = project_simplex(d);
    cur = inner_eval(u, g, h);
    best = std::min(best, cur.value);
  }
  return best;
}

struct GaussianPair {
  std::vector<double> g, h;
  std::size_t resamples = 0;
};

// Stream 0 of `trial` is left for the game matrix.
GaussianPair draw_pair(std::size_t n, std::size_t m, RandomSeed trial) {
  GaussianPair p;
  for (std::uint64_t attempt = 0;; ++attempt) {
    p.g = ensembles::sample_gaussian_vector(n, derive_stream(trial, 1 + 2 * attempt));
    p.h = ensembles::sample_gaussian_vector(m, derive_stream(trial, 2 + 2 * attempt));
    const bool g_ok = std::any_of(p.g.begin(), p.g.end(), [](double x) { return x < 0.0; });
    const bool h_ok = std::any_of(p.h.begin(), p.h.end(), [](double x) { return x > 0.0; });
    if (g_ok && h_ok) return p;
    ++p.resamples;
  }
}

double frac(std::size_t k, std::size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(total);
}

double binom_se(double p, std::size_t total) {
  return total == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(total));
}

}  // namespace

double water_fill_mu(std::span<const double> h, double gamma) {
  require_finite(h, "h");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("water_fill_mu: gamma must be > 0");
  std::vector<double> s(h.begin(), h.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  // With the top k coordinates active, mu = mean_k - sqrt((gamma^2 - V_k) / k)
  // where V_k is their centered sum of squares. The right k is the first one
  // whose level does not drop below the next coordinate.
  double mean = 0.0, var_sum = 0.0;
  const double g2 = gamma * gamma;
  for (std::size_t k = 1; k <= s.size(); ++k) {
    const double x = s[k - 1];
    const double delta = x - mean;
    mean += delta / static_cast<double>(k);
    var_sum += delta * (x - mean);
    const double kd = static_cast<double>(k);
    if (k < s.size()) {
      const double gap = mean - s[k];
      if (var_sum + kd * gap * gap < g2) continue;
    }
    const double mu = mean - std::sqrt(std::max(0.0, (g2 - var_sum) / kd));
    return k < s.size() ? std::clamp(mu, s[k], s[k - 1]) : std::min(mu, s[k - 1]);
  }
  return s.back() - gamma;  // unreachable
}

WaterFillingResult solve_R(std::span<const double> h, double gamma) {
  WaterFillingResult r;
  r.mu = water_fill_mu(h, gamma);
  r.maximizer.resize(h.size());
  double total = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    r.maximizer[j] = std::max(h[j] - r.mu, 0.0);
    total += r.maximizer[j];
  }
  if (!(total > 0.0)) throw std::domain_error("solve_R: water level leaves no active coordinate");
  for (double& v : r.maximizer) v /= total;
  r.objective = dot(h, r.maximizer) - gamma * norm2(r.maximizer);
  return r;
}

double phi2_lower_bound(std::span<const double> g, std::span<const double> h) {
  require_finite(g, "g");
  require_finite(h, "h");
  const auto hp = positive_part(h);
  const double hn = norm2(hp);
  if (!(hn > 0.0)) throw std::domain_error("phi2_lower_bound: h+ is zero");
  std::vector<double> neg_g(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) neg_g[i] = -g[i];
  return hn / sum(hp) * -solve_R(neg_g, hn).objective;
}

double phi2_upper_bound(std::span<const double> g, std::span<const double> h) {
  require_finite(g, "g");
  require_finite(h, "h");
  const auto gm = negative_part(g);
  const double gn = norm2(gm);
  if (!(gn > 0.0)) throw std::domain_error("phi2_upper_bound: g- is zero");
  return gn / sum(gm) * solve_R(h, gn).objective;
}

double inner_max(std::span<const double> u, std::span<const double> g, std::span<const double> h) {
  require_finite(g, "g");
  require_finite(h, "h");
  if (u.size() != g.size()) throw std::invalid_argument("inner_max: u and g differ in length");
  double total = 0.0;
  for (double x : u) {
    if (!(x >= -1e-9)) throw std::invalid_argument("inner_max: u has a negative entry");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("inner_max: u does not sum to 1");
  return inner_eval(u, g, h).value;
}

std::vector<double> project_simplex(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("project_simplex: empty vector");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  double run = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    run += s[k];
    const double t = (run - 1.0) / static_cast<double>(k + 1);
    if (s[k] - t > 0.0) theta = t;
  }
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::max(x[i] - theta, 0.0);
  return out;
}

double phi2_estimate(std::span<const double> g, std::span<const double> h, const EstimateOptions& opts) {
  require_finite(g, "g");
  require_finite(h, "h");
  const std::size_t n = g.size();
  if (n == 1) return inner_eval(std::vector<double>{1.0}, g, h).value;

  std::vector<std::vector<double>> starts;
  const auto gm = negative_part(g);
  const double gs = sum(gm);
  if (gs > 0.0) {
    std::vector<double> u(gm);
    for (double& x : u) x /= gs;
    starts.push_back(std::move(u));
  }
  starts.emplace_back(n, 1.0 / static_cast<double>(n));
  StreamRng rng(opts.seed);
  for (std::size_t s = 0; s < opts.random_starts; ++s) {
    std::vector<double> u(n);
    for (double& x : u) x = rng.exponential();
    const double t = sum(u);
    for (double& x : u) x /= t;
    starts.push_back(std::move(u));
  }
  double best = std::numeric_limits<double>::infinity();
  for (auto& u : starts) best = std::min(best, descend(std::move(u), g, h, opts));
  return best;
}

GordonBoundPair gordon_bounds(std::span<const double> g, std::span<const double> h,
                              const EstimateOptions& opts) {
  return {phi2_lower_bound(g, h), phi2_upper_bound(g, h), phi2_estimate(g, h, opts)};
}

// ---------------------------------------------------------------------------

double ConcentrationFacts::worst() const {
  return std::min({gminus_norm_le_sqrt_n, gminus_sum_ge_quarter_n, c_mu_ge_m_over_20,
                   hplus_norm_ge_half_sqrt_m, hplus_sum_le_half_m, c_prime_le_sqrt2_n});
}

ConcentrationFacts concentration_statistics(std::size_t n, std::size_t m, std::size_t batch,
                                            RandomSeed seed, Execution exec) {
  if (n == 0 || m == 0 || batch == 0) throw std::invalid_argument("concentration_statistics: empty input");
  struct Flags {
    bool f[6];
    std::size_t resamples;
  };
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  const auto results = map_trials(
      batch,
      [&](std::size_t i) {
        const GaussianPair p = draw_pair(n, m, derive_stream(seed, i));
        const auto gm = negative_part(p.g);
        const auto hp = positive_part(p.h);
        const double gn = norm2(gm), hn = norm2(hp);
        const double mu = water_fill_mu(p.h, gn);
        double c = 0.0;
        for (double x : p.h) c += std::max(x - mu, 0.0);
        std::vector<double> neg_g(n);
        for (std::size_t k = 0; k < n; ++k) neg_g[k] = -p.g[k];
        const double mu2 = water_fill_mu(neg_g, hn);
        double c2 = 0.0;
        for (double x : neg_g) c2 += std::max(x - mu2, 0.0);
        return Flags{{gn <= std::sqrt(dn), sum(gm) >= dn / 4.0, c >= dm / 20.0,
                      hn >= std::sqrt(dm) / 2.0, sum(hp) <= dm / 2.0, c2 <= std::sqrt(2.0) * dn},
                     p.resamples};
      },
      exec);
  std::size_t counts[6] = {};
  ConcentrationFacts out;
  out.n = n;
  out.m = m;
  out.batch = batch;
  for (const auto& r : results) {
    for (int k = 0; k < 6; ++k) counts[k] += r.f[k] ? 1 : 0;
    out.resamples += r.resamples;
  }
  out.gminus_norm_le_sqrt_n = frac(counts[0], batch);
  out.gminus_sum_ge_quarter_n = frac(counts[1], batch);
  out.c_mu_ge_m_over_20 = frac(counts[2], batch);
  out.hplus_norm_ge_half_sqrt_m = frac(counts[3], batch);
  out.hplus_sum_le_half_m = frac(counts[4], batch);
  out.c_prime_le_sqrt2_n = frac(counts[5], batch);
  return out;
}

std::vector<double> default_t_grid(std::size_t n) {
  if (n == 0) throw std::invalid_argument("default_t_grid: n must be positive");
  const double half = 3.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> t(21);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = -half + 2.0 * half * static_cast<double>(i) / 20.0;
  t[10] = 0.0;
  return t;
}

ComparisonResult gordon_comparison_experiment(std::size_t n, std::size_t m, std::size_t batch,
                                              std::span<const double> t_grid, RandomSeed seed,
                                              const solver::SolveOptions& solve_opts,
                                              const EstimateOptions& est_opts, Execution exec) {
  if (n == 0 || m == 0) throw std::invalid_argument("gordon comparison: dimensions must be positive");
  if (batch < 100) throw std::invalid_argument("gordon comparison: batch must be >= 100");
  for (double t : t_grid)
    if (std::isnan(t)) throw std::invalid_argument("gordon comparison: NaN in t grid");

  struct Trial {
    double value;
    GordonBoundPair bounds;
    std::size_t resamples;
  };
  const auto trials = map_trials(
      batch,
      [&](std::size_t i) {
        const RandomSeed ts = derive_stream(seed, i);
        const Matrix game = ensembles::sample_gaussian(n, m, derive_stream(ts, 0));
        const auto sol = solver::solve_game(game, solve_opts);
        const GaussianPair p = draw_pair(n, m, ts);
        EstimateOptions eo = est_opts;
        eo.seed = derive_stream(ts, 0xE5);
        return Trial{sol.ok() ? sol.value : std::numeric_limits<double>::quiet_NaN(),
                     gordon_bounds(p.g, p.h, eo), p.resamples};
      },
      exec);

  ComparisonResult out;
  out.n = n;
  out.m = m;
  out.batch = batch;
  for (const auto& t : trials) {
    out.values.push_back(t.value);
    out.bounds.push_back(t.bounds);
    out.resamples += t.resamples;
    if (std::isnan(t.value)) ++out.solver_failures;
    const auto& b = t.bounds;
    if (b.lower - 1e-8 > b.estimate || b.estimate > b.upper + 1e-8) ++out.sandwich_violations;
  }
  const std::size_t solved = batch - out.solver_failures;
  for (double t : t_grid) {
    std::size_t v_le = 0, v_ge = 0, lo_le = 0, est_ge = 0;
    for (const auto& tr : trials) {
      if (!std::isnan(tr.value)) {
        v_le += tr.value <= t ? 1 : 0;
        v_ge += tr.value >= t ? 1 : 0;
      }
      lo_le += tr.bounds.lower <= t ? 1 : 0;
      est_ge += tr.bounds.estimate >= t ? 1 : 0;
    }
    ComparisonRow row;
    row.t = t;
    row.p_v_le_t = frac(v_le, solved);
    row.se_v = binom_se(row.p_v_le_t, solved);
    const double pl = frac(lo_le, batch);
    row.p_2phi_le_t = std::min(1.0, 2.0 * pl);
    row.se_phi = 2.0 * binom_se(pl, batch);
    row.p_v_ge_t = frac(v_ge, solved);
    row.se_v_ge = binom_se(row.p_v_ge_t, solved);
    const double pe = frac(est_ge, batch);
    row.p_2phi_ge_t = std::min(1.0, 2.0 * pe);
    row.se_phi_ge = 2.0 * binom_se(pe, batch);
    out.rows.push_back(row);
  }
  return out;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << "t,p_v_le_t,se_v,p_2phi_le_t,se_phi,p_v_ge_t,p_2phi_ge_t\n";
  using io::format_double;
  for (const auto& r : rows) {
    os << format_double(r.t) << ',' << format_double(r.p_v_le_t) << ',' << format_double(r.se_v) << ','
       << format_double(r.p_2phi_le_t) << ',' << format_double(r.se_phi) << ','
       << format_double(r.p_v_ge_t) << ',' << format_double(r.p_2phi_ge_t) << '\n';
  }
  return os.str();
}

}  // namespace randgame::gordon
