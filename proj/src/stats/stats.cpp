#include "randgame/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace randgame::stats {

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw std::invalid_argument("quantile probability outside [0, 1]");
  const double h = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double SummaryStats::stddev() const { return std::sqrt(variance); }

double SummaryStats::stderr_stddev() const {
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  return stddev() / std::sqrt(2.0 * static_cast<double>(count - 1));
}

SummaryStats summarize(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("summarize needs at least two samples");
  SummaryStats s;
  s.count = samples.size();
  const double n = static_cast<double>(s.count);
  s.mean = compensated_sum(samples) / n;
  std::vector<double> dev(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = samples[i] - s.mean;
    dev[i] = d * d;
  }
  s.variance = compensated_sum(dev) / (n - 1.0);
  s.stderr_mean = std::sqrt(s.variance / n);

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  s.quantiles.q01 = quantile_sorted(sorted, 0.01);
  s.quantiles.q25 = quantile_sorted(sorted, 0.25);
  s.quantiles.q50 = quantile_sorted(sorted, 0.50);
  s.quantiles.q75 = quantile_sorted(sorted, 0.75);
  s.quantiles.q99 = quantile_sorted(sorted, 0.99);
  return s;
}

SlopeFit fit_log_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("slope fit needs at least three points");
  std::vector<double> lx, ly;
  for (auto [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("slope fit needs positive data");
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  const double k = static_cast<double>(points.size());
  const double mx = compensated_sum(lx) / k;
  const double my = compensated_sum(ly) / k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("slope fit needs distinct sizes");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (f.intercept + f.slope * lx[i]);
    ssr += r * r;
  }
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  return f;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("KS test of empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS test of empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

namespace {
double ks_c(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  return std::sqrt(-0.5 * std::log(alpha / 2.0));
}
}  // namespace

double ks_critical_value(std::size_t n, double alpha) {
  return ks_c(alpha) / std::sqrt(static_cast<double>(n));
}

double ks_two_sample_critical_value(std::size_t n, std::size_t m, double alpha) {
  const double a = static_cast<double>(n), b = static_cast<double>(m);
  return ks_c(alpha) * std::sqrt((a + b) / (a * b));
}

double binomial_stderr(double p, std::size_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

// ---------------------------------------------------------------------------

double log_binomial_half_pmf(std::size_t trials, std::size_t k) {
  if (k > trials) return -std::numeric_limits<double>::infinity();
  const double t = static_cast<double>(trials), kk = static_cast<double>(k);
  return std::lgamma(t + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(t - kk + 1.0) -
         t * std::numbers::ln2;
}

// Weights relative to the central term, built outward with exact ratios so
// that the normalizing constant cancels; this keeps the CDF accurate to a few
// ulps of 1 for the sizes we care about, where lgamma alone would not.
double binomial_half_cdf(std::size_t trials, std::size_t k) {
  if (k >= trials) return 1.0;
  const std::size_t mode = trials / 2;
  const double tiny = 1e-300;
  std::vector<double> w(trials + 1, 0.0);
  w[mode] = 1.0;
  for (std::size_t i = mode; i < trials; ++i) {
    w[i + 1] = w[i] * static_cast<double>(trials - i) / static_cast<double>(i + 1);
    if (w[i + 1] < tiny) break;
  }
  for (std::size_t i = mode; i > 0; --i) {
    w[i - 1] = w[i] * static_cast<double>(i) / static_cast<double>(trials - i + 1);
    if (w[i - 1] < tiny) break;
  }
  std::vector<double> lower(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k) + 1);
  std::vector<double> upper(w.begin() + static_cast<std::ptrdiff_t>(k) + 1, w.end());
  const double lo = compensated_sum(lower);
  const double hi = compensated_sum(upper);
  return lo <= hi ? lo / (lo + hi) : 1.0 - hi / (lo + hi);
}

double cover_sign_probability(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw std::invalid_argument("game dimensions must be positive");
  return binomial_half_cdf(n + m - 1, m);
}

double naive_tail_bound(std::size_t n, std::size_t m, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("tail bound needs t >= 0");
  return static_cast<double>(m) * std::exp(-static_cast<double>(n) * t * t / 2.0);
}

double variance_lower_bound(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw std::invalid_argument("game dimensions must be positive");
  return 1.0 / (static_cast<double>(n) * static_cast<double>(m));
}

double chi_mean(std::size_t n) {
  if (n == 0) throw std::invalid_argument("chi_mean needs n >= 1");
  const double h = static_cast<double>(n) / 2.0;
  return std::numbers::sqrt2 * std::exp(std::lgamma(h + 0.5) - std::lgamma(h));
}

std::pair<double, double> gplus_norm_bounds(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gplus_norm_bounds needs n >= 1");
  const double d = static_cast<double>(n);
  return {std::max(0.0, std::sqrt(d / 2.0) - 3.0 / std::sqrt(d)), std::sqrt(d / 2.0)};
}

// ---------------------------------------------------------------------------

SupportReport binomial_support_compare(std::span<const std::size_t> support_sizes, std::size_t n) {
  if (support_sizes.size() < 100) throw std::invalid_argument("support comparison needs >= 100 samples");
  if (n == 0) throw std::invalid_argument("n must be positive");
  SupportReport r;
  r.n = n;
  r.samples = support_sizes.size();
  const double count = static_cast<double>(r.samples);
  std::vector<double> hist(n + 1, 0.0);
  std::vector<double> as_double;
  std::size_t outside = 0;
  for (std::size_t k : support_sizes) {
    if (k > n) throw std::invalid_argument("support size exceeds n");
    hist[k] += 1.0;
    as_double.push_back(static_cast<double>(k));
    const double kd = static_cast<double>(k);
    if (kd < 0.1 * static_cast<double>(n) || kd > 0.9 * static_cast<double>(n)) ++outside;
  }
  const SummaryStats s = summarize(as_double);
  r.mean = s.mean;
  r.variance = s.variance;
  r.expected_mean = static_cast<double>(n) / 2.0;
  r.expected_variance = static_cast<double>(n) / 4.0;
  double tv = 0.0;
  for (std::size_t k = 0; k <= n; ++k)
    tv += std::abs(hist[k] / count - std::exp(log_binomial_half_pmf(n, k)));
  r.tv_distance = tv / 2.0;
  r.outside_fraction = static_cast<double>(outside) / count;
  r.close_to_binomial = r.tv_distance <= 0.1;
  return r;
}

std::size_t rectangular_columns(std::size_t n, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  return n + static_cast<std::size_t>(std::ceil(lambda * std::sqrt(static_cast<double>(n))));
}

RectangularReport assemble_rectangular(std::vector<RectangularRow> rows) {
  RectangularReport report;
  for (auto& row : rows) {
    const double gap = std::sqrt(static_cast<double>(row.m)) - std::sqrt(static_cast<double>(row.n));
    row.normalized_mean = row.m == row.n ? std::numeric_limits<double>::quiet_NaN()
                                         : row.value.mean * static_cast<double>(row.n) / gap;
  }
  report.rows = std::move(rows);
  report.strictly_increasing = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& a = report.rows[i - 1].value;
    const auto& b = report.rows[i].value;
    const double se = std::hypot(a.stderr_mean, b.stderr_mean);
    if (!(b.mean - a.mean > se)) report.strictly_increasing = false;
  }
  return report;
}

RectangularReport rectangular_expectation_check(std::size_t n, std::span<const double> lambdas,
                                                std::size_t batch, RandomSeed seed,
                                                const solver::SolveOptions& opts, Execution exec) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (lambdas.empty()) throw std::invalid_argument("empty lambda grid");
  if (batch < 2) throw std::invalid_argument("batch must be >= 2");
  std::vector<RectangularRow> rows;
  const auto spec = ensembles::EnsembleSpec::gaussian();
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    RectangularRow row;
    row.lambda = lambdas[li];
    row.n = n;
    row.m = rectangular_columns(n, row.lambda);
    const auto trials =
        trials::run_game_batch(spec, n, row.m, batch, derive_stream(seed, li), 0, opts, exec);
    row.failures = trials::failures_in(trials);
    row.value = summarize(trials::values_of(trials));
    rows.push_back(row);
  }
  return assemble_rectangular(std::move(rows));
}

std::vector<CoverRow> cover_adjudication(std::span<const std::pair<std::size_t, std::size_t>> sizes,
                                         std::size_t batch, RandomSeed seed,
                                         const solver::SolveOptions& opts, Execution exec) {
  if (batch == 0) throw std::invalid_argument("batch must be positive");
  std::vector<CoverRow> rows;
  const auto spec = ensembles::EnsembleSpec::gaussian();
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    CoverRow row;
    row.n = sizes[si].first;
    row.m = sizes[si].second;
    row.formula = cover_sign_probability(row.n, row.m);
    const auto trials =
        trials::run_game_batch(spec, row.n, row.m, batch, derive_stream(seed, si), 0, opts, exec);
    std::size_t positive = 0, used = 0;
    for (const auto& t : trials) {
      if (t.failed) continue;
      ++used;
      if (t.value > 0.0) ++positive;
    }
    if (used == 0) throw std::runtime_error("every solve failed in cover adjudication");
    row.mc_frequency = static_cast<double>(positive) / static_cast<double>(used);
    // Floor keeps the z-score finite when the frequency is 0 or 1.
    row.stderr_mc = std::max(binomial_stderr(row.mc_frequency, used), 1.0 / static_cast<double>(used));
    row.z_score = (row.mc_frequency - row.formula) / row.stderr_mc;
    row.within_3se = std::abs(row.z_score) <= 3.0;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const SummaryStats& s) {
  return {{"count", s.count},
          {"mean", s.mean},
          {"variance", s.variance},
          {"stddev", s.stddev()},
          {"stderr_mean", s.stderr_mean},
          {"quantiles",
           {{"q01", s.quantiles.q01},
            {"q25", s.quantiles.q25},
            {"q50", s.quantiles.q50},
            {"q75", s.quantiles.q75},
            {"q99", s.quantiles.q99}}}};
}

nlohmann::json to_json(const SlopeFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}};
}

nlohmann::json to_json(const SupportReport& r) {
  return {{"n", r.n},
          {"samples", r.samples},
          {"mean", r.mean},
          {"variance", r.variance},
          {"expected_mean", r.expected_mean},
          {"expected_variance", r.expected_variance},
          {"tv_distance", r.tv_distance},
          {"outside_fraction", r.outside_fraction},
          {"close_to_binomial", r.close_to_binomial}};
}

nlohmann::json to_json(const RectangularReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json j = {{"lambda", row.lambda},
                        {"n", row.n},
                        {"m", row.m},
                        {"value", to_json(row.value)},
                        {"failures", row.failures}};
    j["normalized_mean"] = std::isnan(row.normalized_mean) ? nlohmann::json(nullptr)
                                                           : nlohmann::json(row.normalized_mean);
    rows.push_back(j);
  }
  return {{"rows", rows}, {"strictly_increasing", r.strictly_increasing}};
}

nlohmann::json to_json(const std::vector<CoverRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows)
    out.push_back({{"n", r.n},
                   {"m", r.m},
                   {"formula", r.formula},
                   {"mc_frequency", r.mc_frequency},
                   {"stderr_mc", r.stderr_mc},
                   {"z_score", r.z_score},
                   {"within_3se", r.within_3se}});
  return out;
}

}  // namespace randgame::stats
