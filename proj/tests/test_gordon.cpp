#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "randgame/ensembles.hpp"
#include "randgame/gordon.hpp"
#include "randgame/rng.hpp"

using namespace randgame;
using namespace randgame::gordon;

namespace {

using Vec = std::vector<double>;

double norm(const Vec& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dotp(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Independent oracle: plain bisection on the norm map.
double bisect_mu(const Vec& h, double gamma) {
  double lo = *std::min_element(h.begin(), h.end()) - gamma;
  double hi = *std::max_element(h.begin(), h.end());
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double s = 0;
    for (double x : h) s += std::pow(std::max(x - mid, 0.0), 2);
    (std::sqrt(s) > gamma ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Vec gauss(std::size_t n, std::uint64_t a, std::uint64_t b) {
  return ensembles::sample_gaussian_vector(n, derive_stream({a, 0}, b));
}

Vec random_simplex_point(StreamRng& r, std::size_t n) {
  Vec u(n);
  double s = 0;
  for (double& x : u) s += (x = r.exponential());
  for (double& x : u) x /= s;
  return u;
}

// Brute-force max over the 4-simplex on a lattice with spacing 1/steps.
double grid_inner_max_4(const Vec& u, const Vec& g, const Vec& h, int steps) {
  const double a = dotp(g, u), b = norm(u);
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; i + j <= steps; ++j)
      for (int k = 0; i + j + k <= steps; ++k) {
        const int l = steps - i - j - k;
        const double v0 = double(i) / steps, v1 = double(j) / steps, v2 = double(k) / steps,
                     v3 = double(l) / steps;
        const double vn = std::sqrt(v0 * v0 + v1 * v1 + v2 * v2 + v3 * v3);
        const double hv = h[0] * v0 + h[1] * v1 + h[2] * v2 + h[3] * v3;
        best = std::max(best, vn * a + b * hv);
      }
  return best;
}

}  // namespace

TEST_CASE("water-filling level") {
  CHECK(water_fill_mu(Vec{2, 0}, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(water_fill_mu(Vec{5}, 2.0) == doctest::Approx(3.0).epsilon(1e-14));
  for (std::size_t m : {1u, 3u, 10u, 100u}) {
    const double c = 0.7, gamma = 1.3;
    CHECK(water_fill_mu(Vec(m, c), gamma) == doctest::Approx(c - gamma / std::sqrt(double(m))).epsilon(1e-13));
  }
  SUBCASE("agrees with bisection and solves the norm equation") {
    StreamRng r({700, 0});
    for (std::uint64_t s = 0; s < 200; ++s) {
      const std::size_t m = 1 + static_cast<std::size_t>(r.uniform() * 40);
      const Vec h = gauss(m, 701, s);
      const double gamma = 0.01 + 5 * r.uniform();
      const double mu = water_fill_mu(h, gamma);
      CHECK(mu == doctest::Approx(bisect_mu(h, gamma)).epsilon(1e-10));
      double sq = 0;
      for (double x : h) sq += std::pow(std::max(x - mu, 0.0), 2);
      CHECK(std::sqrt(sq) == doctest::Approx(gamma).epsilon(1e-10));
    }
  }
  SUBCASE("strictly decreasing in gamma") {
    const Vec h = gauss(30, 702, 0);
    double prev = water_fill_mu(h, 0.01);
    for (double gamma = 0.02; gamma < 10; gamma *= 1.3) {
      const double mu = water_fill_mu(h, gamma);
      CHECK(mu < prev);
      prev = mu;
    }
  }
  SUBCASE("ties") {
    CHECK(water_fill_mu(Vec{1, 1, 0}, std::sqrt(2.0)) == doctest::Approx(0.0).scale(1).epsilon(1e-14));
  }
  CHECK_THROWS_AS(water_fill_mu(Vec{1, 2}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(water_fill_mu(Vec{1, 2}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(water_fill_mu(Vec{}, 1.0), std::invalid_argument);
}

TEST_CASE("solve_R") {
  SUBCASE("h = (2,0), gamma = 1") {
    const auto r = solve_R(Vec{2, 0}, 1.0);
    CHECK(r.maximizer[0] == doctest::Approx(1.0));
    CHECK(r.maximizer[1] == doctest::Approx(0.0));
    CHECK(r.objective == doctest::Approx(1.0));
  }
  SUBCASE("grid oracle on the 2-simplex") {
    StreamRng r({710, 0});
    for (int rep = 0; rep < 20; ++rep) {
      const Vec h = gauss(2, 711, rep);
      const double gamma = 0.05 + 3 * r.uniform();
      double best = -1e300;
      for (int i = 0; i <= 10000; ++i) {
        const double v0 = i * 1e-4;
        best = std::max(best, h[0] * v0 + h[1] * (1 - v0) - gamma * std::hypot(v0, 1 - v0));
      }
      CHECK(std::abs(solve_R(h, gamma).objective - best) <= 1e-3);
    }
  }
  SUBCASE("symmetric case") {
    for (std::size_t m : {1u, 4u, 25u}) {
      const auto r = solve_R(Vec(m, 0.0), std::sqrt(double(m)));
      for (double v : r.maximizer) CHECK(v == doctest::Approx(1.0 / m));
      CHECK(r.objective == doctest::Approx(-1.0));
    }
  }
  SUBCASE("beats vertices and random points") {
    StreamRng r({720, 0});
    for (std::uint64_t s = 0; s < 30; ++s) {
      const std::size_t m = 1 + static_cast<std::size_t>(r.uniform() * 12);
      const Vec h = gauss(m, 721, s);
      const double gamma = 0.1 + 4 * r.uniform();
      const auto res = solve_R(h, gamma);
      CHECK(res.objective >= *std::max_element(h.begin(), h.end()) - gamma - 1e-12);
      double sq = 0;
      for (double x : h) sq += std::pow(std::max(x - res.mu, 0.0), 2);
      CHECK(std::sqrt(sq) == doctest::Approx(gamma).epsilon(1e-10));
      for (int k = 0; k < 1000; ++k) {
        const Vec w = random_simplex_point(r, m);
        CHECK(res.objective >= dotp(h, w) - gamma * norm(w) - 1e-12);
      }
    }
  }
}

TEST_CASE("lower bound") {
  SUBCASE("g = 0") {
    const Vec h{1.5, -0.3, 0.7, 2.0};
    for (std::size_t n : {1u, 3u, 9u}) {
      const double hn = std::sqrt(1.5 * 1.5 + 0.7 * 0.7 + 4.0), hs = 4.2;
      CHECK(phi2_lower_bound(Vec(n, 0.0), h) == doctest::Approx(hn * hn / (hs * std::sqrt(double(n)))));
    }
  }
  SUBCASE("n = 1") {
    const Vec h{0.4, 1.1, -2.0};
    const double hn = std::hypot(0.4, 1.1), hs = 1.5;
    for (double g1 : {-3.0, -0.2, 0.0, 1.7})
      CHECK(phi2_lower_bound(Vec{g1}, h) == doctest::Approx(hn / hs * (g1 + hn)));
  }
  CHECK_THROWS_AS(phi2_lower_bound(Vec{1, -1}, Vec{-1, 0}), std::domain_error);
}

TEST_CASE("upper bound") {
  SUBCASE("h = 0") {
    const Vec g{-1.0, 0.5, -2.0};
    const double gn = std::hypot(1.0, 2.0), gs = 3.0;
    for (std::size_t m : {1u, 2u, 16u})
      CHECK(phi2_upper_bound(g, Vec(m, 0.0)) == doctest::Approx(gn / gs * (-gn / std::sqrt(double(m)))));
  }
  SUBCASE("m = 1") {
    const Vec g{-0.5, -1.5, 2.0};
    const double gn = std::hypot(0.5, 1.5), gs = 2.0;
    for (double h1 : {-1.0, 0.0, 2.5}) CHECK(phi2_upper_bound(g, Vec{h1}) == doctest::Approx(gn / gs * (h1 - gn)));
  }
  SUBCASE("lower <= upper when ||h+|| >= ||g-||") {
    std::size_t checked = 0;
    for (std::uint64_t s = 0; s < 300; ++s) {
      const Vec g = gauss(6, 730, s), h = gauss(6, 731, s);
      Vec gm(6), hp(6);
      for (int i = 0; i < 6; ++i) {
        gm[i] = std::max(-g[i], 0.0);
        hp[i] = std::max(h[i], 0.0);
      }
      if (norm(gm) == 0 || norm(hp) == 0 || norm(hp) < norm(gm)) continue;
      ++checked;
      CHECK(phi2_lower_bound(g, h) <= phi2_upper_bound(g, h) + 1e-12);
    }
    CHECK(checked > 50);
  }
  CHECK_THROWS_AS(phi2_upper_bound(Vec{1, 0}, Vec{1, 2}), std::domain_error);
}

TEST_CASE("inner_max") {
  SUBCASE("non-negative g^T u hits a vertex") {
    const Vec g{1.0, 2.0, -0.5}, h{0.3, -1.0, 0.9, 0.1};
    const Vec u{0.2, 0.5, 0.3};
    CHECK(inner_max(u, g, h) == doctest::Approx(dotp(g, u) + norm(u) * 0.9));
  }
  SUBCASE("at g-/1^T g- it equals the upper bound") {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const Vec g = gauss(7, 740, s), h = gauss(5, 741, s);
      Vec u(7);
      double t = 0;
      for (int i = 0; i < 7; ++i) t += (u[i] = std::max(-g[i], 0.0));
      if (t == 0) continue;
      for (double& x : u) x /= t;
      CHECK(inner_max(u, g, h) == doctest::Approx(phi2_upper_bound(g, h)).epsilon(1e-12));
    }
  }
  SUBCASE("grid oracle, n = m = 4") {
    StreamRng r({742, 0});
    for (int rep = 0; rep < 3; ++rep) {
      const Vec g = gauss(4, 743, rep), h = gauss(4, 744, rep);
      const Vec u = random_simplex_point(r, 4);
      const double exact = inner_max(u, g, h);
      const double grid = grid_inner_max_4(u, g, h, 1000);
      CHECK(exact >= grid - 1e-12);
      CHECK(exact - grid <= 1e-3);
    }
  }
  CHECK_THROWS_AS(inner_max(Vec{0.5, 0.6}, Vec{1, 1}, Vec{1}), std::invalid_argument);
  CHECK_THROWS_AS(inner_max(Vec{1.5, -0.5}, Vec{1, 1}, Vec{1}), std::invalid_argument);
  CHECK_THROWS_AS(inner_max(Vec{1.0}, Vec{1, 1}, Vec{1}), std::invalid_argument);
}

TEST_CASE("simplex projection") {
  StreamRng r({750, 0});
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(r.uniform() * 10);
    Vec x(n);
    for (double& e : x) e = 3 * r.gaussian();
    const Vec p = project_simplex(x);
    double s = 0;
    for (double e : p) {
      CHECK(e >= 0);
      s += e;
    }
    CHECK(s == doctest::Approx(1.0));
    // Optimality: <x - p, w - p> <= 0 for any simplex point w.
    for (int k = 0; k < 20; ++k) {
      const Vec w = random_simplex_point(r, n);
      double ip = 0;
      for (std::size_t i = 0; i < n; ++i) ip += (x[i] - p[i]) * (w[i] - p[i]);
      CHECK(ip <= 1e-10);
    }
  }
}

TEST_CASE("phi2 estimate") {
  SUBCASE("n = 1 is exact") {
    const Vec g{-0.8}, h{0.5, 1.2, -0.1};
    CHECK(phi2_estimate(g, h) == doctest::Approx(inner_max(Vec{1.0}, g, h)));
  }
  SUBCASE("sandwich on 200 random pairs, n = m = 8") {
    for (std::uint64_t s = 0; s < 200; ++s) {
      const Vec g = gauss(8, 760, s), h = gauss(8, 761, s);
      const bool defined = std::any_of(g.begin(), g.end(), [](double x) { return x < 0; }) &&
                           std::any_of(h.begin(), h.end(), [](double x) { return x > 0; });
      if (!defined) {
        CHECK_THROWS_AS(gordon_bounds(g, h), std::domain_error);
        continue;
      }
      const auto b = gordon_bounds(g, h);
      CHECK(b.lower - 1e-8 <= b.estimate);
      CHECK(b.estimate <= b.upper + 1e-8);
    }
  }
  SUBCASE("n = m = 2 against an outer grid") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Vec g = gauss(2, 762, s), h = gauss(2, 763, s);
      double best = 1e300;
      for (int i = 0; i <= 1000; ++i) best = std::min(best, inner_max(Vec{i * 1e-3, 1 - i * 1e-3}, g, h));
      CHECK(std::abs(phi2_estimate(g, h) - best) <= 1e-2);
    }
  }
  SUBCASE("deterministic") {
    const Vec g = gauss(12, 764, 0), h = gauss(9, 765, 0);
    CHECK(phi2_estimate(g, h) == phi2_estimate(g, h));
  }
}

TEST_CASE("concentration facts at n = m = 200") {
  const auto f = concentration_statistics(200, 200, 500, {770, 0});
  CHECK(f.gminus_norm_le_sqrt_n >= 0.98);
  CHECK(f.gminus_sum_ge_quarter_n >= 0.98);
  CHECK(f.c_mu_ge_m_over_20 >= 0.98);
  CHECK(f.hplus_norm_ge_half_sqrt_m >= 0.98);
  CHECK(f.hplus_sum_le_half_m >= 0.98);
  CHECK(f.c_prime_le_sqrt2_n >= 0.98);
  CHECK(f.worst() >= 0.98);
  CHECK(f.resamples == 0);
}

TEST_CASE("comparison experiment") {
  SUBCASE("sentinels and t = 0 at n = m = 20") {
    const double inf = std::numeric_limits<double>::infinity();
    const Vec grid{-inf, 0.0, inf};
    const auto res = gordon_comparison_experiment(20, 20, 2000, grid, {780, 0});
    REQUIRE(res.rows.size() == 3);
    CHECK(res.rows[0].p_v_le_t == 0.0);
    CHECK(res.rows[0].p_2phi_le_t == 0.0);
    CHECK(res.rows[2].p_v_le_t == 1.0);
    CHECK(res.rows[2].p_2phi_le_t == 1.0);
    CHECK(res.rows[0].p_v_ge_t == 1.0);
    CHECK(res.rows[2].p_v_ge_t == 0.0);
    CHECK(res.rows[2].p_2phi_ge_t == 0.0);
    const auto& mid = res.rows[1];
    CHECK(std::abs(mid.p_v_le_t - 0.5) <= 3 * mid.se_v);
    CHECK(mid.p_2phi_le_t >= 0.5 - 3 * mid.se_phi);
    CHECK(res.sandwich_violations == 0);
    CHECK(res.solver_failures == 0);
  }
  SUBCASE("csv layout") {
    const auto res = gordon_comparison_experiment(4, 5, 100, default_t_grid(4), {781, 0});
    const std::string csv = comparison_csv(res.rows);
    CHECK(csv.rfind("t,p_v_le_t,se_v,p_2phi_le_t,se_phi,p_v_ge_t,p_2phi_ge_t\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 22);
  }
  SUBCASE("serial and parallel agree") {
    const auto grid = default_t_grid(6);
    const auto a = gordon_comparison_experiment(6, 6, 120, grid, {782, 0}, {}, {}, Execution::serial());
    const auto b = gordon_comparison_experiment(6, 6, 120, grid, {782, 0}, {}, {}, Execution{4});
    CHECK(comparison_csv(a.rows) == comparison_csv(b.rows));
  }
  CHECK_THROWS_AS(gordon_comparison_experiment(4, 4, 99, default_t_grid(4), {}), std::invalid_argument);
}

TEST_CASE("default grid") {
  const auto t = default_t_grid(25);
  REQUIRE(t.size() == 21);
  CHECK(t.front() == doctest::Approx(-0.6));
  CHECK(t.back() == doctest::Approx(0.6));
  CHECK(t[10] == 0.0);
}
