#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "negdimcd/convexity.hpp"
#include "negdimcd/gradflow.hpp"

using namespace negdimcd;
using namespace negdimcd::gradflow;

namespace {

GradientCurve quadratic_flow(double K, double x0, double T, double h) {
  return integrate(Potential::quadratic(K), {x0}, T, h);
}

}  // namespace

TEST_CASE("integrate: closed-form flows") {
  const auto c = quadratic_flow(1.0, 1.0, 2.0, 1e-3);
  REQUIRE(c.size() == 2001);
  CHECK(c.times.back() == 2.0);
  double err = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    err = std::max(err, std::abs(c.points[i][0] - std::exp(-c.times[i])));
  }
  CHECK(err <= 1e-8);

  const auto flat = integrate(Potential::constant(4.0), {0.3, -2.0}, 1.0, 0.1);
  for (const auto& p : flat.points) CHECK(p == Point{0.3, -2.0});

  const auto lin = integrate(Potential::linear({2.0, -1.0}), {0.0, 1.0}, 1.0, 0.25);
  for (std::size_t i = 0; i < lin.size(); ++i) {
    CHECK(lin.points[i][0] == doctest::Approx(-2.0 * lin.times[i]).epsilon(1e-14));
    CHECK(lin.points[i][1] == doctest::Approx(1.0 + lin.times[i]).epsilon(1e-14));
  }

  const auto odd = quadratic_flow(1.0, 1.0, 0.35, 0.1);
  CHECK(odd.times.back() == 0.35);
  CHECK(odd.size() == 5);
  CHECK_THROWS_AS(integrate(Potential::quadratic(1.0), {1.0}, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("integrate stays inside the box and truncates blow-ups") {
  // f = 2 log x: xi(t) = sqrt(1 - 4t) reaches 0 at t = 1/4.
  const auto ex = convexity::example_function(convexity::ExampleKind::kC, 0.0, -2.0);
  const auto f = Potential::from_1d(ex.f, ex.domain);
  IntegrateOptions opts;
  opts.gradient_cap = 1e4;
  const auto c = integrate(f, {1.0}, 1.0, 1e-3, opts);
  for (const auto& p : c.points) CHECK(p[0] > 0.0);
  CHECK(c.truncated);
  CHECK_FALSE(c.diagnostics.empty());
  CHECK(c.times.back() < 0.25 + 1e-9);
  const std::size_t i = c.index_near(0.2);
  CHECK(c.points[i][0] == doctest::Approx(std::sqrt(1 - 0.8)).epsilon(1e-8));
}

TEST_CASE("curves satisfy the Lipschitz sanity bound") {
  for (const auto& c : {quadratic_flow(1.0, 1.0, 2.0, 1e-2), quadratic_flow(-0.5, 0.3, 2.0, 1e-2)}) {
    const auto f = Potential::quadratic(c.points[0][0] == 1.0 ? 1.0 : -0.5);
    double sup = 0.0;
    for (const auto& p : c.points) sup = std::max(sup, local_slope(f, p).value);
    for (std::size_t i = 1; i < c.size(); ++i) {
      CHECK(distance(c.points[i], c.points[i - 1]) / (c.times[i] - c.times[i - 1]) <= sup * (1 + 1e-12));
    }
  }
}

TEST_CASE("slope and metric speed") {
  CHECK(local_slope(Potential::quadratic(1.7), {1.0}).value == doctest::Approx(1.7));
  CHECK(local_slope(Potential::constant(2.0), {5.0, 1.0}).value == 0.0);
  const auto c = quadratic_flow(1.0, 1.0, 2.0, 1e-3);
  for (std::size_t i = 1; i + 1 < c.size(); i += 37) {
    const auto v = metric_speed(c, i);
    CHECK_FALSE(v.one_sided);
    CHECK(std::abs(v.value - std::exp(-c.times[i])) <= 1e-6);
  }
  CHECK(metric_speed(c, 0).one_sided);
  CHECK(metric_speed(c, c.size() - 1).one_sided);
}

TEST_CASE("energy dissipation identity") {
  const auto q = Potential::quadratic(1.0);
  const auto c = integrate(q, {1.0}, 2.0, 1e-3);
  const auto rep = verify_edi(c, q, 0.1, 1.5, 1e-6);
  CHECK(rep.pass);
  CHECK(-rep.worst_margin <= 1e-6);

  const auto flat = Potential::constant(1.0);
  CHECK(verify_edi(integrate(flat, {0.0}, 1.0, 0.1), flat, 0.2, 0.8, 0.0).worst_margin == 0.0);

  const auto lin = Potential::linear({3.0});
  const auto r = verify_edi(integrate(lin, {0.0}, 1.0, 0.01), lin, 0.2, 0.8, 1e-12);
  CHECK(r.pass);
  CHECK(std::abs(r.worst_margin) <= 1e-12);
}

TEST_CASE("EDI residual is second order under step halving") {
  const auto q = Potential::quadratic(1.0);
  std::vector<double> res;
  for (double h : {0.02, 0.01, 0.005}) {
    res.push_back(-verify_edi(integrate(q, {1.0}, 2.0, h), q, 0.2, 1.6, 1.0).worst_margin);
  }
  CHECK(std::log2(res[0] / res[1]) >= 1.9);
  CHECK(std::log2(res[1] / res[2]) >= 1.9);
}

TEST_CASE("EVI_{K,N} along the quadratic flow") {
  const auto q = Potential::quadratic(1.0);
  const auto c = integrate(q, {1.0}, 2.0, 1e-3);
  for (double N : {-1.0, -2.0, -10.0}) {
    for (double z : {-1.0, 0.0, 2.0}) {
      const auto rep = verify_evi(c, q, 1.0, N, {z}, 1e-9);
      CHECK(rep.pass);
      CHECK(rep.n_evaluations == c.size() - 2);
    }
  }
}

TEST_CASE("EVI at a stationary minimum") {
  const auto q = Potential::quadratic(1.0);
  const auto c = integrate(q, {0.0}, 1.0, 0.1);
  for (double z : {-2.0, 0.5, 3.0}) {
    const auto rep = verify_evi(c, q, 0.0, -2.0, {z}, 0.0);
    CHECK(rep.pass);
    CHECK(rep.worst_margin >= 0.0);
  }
}

TEST_CASE("EVI monotonicity in (K,N)") {
  const auto q = Potential::quadratic(1.0);
  const auto c = integrate(q, {1.5}, 1.5, 1e-3);
  const std::vector<double> Ks{1.0, 0.5, 0.0, -0.5};
  const std::vector<double> Ns{-1.0, -2.0, -4.0};
  for (double K : Ks) {
    for (double N : Ns) {
      if (!verify_evi(c, q, K, N, {0.4}, 1e-9).pass) continue;
      for (double K2 : Ks) {
        for (double N2 : {-1.0, -0.5, -0.1}) {
          if (K2 <= K && N2 >= N) CHECK(verify_evi(c, q, K2, N2, {0.4}, 1e-9).pass);
        }
      }
    }
  }
}

TEST_CASE("EVI_K implies EVI_{K,N}; the (K,N) margin tends to half the K margin") {
  const auto q = Potential::quadratic(1.0);
  const auto c = integrate(q, {1.0}, 1.0, 1e-3);
  for (double z : {-1.0, 0.5, 2.0}) {
    const auto rk = verify_evi_k(c, q, 1.0, {z}, 1e-9);
    REQUIRE(rk.pass);
    for (double N : {-1.0, -2.0, -5.0, -10.0, -100.0}) {
      CHECK(verify_evi(c, q, 1.0, N, {z}, 1e-9).pass);
    }
  }
  // f(z) - f(xi) - d/dt[d^2/2] - K d^2/2 vanishes for the quadratic flow, so
  // both margins tend to 0; compare at a non-optimal K instead.
  const double z = 2.0;
  const auto rk = verify_evi_k(c, q, 0.5, {z}, 1.0);
  const auto rn = verify_evi(c, q, 0.5, -1e5, {z}, 1.0);
  CHECK(2 * rn.worst_margin == doctest::Approx(rk.worst_margin).epsilon(1e-3));
}

TEST_CASE("integrated EVI") {
  const auto q = Potential::quadratic(1.0);
  const auto c = integrate(q, {1.0}, 1.0, 1e-3);
  CHECK(verify_evi_integrated(c, q, 0.0, -2.0, {0.5}, 0.3, 0.3, 0.0).worst_margin == 0.0);
  const auto r = verify_evi_integrated(c, q, 1.0, -2.0, {0.0}, 0.1, 0.5, 0.0);
  CHECK(r.pass);
  CHECK(r.worst_margin >= 0.0);

  for (double N : {-1.0, -3.0}) {
    for (double z : {-0.5, 0.2, 1.4}) {
      REQUIRE(verify_evi(c, q, 1.0, N, {z}, 1e-9).pass);
      for (auto [t0, t1] : {std::pair{0.0, 1.0}, {0.2, 0.25}, {0.5, 0.9}}) {
        CHECK(verify_evi_integrated(c, q, 1.0, N, {z}, t0, t1, 1e-9).pass);
      }
    }
  }
}

TEST_CASE("regularizing bound and continuity estimate") {
  const auto q = Potential::quadratic(1.0);
  const auto c = integrate(q, {1.0}, 1.0, 1e-3);
  const auto r1 = regularizing_bound(c, q, 1.0, -2.0, {0.0}, 0.5, 0.0);
  CHECK(r1.pass);
  CHECK(r1.worst_margin > 1e-3);

  const auto r0 = regularizing_bound(c, q, 1.0, -2.0, {1.0}, 1e-3, 0.0);
  CHECK(std::abs(r0.worst_margin) < 1e-2);

  const auto flat = Potential::constant(2.0);
  const auto cf = integrate(flat, {0.7}, 1.0, 0.1);
  const auto r2 = continuity_estimate(cf, flat, 0.5, -2.0, 0.2, 0.8, 2.0, 0.0);
  CHECK(r2.worst_margin == 0.0);
  CHECK_THROWS_AS(continuity_estimate(cf, flat, 0.5, -2.0, 0.2, 0.8, std::nullopt, 0.0),
                  std::invalid_argument);

  for (auto [t0, t1] : {std::pair{0.1, 0.4}, {0.3, 0.9}}) {
    CHECK(continuity_estimate(c, q, 1.0, -2.0, t0, t1, 0.0, 1e-9).pass);
  }
}

TEST_CASE("expansion bound") {
  const auto zero = Potential::constant(0.0);
  const auto r0 = expansion_bound(zero, {0.0}, {1.0}, 0.0, -2.0, 0.0, 0.25, 1.0, 0.05, 0.0);
  // -2N (sqrt t1 - sqrt t0)^2 = 4 * 0.25
  CHECK(r0.worst_margin == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(expansion_theta(0.0, -2.0, 0.0, 0.3, 0.7) == 0.0);

  const Point a{0.6, -0.8};
  const auto lin = Potential::linear(a);
  const Point x{0.0, 0.0}, y{1.0, 0.5};
  std::vector<std::pair<double, double>> pairs;
  for (double t0 : {0.0, 0.1, 0.5, 1.0}) {
    for (double t1 : {0.0, 0.2, 0.5, 1.5}) pairs.emplace_back(t0, t1);
  }
  const double N = -3.0, L = 1.0;
  const auto rep = expansion_bound(lin, x, y, 0.0, N, L, pairs, 0.05, 1e-12);
  CHECK(rep.pass);
  for (auto [t0, t1] : pairs) {
    const double dx = (x[0] - a[0] * t0) - (y[0] - a[0] * t1);
    const double dy = (x[1] - a[1] * t0) - (y[1] - a[1] * t1);
    CHECK(expansion_rhs(0.0, N, L, distance(x, y), t0, t1) >= dx * dx + dy * dy);
  }

  CHECK_THROWS_WITH_AS(expansion_bound(lin, x, y, 0.0, N, 0.5, 0.1, 0.2, 0.05, 0.0),
                       doctest::Contains("|grad f| > L"), std::invalid_argument);
}

TEST_CASE("same-time contraction for translates") {
  const auto lin = Potential::linear({1.0, 1.0});
  const auto rep = same_time_contraction(lin, {0.0, 0.0}, {2.0, -1.0}, 0.0, -2.0, std::sqrt(2.0),
                                         {0.0, 0.5, 1.0, 3.0}, 0.1, 1e-12);
  CHECK(rep.pass);
  CHECK(rep.worst_margin == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Lipschitz (K,N)-convex functions are (K + L^2/N)-convex") {
  const auto ex = convexity::example_function(convexity::ExampleKind::kC, 0.0, -2.0);
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(1.0 + 2.0 * i / 40);
  const auto rep = lipschitz_convexity_claim(ex.f, 0.0, -2.0, 2.0, grid, 1e-12);
  CHECK(rep.pass);
  CHECK(rep.worst_margin == doctest::Approx(0.0).epsilon(1e-12));

  const auto q = ScalarFunction1D::quadratic(0.5);
  for (double N : {-1.0, -5.0}) {
    CHECK(lipschitz_convexity_claim(q, 1.0, N, 3.0, grid, 1e-12).pass);
  }
  CHECK_THROWS_AS(lipschitz_convexity_claim(q, 1.0, -1.0, 1.0, grid, 1e-12), std::invalid_argument);
}

TEST_CASE("energy is non-increasing and the slope stays below the speed") {
  const auto ex = convexity::example_function(convexity::ExampleKind::kA, 1.0, -2.0);
  const auto f = Potential::from_1d(ex.f);
  for (double x0 : {-3.0, 0.2, 5.0}) {
    const auto c = integrate(f, {x0}, 3.0, 1e-2);
    CHECK(energy_monotone(c, f).pass);
    CHECK(slope_below_speed(c, f).pass);
  }
  const auto q = Potential::quadratic(-0.7);
  const auto c = integrate(q, {0.5, -0.1}, 2.0, 1e-2);
  CHECK(energy_monotone(c, q).pass);
  CHECK(slope_below_speed(c, q).pass);
}

TEST_CASE("curve table export") {
  const auto c = integrate(Potential::linear({1.0}), {0.0}, 0.5, 0.25);
  std::ostringstream os;
  c.write_table(os);
  CHECK(os.str() == "# t x1\n0 0\n0.25 -0.25\n0.5 -0.5\n");
}
