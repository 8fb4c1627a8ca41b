#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "negdimcd/comparison.hpp"
#include "negdimcd/geometry.hpp"
#include "negdimcd/quadrature.hpp"
#include "negdimcd/transport.hpp"

using namespace negdimcd;
using namespace negdimcd::transport;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

const std::vector<double> kTimes = {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};

// Minimum-cost perfect matching (Hungarian method with potentials).
double min_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j) total += cost[p[j] - 1][j - 1];
  return total;
}

Density1D tilted(double a, double b, double c, double lo, double hi) {
  return Density1D::from_pdf(
      ScalarFunction1D([=](double x) { return std::exp(a * std::sin(b * x) + c * x); }), lo, hi);
}

}  // namespace

TEST_CASE("densities normalize and invert") {
  for (const Density1D& mu :
       {Density1D::uniform(0, 1), Density1D::gaussian(1, 2), tilted(0.7, 3, -1, -1, 2)}) {
    const double mass = quadrature::integrate([&](double x) { return mu.pdf(x); }, mu.lo(), mu.hi(), 256);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(mu.cdf(mu.hi()) == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : linspace(mu.lo(), mu.hi(), 41)) {
      if (x <= mu.lo() || x >= mu.hi()) continue;
      if (mu.pdf(x) < 1e-8) continue;
      CHECK(std::abs(mu.quantile(mu.cdf(x)) - x) <= 1e-6);
    }
    CHECK(mu.quantile(0.0) == mu.lo());
    CHECK(mu.quantile(1.0) == mu.hi());
  }
  CHECK_THROWS_AS(Density1D::uniform(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(Density1D::gaussian(0, 0), std::invalid_argument);
}

TEST_CASE("w2 oracles") {
  const auto g0 = Density1D::gaussian(0, 1), g1 = Density1D::gaussian(1, 1);
  const W2Result r = w2(g0, g1);
  CHECK(std::abs(r.value - 1.0) <= 1e-4);
  CHECK(r.converged);
  CHECK(w2(g0, g0).value == doctest::Approx(0.0));
  CHECK(w2(Density1D::uniform(0, 1), Density1D::uniform(2, 3)).value ==
        doctest::Approx(2.0).epsilon(1e-12));
  // (dmean^2 + dsd^2)^{1/2}
  CHECK(w2(Density1D::gaussian(0, 1), Density1D::gaussian(3, 2)).value ==
        doctest::Approx(std::sqrt(10.0)).epsilon(1e-6));
}

TEST_CASE("quantile coupling beats every permutation coupling") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> amp(-1, 1), freq(1, 4), tilt(-1.5, 1.5), shift(-1, 1);
  constexpr int kAtoms = 30;
  for (int pair = 0; pair < 20; ++pair) {
    const double s = shift(rng);
    const auto mu0 = tilted(amp(rng), freq(rng), tilt(rng), 0, 1);
    const auto mu1 = tilted(amp(rng), freq(rng), tilt(rng), s, s + 1.5);
    std::vector<double> a(kAtoms), b(kAtoms);
    for (int i = 0; i < kAtoms; ++i) {
      a[i] = mu0.quantile((i + 0.5) / kAtoms);
      b[i] = mu1.quantile((i + 0.5) / kAtoms);
    }
    std::shuffle(b.begin(), b.end(), rng);
    std::vector<std::vector<double>> cost(kAtoms, std::vector<double>(kAtoms));
    for (int i = 0; i < kAtoms; ++i)
      for (int j = 0; j < kAtoms; ++j) cost[i][j] = (a[i] - b[j]) * (a[i] - b[j]);
    const double best = std::sqrt(min_assignment(cost) / kAtoms);
    const double exact = w2(mu0, mu1).value;
    CHECK(std::abs(best - exact) <= 0.02 * exact);

    std::vector<int> perm(kAtoms);
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = 0; k < 200; ++k) {
      std::shuffle(perm.begin(), perm.end(), rng);
      double c = 0.0;
      for (int i = 0; i < kAtoms; ++i) c += cost[i][perm[i]];
      CHECK(std::sqrt(c / kAtoms) >= best - 1e-12);
    }
  }
}

TEST_CASE("interpolation") {
  SUBCASE("endpoints") {
    const GeodesicPath path(Density1D::gaussian(0, 1), Density1D::gaussian(2, 0.5));
    for (double y : linspace(-3, 3, 13)) {
      CHECK(path.density(0.0, y) == path.mu0().pdf(y));
      CHECK(path.density(1.0, y) == path.mu1().pdf(y));
    }
  }
  SUBCASE("gaussians stay gaussian") {
    const GeodesicPath path(Density1D::gaussian(0, 1), Density1D::gaussian(2, 3));
    for (double t : {0.25, 0.5, 0.75}) {
      const double m = 2 * t, sd = (1 - t) + 3 * t;
      for (double y : linspace(m - 3 * sd, m + 3 * sd, 9)) {
        const double z = (y - m) / sd;
        const double expected = std::exp(-z * z / 2) / (sd * std::sqrt(2 * kPi));
        CHECK(path.density(t, y) == doctest::Approx(expected).epsilon(1e-7));
      }
    }
  }
  SUBCASE("uniform dilation") {
    const GeodesicPath path(Density1D::uniform(0, 1), Density1D::uniform(0, 2));
    for (double t : {0.2, 0.6}) {
      CHECK(path.map(0.5, t) == doctest::Approx(0.5 * (1 + t)));
      CHECK(path.jacobian(0.3, t) == doctest::Approx(1 + t));
      CHECK(path.density(t, 0.5) == doctest::Approx(1 / (1 + t)));
      CHECK(path.density(t, 1.5 + t) == 0.0);
    }
  }
  SUBCASE("geodesic property") {
    const GeodesicPath path(tilted(0.5, 2, 1, 0, 1), tilted(-0.4, 3, -0.5, 0.5, 2.5));
    const double W = w2(path.mu0(), path.mu1()).value;
    const std::vector<double> ts = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<Density1D> at;
    for (double t : ts) at.push_back(path.at(t, 64));
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double mass = quadrature::integrate([&](double x) { return at[i].pdf(x); },
                                                at[i].lo(), at[i].hi(), 64);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
      for (std::size_t j = i + 1; j < ts.size(); ++j) {
        CHECK(std::abs(w2(at[i], at[j]).value - (ts[j] - ts[i]) * W) <= 1e-5);
      }
    }
  }
  SUBCASE("monge-ampere residual") {
    const GeodesicPath path(Density1D::gaussian(0, 1), Density1D::gaussian(1, 1.5));
    for (double t : {0.3, 0.7}) CHECK(monge_ampere_residual(lebesgue_space(), path, t).max_abs <= 1e-6);
    const GeodesicPath up(Density1D::uniform(1, 2), tilted(0.3, 2, 0.5, 2, 4));
    const auto space = power_weight_space(-3.0);
    CHECK(monge_ampere_residual(space, up, 0.5).max_abs <= 1e-6);
  }
}

TEST_CASE("entropy oracles") {
  const auto leb = lebesgue_space();
  const auto gauss = standard_gaussian_space();
  const auto u = Density1D::uniform(0, 1);
  CHECK(renyi_entropy(u, leb, -2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(relative_entropy(u, leb)) <= 1e-14);
  CHECK(std::abs(fisher_information(u, leb)) <= 1e-14);

  const auto g1 = Density1D::gaussian(1, 1);
  CHECK(std::abs(relative_entropy(g1, gauss) - 0.5) <= 1e-6);
  CHECK(std::abs(fisher_information(g1, gauss) - 1.0) <= 1e-6);
  CHECK(std::abs(relative_entropy(Density1D::gaussian(0, 1), gauss)) <= 1e-9);

  // int phi^p = p^{-1/2} (2 pi)^{(1-p)/2} with p = 3/2.
  const double p = 1.5;
  const double oracle = std::pow(p, -0.5) * std::pow(2 * kPi, (1 - p) / 2);
  CHECK(renyi_entropy(Density1D::gaussian(0, 1), leb, -2) == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(oracle == doctest::Approx(0.5157145724794111).epsilon(1e-14));

  CHECK_THROWS_AS(relative_entropy(Density1D::uniform(-1, 1), power_weight_space(-3)),
                  std::invalid_argument);
}

TEST_CASE("curvature-dimension checks on the model weight") {
  const double N = -2;
  const auto space = power_weight_space(N - 1);
  const auto mu0 = Density1D::uniform(1, 2), mu1 = Density1D::uniform(3, 5);
  const std::vector<double> nps = {N, N / 2, N / 4};
  const CheckReport cd = check_cd(space, mu0, mu1, 0, N, nps, kTimes, CdMode::kCD, 1e-9);
  CHECK(cd.status == CheckStatus::kPass);
  const CheckReport cds = check_cd(space, mu0, mu1, 0, N, nps, kTimes, CdMode::kCDStar, 1e-9);
  CHECK(cds.status == CheckStatus::kPass);
  CHECK(cd.samples.size() == cds.samples.size());
  for (std::size_t i = 0; i < cd.samples.size(); ++i) {
    CHECK(cds.samples[i].margin >= cd.samples[i].margin - 1e-12);
  }

  SUBCASE("same endpoints give zero margin") {
    const auto r = check_cd(space, mu0, mu0, 0, N, {N}, kTimes, CdMode::kCD, 1e-9);
    CHECK(std::abs(r.worst_margin) <= 1e-10);
  }
  SUBCASE("positive curvature, gaussian weight") {
    const auto g = standard_gaussian_space();
    const auto a = tilted(0.3, 2, 0, -1, 0.5), b = tilted(-0.2, 1, 0.4, 0, 2);
    for (double Np : {-1.0, -3.0, -10.0}) {
      const auto r = check_cd(g, a, b, 1, Np, {Np, Np / 2, Np / 4}, kTimes, CdMode::kCD, 1e-9);
      CHECK(r.status == CheckStatus::kPass);
      const auto rs = check_cd(g, a, b, 1, Np, {Np}, kTimes, CdMode::kCDStar, 1e-9);
      CHECK(rs.status == CheckStatus::kPass);
    }
  }
  SUBCASE("x^N weight cross-check runs either way") {
    const auto other = power_weight_space(N);
    const auto r = check_cd(other, mu0, mu1, 0, N, {N}, kTimes, CdMode::kCD, 1e-9);
    CHECK(r.n_evaluations > 0);
    CHECK(std::isfinite(r.worst_margin));
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(check_cd(space, mu0, mu1, 0, N, {N - 1}, kTimes, CdMode::kCD, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_cd(space, mu0, mu1, 0, 2, {N}, kTimes, CdMode::kCD, 0),
                    std::invalid_argument);
  }
}

TEST_CASE("jacobian convexity") {
  SUBCASE("homothety on the model weight is an equality") {
    for (double N : {-1.0, -2.0, -7.5}) {
      const auto space = power_weight_space(N - 1);
      const TransportPlan1D plan{[](double x) { return 2.5 * x; }, [](double) { return 2.5; }};
      const auto r = check_jacobian_convexity(space, plan, 0, N, linspace(1, 2, 11), kTimes, 1e-9);
      CHECK(r.status == CheckStatus::kPass);
      CHECK(std::abs(r.worst_margin) <= 1e-9);
    }
  }
  SUBCASE("lebesgue, K = 0") {
    const GeodesicPath path(Density1D::uniform(0, 1), tilted(0.5, 3, 1, 1, 3));
    const auto r = check_jacobian_convexity(lebesgue_space(), path.plan(), 0, -3,
                                            linspace(0.01, 0.99, 25), kTimes, 1e-12);
    CHECK(r.status == CheckStatus::kPass);
  }
  SUBCASE("smooth monotone map, gaussian weight") {
    const TransportPlan1D plan{[](double x) { return x + 0.3 * std::sin(x); },
                               [](double x) { return 1 + 0.3 * std::cos(x); }};
    const auto r = check_jacobian_convexity(standard_gaussian_space(), plan, 1, -3,
                                            linspace(1, 2, 21), kTimes, 1e-9);
    CHECK(r.status == CheckStatus::kPass);
  }
}

TEST_CASE("brunn-minkowski") {
  const double N = -2;
  const auto space = power_weight_space(N - 1);
  const double m = measure(space, {1, 2});
  CHECK(m == doctest::Approx((std::pow(1, N) - std::pow(2, N)) / -N).epsilon(1e-14));

  const auto r = brunn_minkowski(space, {1, 2}, {2, 4}, 0.5, 0, N, BmMode::kBM, 1e-10);
  CHECK(r.status == CheckStatus::kPass);
  CHECK(std::abs(r.worst_margin) <= 1e-10);

  const auto same = brunn_minkowski(space, {1, 3}, {1, 3}, 0.3, 0, N, BmMode::kBMStar, 1e-12);
  CHECK(std::abs(same.worst_margin) <= 1e-12);

  // Lengths: strict 1/N-concavity away from homothety.
  for (double n : {-0.5, -2.0, -20.0}) {
    const auto l = brunn_minkowski(lebesgue_space(), {0, 1}, {3, 7}, 0.4, 0, n, BmMode::kBM, 0);
    CHECK(l.worst_margin > 0);
    const double expected = 0.6 + 0.4 * std::pow(4.0, 1 / n) - std::pow(0.6 + 0.4 * 4, 1 / n);
    CHECK(l.worst_margin == doctest::Approx(expected).epsilon(1e-12));
  }

  CHECK_THROWS_AS(brunn_minkowski(space, {2, 2}, {2, 4}, 0.5, 0, N, BmMode::kBM, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(brunn_minkowski(lebesgue_space(), {0, 1}, {20, 30}, 0.5, -1, N, BmMode::kBMStar, 0),
                  std::invalid_argument);
}

TEST_CASE("entropic curvature-dimension") {
  const auto g = standard_gaussian_space();
  const auto a = Density1D::gaussian(0.5, 1), b = Density1D::gaussian(-0.5, 1);
  const auto r = check_entropic_cd(g, a, b, 1, -2, kTimes, 1e-9);
  CHECK(r.status == CheckStatus::kPass);

  // Entropy along the mean-shift geodesic is (m_t)^2/2.
  const GeodesicPath path(a, b);
  for (double t : {0.25, 0.5, 0.8}) {
    const double mt = 0.5 - t;
    CHECK(entropy_along(g, path, t) == doctest::Approx(mt * mt / 2).epsilon(1e-8));
  }

  const auto same = check_entropic_cd(g, a, a, 1, -2, kTimes, 1e-9);
  CHECK(std::abs(same.worst_margin) <= 1e-9);

  const auto leb = check_entropic_cd(lebesgue_space(), Density1D::uniform(0, 0.3),
                                     Density1D::uniform(0.4, 1), 0, -2, kTimes, 1e-10);
  CHECK(leb.status == CheckStatus::kPass);
}

TEST_CASE("functional inequalities on the gaussian pair") {
  const auto g = standard_gaussian_space();
  const auto m = Density1D::gaussian(0, 1), mu = Density1D::gaussian(1, 1);
  const double s = 1 / std::sqrt(2.0);

  const auto tal = talagrand_check(g, m, mu, 1, -2, 1e-9);
  CHECK(tal.worst_margin == doctest::Approx(0.5 - 2 * std::log(std::cosh(s))).epsilon(1e-6));
  CHECK(std::abs(tal.worst_margin - 0.0368) <= 1e-3);

  const auto hwi = hwi_check(g, mu, m, 1, -2, 1e-9);
  CHECK(hwi.worst_margin ==
        doctest::Approx(std::exp(-0.25) - std::cosh(s) + std::sqrt(2.0) * std::sinh(s) / 2)
            .epsilon(1e-6));
  CHECK(std::abs(hwi.worst_margin - 0.0609) <= 1e-3);

  const auto ls = log_sobolev_check(g, m, mu, 1, -2, 1e-9);
  CHECK(ls.worst_margin == doctest::Approx(1 + 2 * (std::exp(-0.5) - 1)).epsilon(1e-6));
  CHECK(std::abs(ls.worst_margin - 0.2131) <= 1e-3);
  CHECK(log_sobolev_admissibility(g, m, mu, 1, -2) > 0);

  SUBCASE("trivial cases") {
    CHECK(std::abs(talagrand_check(g, m, m, 1, -2, 1e-9).worst_margin) <= 1e-9);
    CHECK(std::abs(hwi_check(g, m, m, 1, -2, 1e-9).worst_margin) <= 1e-9);
    CHECK(std::abs(log_sobolev_check(g, m, m, 1, -2, 1e-9).worst_margin) <= 1e-9);
  }
  SUBCASE("margins shrink to zero from above as N -> -inf") {
    double prev_t = tal.worst_margin, prev_h = hwi.worst_margin, prev_l = ls.worst_margin;
    for (double N : {-10.0, -100.0, -1000.0}) {
      const double t = talagrand_check(g, m, mu, 1, N, 1e-9).worst_margin;
      const double h = hwi_check(g, mu, m, 1, N, 1e-9).worst_margin;
      const double l = log_sobolev_check(g, m, mu, 1, N, 1e-9).worst_margin;
      CHECK(t > 0);
      CHECK(h > 0);
      CHECK(l > 0);
      CHECK(t < prev_t);
      CHECK(h < prev_h);
      CHECK(l < prev_l);
      prev_t = t;
      prev_h = h;
      prev_l = l;
    }
    CHECK(prev_t < 1e-3);
    CHECK(prev_h < 1e-3);
    CHECK(prev_l < 1e-2);
  }
  SUBCASE("flat hwi on shifted uniforms") {
    const auto r = hwi_check(lebesgue_space(), tilted(0.2, 2, 0.5, 0, 1), Density1D::uniform(0.5, 1.2),
                             0, -2, 1e-10);
    CHECK(r.status == CheckStatus::kPass);
  }
  SUBCASE("inadmissible log-sobolev is vacuous") {
    // Far and sharply peaked: the admissibility expression goes negative.
    const auto far = Density1D::gaussian(4, 0.1);
    CHECK(log_sobolev_admissibility(g, m, far, 1, -2) <= 0);
    const auto r = log_sobolev_check(g, m, far, 1, -2, 1e-9);
    CHECK(r.status == CheckStatus::kVacuous);
  }
  CHECK_THROWS_AS(talagrand_check(g, Density1D::gaussian(0, 2), mu, 1, -2, 0), std::invalid_argument);
  CHECK_THROWS_AS(talagrand_check(g, m, mu, -1, -2, 0), std::invalid_argument);
}
