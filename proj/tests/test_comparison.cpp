#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "negdimcd/comparison.hpp"

using namespace negdimcd;
using namespace negdimcd::comparison;

namespace {

// Independent oracle: full Taylor sums in long double, many terms.
long double series_s(long double kappa, long double theta) {
  long double term = theta, sum = theta;
  for (int k = 1; k < 80; ++k) {
    term *= -kappa * theta * theta / ((2.0L * k) * (2.0L * k + 1));
    sum += term;
  }
  return sum;
}

long double series_c(long double kappa, long double theta) {
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 80; ++k) {
    term *= -kappa * theta * theta / ((2.0L * k - 1) * (2.0L * k));
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("s on its three branches") {
  CHECK(s(0.0, 2.5) == 2.5);
  CHECK(s(1.0, std::numbers::pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
  const double expected = static_cast<double>(series_s(-1.0L, 1.0L));
  CHECK(expected == doctest::Approx(1.1752011936438014).epsilon(1e-15));
  CHECK(s(-1.0, 1.0) == doctest::Approx(expected).epsilon(1e-14));
  CHECK_THROWS_AS(s(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("c on its three branches") {
  for (double kappa : {-3.0, -1e-9, 0.0, 2e-9, 5.0}) CHECK(c(kappa, 0.0) == 1.0);
  CHECK(c(1.0, std::numbers::pi) == doctest::Approx(-1.0).epsilon(1e-15));
  const double expected = static_cast<double>(series_c(-0.5L, 1.0L));
  CHECK(expected == doctest::Approx(1.2605918365213561).epsilon(1e-15));
  CHECK(c(-0.5, 1.0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("s and c agree with the series oracle across the series threshold") {
  for (double kappa : {-4.0, -1.0, -1e-5, -3e-7, -1e-12, 0.0, 1e-12, 3e-7, 1e-5, 0.7, 3.9}) {
    for (double theta : {0.0, 1e-3, 0.1, 0.5, 1.0, 1.5}) {
      const double es = static_cast<double>(series_s(kappa, theta));
      const double ec = static_cast<double>(series_c(kappa, theta));
      CHECK(std::abs(s(kappa, theta) - es) <= 1e-14 * (1 + std::abs(es)));
      CHECK(std::abs(c(kappa, theta) - ec) <= 1e-14 * (1 + std::abs(ec)));
    }
  }
}

TEST_CASE("half-angle identities hold on a grid") {
  double worst = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double kappa = -4.0 + 8.0 * i / 59.0;
    for (int j = 0; j < 60; ++j) {
      const double theta = 3.0 * j / 59.0;
      if (kappa > 0 && theta >= sigma_domain_end(kappa)) continue;
      const double sh = s(kappa, theta / 2), ch = c(kappa, theta / 2);
      worst = std::max(worst, std::abs(c(kappa, theta) - (1 - 2 * kappa * sh * sh)));
      worst = std::max(worst, std::abs(s(kappa, theta) - 2 * sh * ch));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("s solves u'' = -kappa u to second order in the step") {
  for (double kappa : {-2.0, -0.1, 0.0, 0.4, 3.0}) {
    const double theta = 0.8;
    double prev = 0.0;
    for (double h : {1e-2, 5e-3}) {
      const double fd = (s(kappa, theta + h) - 2 * s(kappa, theta) + s(kappa, theta - h)) / (h * h);
      const double err = std::abs(fd + kappa * s(kappa, theta));
      if (prev > 1e-12) CHECK(err < prev / 3.0);
      CHECK(err < 1e-3 * (1 + std::abs(kappa)));
      prev = err;
    }
  }
}

TEST_CASE("no cancellation for tiny kappa") {
  for (double theta : {0.5, 2.0, 10.0}) {
    for (double kappa : {1e-8, -1e-8, 1e-13, -1e-13}) {
      CHECK(std::abs(s(kappa, theta) - theta) <= std::abs(kappa) * theta * theta * theta);
      CHECK(std::abs(c(kappa, theta) - 1.0) <= std::abs(kappa) * theta * theta);
    }
  }
}

TEST_CASE("sigma conventions") {
  for (double kappa : {-2.0, 0.0, 1.5}) {
    for (double t : {0.0, 0.3, 1.0}) CHECK(sigma(kappa, t, 0.0) == ExtReal(t));
  }
  CHECK(sigma(0.0, 0.3, 7.0).value() == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(sigma(1.0, 0.5, std::numbers::pi / 2).value() ==
        doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
  CHECK(sigma(1.0, 0.5, 3.2).is_infinite());
  CHECK(sigma(1.0, 0.5, std::numbers::pi).is_infinite());
  CHECK(sigma(1.0, 1.0, 3.0).value() == doctest::Approx(1.0));
  // Large hyperbolic arguments do not overflow.
  const double r = sigma(-1.0, 0.5, 2000.0).value();
  CHECK(r == doctest::Approx(std::exp(-1000.0)).epsilon(1e-12));
  CHECK(sigma(-4.0, 1.0, 800.0).value() == doctest::Approx(1.0));
}

TEST_CASE("sigma is non-decreasing in kappa") {
  for (double t : {0.1, 0.5, 0.9}) {
    for (double theta : {0.3, 1.0, 2.5}) {
      double prev = -1.0;
      for (int i = 0; i <= 200; ++i) {
        const double kappa = -5.0 + 6.5 * i / 200.0;
        const ExtReal v = sigma(kappa, t, theta);
        if (v.is_infinite()) break;
        CHECK(v.value() >= prev - 1e-15);
        prev = v.value();
      }
    }
  }
}

TEST_CASE("tau conventions and its ordering below sigma") {
  CHECK(tau(1.0, -2.0, 0.0, 1.0) == ExtReal(0.0));
  CHECK(tau(-3.0, -2.0, 0.0, 100.0) == ExtReal(0.0));
  for (double N : {-0.5, -2.0, -30.0}) {
    for (double t : {0.2, 0.7}) {
      CHECK(tau(0.0, N, t, 4.0).value() == doctest::Approx(t).epsilon(1e-14));
    }
  }
  // K < 0: domain ends at pi sqrt((N-1)/K).
  const double end = std::numbers::pi * std::sqrt((-2.0 - 1.0) / -1.0);
  CHECK(tau(-1.0, -2.0, 0.5, end + 1e-9).is_infinite());
  CHECK(tau(-1.0, -2.0, 0.5, end - 1e-3).is_finite());
  CHECK_THROWS_AS(tau(1.0, 0.5, 0.5, 1.0), std::invalid_argument);

  const double t_val = tau(1.0, -2.0, 0.5, 1.0).value();
  const double s_val = sigma(1.0 / -2.0, 0.5, 1.0).value();
  CHECK(t_val == doctest::Approx(0.470105594691377657).epsilon(1e-13));
  CHECK(s_val == doctest::Approx(0.470298858567839847).epsilon(1e-13));
  CHECK(s_val - t_val > 1e-4);
}

TEST_CASE("tau <= sigma_{K/N} on a grid") {
  for (double K : {-3.0, -0.5, 0.0, 0.5, 4.0}) {
    for (double N : {-0.3, -1.0, -4.0, -50.0}) {
      for (double t : {0.0, 0.1, 0.5, 0.9, 1.0}) {
        for (double theta : {0.0, 0.2, 1.0, 3.0, 8.0}) {
          const ExtReal a = tau(K, N, t, theta);
          const ExtReal b = sigma(K / N, t, theta);
          if (a.is_infinite() || b.is_infinite()) continue;
          CHECK(a.value() <= b.value() * (1 + 1e-13) + 1e-15);
        }
      }
    }
  }
}

TEST_CASE("G_t basics and midpoint convexity") {
  CHECK(g_combiner(0.3, 0.0, 0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g_combiner(0.5, 1.7, 1.7, 0.0) == doctest::Approx(1.7).epsilon(1e-15));
  CHECK_THROWS_AS(g_combiner(0.5, 0, 0, std::numbers::pi * std::numbers::pi), std::invalid_argument);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> arg(-3.0, 3.0), kap(-8.0, 9.5), tt(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double t = tt(rng);
    const double a1 = arg(rng), b1 = arg(rng), k1 = kap(rng);
    const double a2 = arg(rng), b2 = arg(rng), k2 = kap(rng);
    const double mid = g_combiner(t, (a1 + a2) / 2, (b1 + b2) / 2, (k1 + k2) / 2);
    const double avg = (g_combiner(t, a1, b1, k1) + g_combiner(t, a2, b2, k2)) / 2;
    CHECK(mid <= avg + 1e-12);
  }
}
