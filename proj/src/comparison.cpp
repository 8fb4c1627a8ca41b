#include "negdimcd/comparison.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace negdimcd::comparison {
namespace {

void require_nonneg_theta(double theta) {
  if (!(theta >= 0.0)) throw std::invalid_argument("theta must be nonnegative");
}

// theta * sum_k (-x)^k / (2k+1)!, x = kappa theta^2.
double s_series(double x, double theta) {
  return theta * (1.0 - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0 + x * x * x * x / 362880.0);
}

double c_series(double x) {
  return 1.0 - x / 2.0 + x * x / 24.0 - x * x * x / 720.0 + x * x * x * x / 40320.0;
}

// sinh(a t) / sinh(a) for a > 0, t in [0,1], without overflow.
double sinh_ratio(double a, double t) {
  if (a < 20.0) return std::sinh(a * t) / std::sinh(a);
  return std::exp(a * (t - 1.0)) * (-std::expm1(-2.0 * a * t)) / (-std::expm1(-2.0 * a));
}

}  // namespace

double s(double kappa, double theta) {
  require_nonneg_theta(theta);
  const double x = kappa * theta * theta;
  if (std::abs(x) <= kSeriesThreshold) return s_series(x, theta);
  if (kappa > 0.0) {
    const double r = std::sqrt(kappa);
    return std::sin(r * theta) / r;
  }
  const double r = std::sqrt(-kappa);
  return std::sinh(r * theta) / r;
}

double c(double kappa, double theta) {
  require_nonneg_theta(theta);
  const double x = kappa * theta * theta;
  if (std::abs(x) <= kSeriesThreshold) return c_series(x);
  if (kappa > 0.0) return std::cos(std::sqrt(kappa) * theta);
  return std::cosh(std::sqrt(-kappa) * theta);
}

double sigma_domain_end(double kappa) {
  if (kappa > 0.0) return std::numbers::pi / std::sqrt(kappa);
  return std::numeric_limits<double>::infinity();
}

ExtReal sigma(double kappa, double t, double theta) {
  require_nonneg_theta(theta);
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("t must lie in [0,1]");
  if (theta == 0.0) return t;
  if (kappa > 0.0 && theta >= sigma_domain_end(kappa)) return ExtReal::infinity();
  if (t == 0.0) return 0.0;
  const double x = kappa * theta * theta;
  if (std::abs(x) <= kSeriesThreshold) {
    const double xt = x * t * t;
    return t * s_series(xt, 1.0) / s_series(x, 1.0);
  }
  if (kappa < 0.0) return sinh_ratio(std::sqrt(-kappa) * theta, t);
  return s(kappa, t * theta) / s(kappa, theta);
}

ExtReal tau(double K, double N, double t, double theta) {
  if (!(N < 0.0)) throw std::invalid_argument("N must be negative");
  require_nonneg_theta(theta);
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("t must lie in [0,1]");
  if (t == 0.0) return 0.0;
  const double kappa = K / (N - 1.0);
  if (K < 0.0 && theta >= sigma_domain_end(kappa)) return ExtReal::infinity();
  const ExtReal sg = sigma(kappa, t, theta);
  if (sg.is_infinite()) return ExtReal::infinity();
  // Negative-exponent powers through exp/log on strictly positive bases.
  return std::exp(std::log(t) / N + (N - 1.0) / N * std::log(sg.value()));
}

double g_combiner(double t, double theta, double eta, double kappa) {
  constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
  if (!(kappa < kPi2)) throw std::invalid_argument("kappa must be below pi^2");
  const double a = sigma(kappa, 1.0 - t, 1.0).value();
  const double b = sigma(kappa, t, 1.0).value();
  // log(a e^theta + b e^eta) with the larger exponent factored out.
  const double m = std::max(theta, eta);
  return m + std::log(a * std::exp(theta - m) + b * std::exp(eta - m));
}

}  // namespace negdimcd::comparison
