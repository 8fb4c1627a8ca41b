#pragma once

#include "negdimcd/ext_real.hpp"

namespace negdimcd::comparison {

/// Below this value of |kappa| * theta^2 the trigonometric/hyperbolic branches
/// are replaced by their Taylor series.
inline constexpr double kSeriesThreshold = 1e-6;

/// Solution of u'' + kappa u = 0 with u(0) = 0, u'(0) = 1.
/// sin(sqrt(k) th)/sqrt(k) for k > 0, th for k = 0, sinh(sqrt(-k) th)/sqrt(-k)
/// for k < 0. Continuous through kappa = 0. Requires theta >= 0.
double s(double kappa, double theta);

/// Solution of u'' + kappa u = 0 with u(0) = 1, u'(0) = 0.
double c(double kappa, double theta);

/// sigma_kappa^{(t)}(theta) = s(kappa, t theta) / s(kappa, theta).
///
/// Returns t at theta = 0, and +infinity when kappa > 0 and
/// theta >= pi / sqrt(kappa).
ExtReal sigma(double kappa, double t, double theta);

/// tau_{K,N}^{(t)}(theta) = t^{1/N} sigma_{K/(N-1)}^{(t)}(theta)^{(N-1)/N}, N < 0.
///
/// Returns 0 at t = 0, and +infinity when K < 0 and
/// theta >= pi sqrt((N-1)/K). Throws std::invalid_argument for N >= 0.
ExtReal tau(double K, double N, double t, double theta);

/// G_t(theta, eta, kappa) = log[sigma_kappa^{(1-t)}(1) e^theta + sigma_kappa^{(t)}(1) e^eta].
/// Requires kappa < pi^2 (throws std::invalid_argument otherwise).
double g_combiner(double t, double theta, double eta, double kappa);

/// pi / sqrt(kappa) for kappa > 0, +inf otherwise: the end of the domain of
/// sigma_kappa in theta.
double sigma_domain_end(double kappa);

}  // namespace negdimcd::comparison
