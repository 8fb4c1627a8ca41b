#pragma once

#include <utility>
#include <vector>

#include "negdimcd/check_report.hpp"
#include "negdimcd/scalar_function.hpp"

namespace negdimcd::convexity {

/// Parameters of a (K,N)-convexity check.
///
/// N < 0 is the case of interest. N > 0 is accepted with the classical
/// (reversed) inequalities so that the sum-rule counterexamples can be
/// checked; N = 0 is rejected.
struct ConvexityParams {
  double K = 0.0;
  double N = -1.0;
  Interval domain;

  ConvexityParams() = default;
  ConvexityParams(double K_, double N_, Interval domain_ = {});
};

/// f_N(x) = exp(-f(x)/N).
double f_n(const ScalarFunction1D& f, double N, double x);

/// Hess f_N(v,v) >= -(K/N) f_N |v|^2 at each grid point (clamped inside the
/// domain). Margin at x is f_N''(x) + (K/N) f_N(x), sign-flipped for N > 0.
CheckReport check_pointwise(const ScalarFunction1D& f, const ConvexityParams& p,
                            const std::vector<double>& grid, double tol);

/// Geodesic form along the segment x0 -> x1:
/// margin(t) = sigma^{(1-t)}_{K/N}(d) f_N(x0) + sigma^{(t)}_{K/N}(d) f_N(x1) - f_N(x_t).
/// Rejects pairs with d >= pi sqrt(N/K) when K/N > 0.
CheckReport check_geodesic(const ScalarFunction1D& f, const ConvexityParams& p, double x0,
                           double x1, const std::vector<double>& t_grid, double tol);

/// Derivative form:
/// margin = f_N(x1) - c_{K/N}(d) f_N(x0) - (s_{K/N}(d)/d) (f_N o gamma)'(0).
/// Rejects x0 == x1.
CheckReport check_derivative(const ScalarFunction1D& f, const ConvexityParams& p, double x0,
                             double x1, double tol);

/// Pointwise check on a Euclidean box, using second differences of f_N along
/// the coordinate directions.
CheckReport check_pointwise_box(
    const std::function<double(const std::vector<double>&)>& f, double K, double N,
    const std::vector<std::vector<double>>& points, double h, double tol);

/// (cK, cN) for c f; (K, N) for f + a. Throws for c <= 0.
std::pair<double, double> scale_shift(double K, double N, double c, double a);

/// (K1 + K2, N1 + N2) for f1 (K1,N1)-convex with N1 < 0 and f2 strongly
/// (K2,N2)-convex with N2 > 0. Requires N1 < -N2.
std::pair<double, double> sum_rule(double K1, double N1, double K2, double N2);

/// Whether (K,N)-convexity implies (K',N')-convexity: K' <= K and N' in [N, 0).
bool mono_rule(double K, double N, double K_prime, double N_prime);

/// The four equality-case families.
enum class ExampleKind { kA, kB, kC, kD };

struct ExampleFunction {
  ScalarFunction1D f;
  Interval domain;
};

/// (a) K>0: -N log cosh(x sqrt(-K/N)) on R.
/// (b) K>0: -N log sinh(x sqrt(-K/N)) on (0, inf).
/// (c) K=0: -N log x on (0, inf).
/// (d) K<0: -N log cos(x sqrt(K/N)) on |x| < (pi/2) sqrt(N/K).
/// All with analytic derivatives; K of the wrong sign is rejected.
ExampleFunction example_function(ExampleKind kind, double K, double N);

ExampleKind parse_example_kind(char c);

/// Plain K-convexity margin along a segment: (1-t)f(x0) + t f(x1) - K/2 (1-t)t d^2 - f(x_t).
double k_convexity_margin(const ScalarFunction1D& f, double K, double x0, double x1, double t);

}  // namespace negdimcd::convexity
