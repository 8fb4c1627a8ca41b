#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "negdimcd/check_report.hpp"
#include "negdimcd/scalar_function.hpp"

namespace negdimcd::gradflow {

using Point = std::vector<double>;

/// Euclidean distance.
double distance(const Point& a, const Point& b);

/// A differentiable potential on an open box of R^n.
struct Potential {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  /// One open interval per coordinate. Empty means all of R^n.
  std::vector<Interval> box;

  [[nodiscard]] bool inside(const Point& x) const;

  static Potential from_1d(const ScalarFunction1D& f, Interval domain = {});
  /// <a, x> + c
  static Potential linear(Point a, double c = 0.0);
  /// (K/2)|x|^2
  static Potential quadratic(double K);
  static Potential constant(double c);
};

struct GradientCurve {
  std::vector<double> times;
  std::vector<Point> points;
  std::string method = "rk4";
  double step = 0.0;
  bool truncated = false;
  std::vector<std::string> diagnostics;

  [[nodiscard]] std::size_t size() const { return times.size(); }
  /// Index of the sample closest to t.
  [[nodiscard]] std::size_t index_near(double t) const;
  /// Plain-text table: one line per sample, "t x_1 ... x_n".
  void write_table(std::ostream& os) const;
};

struct IntegrateOptions {
  /// The curve is truncated once |grad f| exceeds this.
  double gradient_cap = 1e8;
  /// How many times a step may be halved to stay inside the box.
  int max_halvings = 30;
};

/// Classical fixed-step RK4 for xi' = -grad f(xi) on [0, T]. Samples are at
/// multiples of step (the last one at T). A step that would leave the box is
/// split into halves; if that does not help, the point is projected back
/// inside and a diagnostic is recorded.
GradientCurve integrate(const Potential& f, const Point& x0, double T, double step,
                        const IntegrateOptions& opts = {});

struct SlopeValue {
  double value = 0.0;
};

/// |grad f|(x) for a smooth potential.
SlopeValue local_slope(const Potential& f, const Point& x);

struct MetricSpeed {
  double value = 0.0;
  bool one_sided = false;
};

/// Central difference of positions over times; one-sided at the endpoints.
MetricSpeed metric_speed(const GradientCurve& curve, std::size_t i);

/// Energy dissipation identity between the samples nearest to s and t.
/// Margin is minus the absolute residual.
CheckReport verify_edi(const GradientCurve& curve, const Potential& f, double s, double t,
                       double tol);

/// Differential EVI_{K,N} at every interior sample. The time derivative is a
/// central difference; the discretization allowance 5 h max|phi''| is added
/// to the reported tolerance.
CheckReport verify_evi(const GradientCurve& curve, const Potential& f, double K, double N,
                       const Point& z, double tol);

/// Differential EVI_K (the N -> -inf form), same discretization as verify_evi.
CheckReport verify_evi_k(const GradientCurve& curve, const Potential& f, double K,
                         const Point& z, double tol);

/// Integrated EVI between the samples nearest to t0 <= t1.
CheckReport verify_evi_integrated(const GradientCurve& curve, const Potential& f, double K,
                                  double N, const Point& z, double t0, double t1, double tol);

/// Uniform regularizing bound at the sample nearest to t > 0.
CheckReport regularizing_bound(const GradientCurve& curve, const Potential& f, double K,
                               double N, const Point& z, double t, double tol);

/// Uniform continuity estimate between the samples nearest to t0 <= t1.
/// Needs inf f; throws std::invalid_argument without it.
CheckReport continuity_estimate(const GradientCurve& curve, const Potential& f, double K,
                                double N, double t0, double t1, std::optional<double> inf_f,
                                double tol);

/// Theta(t0,t1) = (2K + 4L^2/N)(t1 + sqrt(t1 t0) + t0)/3.
double expansion_theta(double K, double N, double L, double t0, double t1);

/// Right-hand side of the expansion bound for squared distances.
double expansion_rhs(double K, double N, double L, double d0, double t0, double t1);

/// Integrates the flows from x and y and checks the expansion bound at every
/// (t0, t1) pair. Throws std::invalid_argument if |grad f| > L somewhere on
/// either trajectory.
CheckReport expansion_bound(const Potential& f, const Point& x, const Point& y, double K,
                            double N, double L,
                            const std::vector<std::pair<double, double>>& time_pairs,
                            double step, double tol);

CheckReport expansion_bound(const Potential& f, const Point& x, const Point& y, double K,
                            double N, double L, double t0, double t1, double step, double tol);

/// d(xi(t), zeta(t)) <= exp(-(K + 2L^2/N) t) d(x, y) at the given times.
CheckReport same_time_contraction(const Potential& f, const Point& x, const Point& y, double K,
                                  double N, double L, const std::vector<double>& times,
                                  double step, double tol);

/// For f with |f'| <= L that passes the (K,N) pointwise check on the grid,
/// checks f'' >= K + L^2/N there. Throws if the hypotheses fail.
CheckReport lipschitz_convexity_claim(const ScalarFunction1D& f, double K, double N, double L,
                                      const std::vector<double>& grid, double tol);

/// f(xi(t)) is non-increasing, up to slack per step.
CheckReport energy_monotone(const GradientCurve& curve, const Potential& f,
                            double slack = 1e-10);

/// |grad f|(xi(t)) <= |xi'|(t) + 5 h at interior samples.
CheckReport slope_below_speed(const GradientCurve& curve, const Potential& f);

}  // namespace negdimcd::gradflow
