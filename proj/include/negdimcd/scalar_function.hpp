#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace negdimcd {

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  [[nodiscard]] bool contains(double x) const { return x > lo && x < hi; }
  [[nodiscard]] bool bounded() const;
  [[nodiscard]] double width() const { return hi - lo; }
  /// Moves x a relative 1e-6 of the width inside the interval when it sits on
  /// or beyond an endpoint. Unbounded sides are left alone.
  [[nodiscard]] double clamp_inside(double x, double rel = 1e-6) const;
};

/// A smooth real function of one variable with optional analytic derivatives.
///
/// Missing derivatives fall back to central differences with step fd_step.
class ScalarFunction1D {
 public:
  using Fn = std::function<double(double)>;

  ScalarFunction1D() = default;
  explicit ScalarFunction1D(Fn f, std::optional<Fn> d1 = std::nullopt,
                            std::optional<Fn> d2 = std::nullopt, double fd_step = 1e-5);

  static ScalarFunction1D constant(double value);
  /// a x^2 + b x + c
  static ScalarFunction1D quadratic(double a, double b = 0.0, double c = 0.0);

  double operator()(double x) const { return f_(x); }
  [[nodiscard]] double value(double x) const { return f_(x); }
  [[nodiscard]] double d1(double x) const;
  [[nodiscard]] double d2(double x) const;

  [[nodiscard]] bool has_d1() const { return d1_.has_value(); }
  [[nodiscard]] bool has_d2() const { return d2_.has_value(); }
  /// True when both derivatives are analytic.
  [[nodiscard]] bool analytic() const { return has_d1() && has_d2(); }
  [[nodiscard]] double fd_step() const { return fd_step_; }
  [[nodiscard]] bool valid() const { return static_cast<bool>(f_); }

  /// f + a
  [[nodiscard]] ScalarFunction1D shifted(double a) const;
  /// c f
  [[nodiscard]] ScalarFunction1D scaled(double c) const;
  /// f + g
  [[nodiscard]] ScalarFunction1D plus(const ScalarFunction1D& g) const;

  /// Same function with the derivative evaluators dropped, forcing the
  /// finite-difference path.
  [[nodiscard]] ScalarFunction1D without_derivatives(double fd_step) const;

 private:
  Fn f_;
  std::optional<Fn> d1_;
  std::optional<Fn> d2_;
  double fd_step_ = 1e-5;
};

/// Default tolerance for checks that run on analytic derivatives.
inline constexpr double kAnalyticTolerance = 1e-9;
/// Default tolerance for checks that fall back to finite differences.
inline constexpr double kFiniteDifferenceTolerance = 1e-6;

inline double default_tolerance(const ScalarFunction1D& f) {
  return f.analytic() ? kAnalyticTolerance : kFiniteDifferenceTolerance;
}

}  // namespace negdimcd
