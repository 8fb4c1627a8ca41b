#include "negdimcd/scalar_function.hpp"

#include <cmath>
#include <utility>

namespace negdimcd {

bool Interval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

double Interval::clamp_inside(double x, double rel) const {
  const double margin = bounded() ? rel * width() : rel * std::max(1.0, std::abs(x));
  if (std::isfinite(lo) && x < lo + margin) x = lo + margin;
  if (std::isfinite(hi) && x > hi - margin) x = hi - margin;
  return x;
}

ScalarFunction1D::ScalarFunction1D(Fn f, std::optional<Fn> d1, std::optional<Fn> d2,
                                   double fd_step)
    : f_(std::move(f)), d1_(std::move(d1)), d2_(std::move(d2)), fd_step_(fd_step) {}

ScalarFunction1D ScalarFunction1D::constant(double value) {
  return ScalarFunction1D([value](double) { return value; }, Fn([](double) { return 0.0; }),
                          Fn([](double) { return 0.0; }));
}

ScalarFunction1D ScalarFunction1D::quadratic(double a, double b, double c) {
  return ScalarFunction1D([a, b, c](double x) { return (a * x + b) * x + c; },
                          Fn([a, b](double x) { return 2.0 * a * x + b; }),
                          Fn([a](double) { return 2.0 * a; }));
}

double ScalarFunction1D::d1(double x) const {
  if (d1_) return (*d1_)(x);
  const double h = fd_step_;
  // Fourth-order central difference.
  return (f_(x - 2 * h) - 8 * f_(x - h) + 8 * f_(x + h) - f_(x + 2 * h)) / (12 * h);
}

double ScalarFunction1D::d2(double x) const {
  if (d2_) return (*d2_)(x);
  if (d1_) {
    const double h = fd_step_;
    return ((*d1_)(x + h) - (*d1_)(x - h)) / (2 * h);
  }
  // Second differences amplify roundoff by 1/h^2, so they use a wider step.
  const double h = 100.0 * fd_step_;
  return (-f_(x - 2 * h) + 16 * f_(x - h) - 30 * f_(x) + 16 * f_(x + h) - f_(x + 2 * h)) /
         (12 * h * h);
}

ScalarFunction1D ScalarFunction1D::shifted(double a) const {
  auto f = f_;
  return ScalarFunction1D([f, a](double x) { return f(x) + a; }, d1_, d2_, fd_step_);
}

ScalarFunction1D ScalarFunction1D::scaled(double c) const {
  auto f = f_;
  std::optional<Fn> d1, d2;
  if (d1_) d1 = [g = *d1_, c](double x) { return c * g(x); };
  if (d2_) d2 = [g = *d2_, c](double x) { return c * g(x); };
  return ScalarFunction1D([f, c](double x) { return c * f(x); }, d1, d2, fd_step_);
}

ScalarFunction1D ScalarFunction1D::plus(const ScalarFunction1D& g) const {
  auto a = *this;
  auto b = g;
  std::optional<Fn> d1, d2;
  if (has_d1() && g.has_d1()) d1 = [a, b](double x) { return a.d1(x) + b.d1(x); };
  if (has_d2() && g.has_d2()) d2 = [a, b](double x) { return a.d2(x) + b.d2(x); };
  return ScalarFunction1D([a, b](double x) { return a(x) + b(x); }, d1, d2,
                          std::min(fd_step_, g.fd_step_));
}

ScalarFunction1D ScalarFunction1D::without_derivatives(double fd_step) const {
  return ScalarFunction1D(f_, std::nullopt, std::nullopt, fd_step);
}

}  // namespace negdimcd
