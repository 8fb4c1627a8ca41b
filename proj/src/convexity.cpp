#include "negdimcd/convexity.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "negdimcd/comparison.hpp"

namespace negdimcd::convexity {

namespace cmp = negdimcd::comparison;

ConvexityParams::ConvexityParams(double K_, double N_, Interval domain_)
    : K(K_), N(N_), domain(domain_) {
  if (N == 0.0 || !std::isfinite(N)) throw std::invalid_argument("N must be nonzero and finite");
}

namespace {

void validate(const ConvexityParams& p) {
  if (p.N == 0.0 || !std::isfinite(p.N)) {
    throw std::invalid_argument("N must be nonzero and finite");
  }
}

// +1 for the N < 0 orientation, -1 for the classical N > 0 orientation.
double orientation(double N) { return N < 0.0 ? 1.0 : -1.0; }

void check_distance(const ConvexityParams& p, double d) {
  const double kappa = p.K / p.N;
  if (kappa > 0.0 && d >= cmp::sigma_domain_end(kappa)) {
    std::ostringstream msg;
    msg << "distance " << d << " is not below pi*sqrt(N/K) = " << cmp::sigma_domain_end(kappa);
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

double f_n(const ScalarFunction1D& f, double N, double x) { return std::exp(-f(x) / N); }

CheckReport check_pointwise(const ScalarFunction1D& f, const ConvexityParams& p,
                            const std::vector<double>& grid, double tol) {
  validate(p);
  CheckReport report(tol);
  const double sign = orientation(p.N);
  for (double raw : grid) {
    const double x = p.domain.clamp_inside(raw);
    const double fx = f(x);
    const double g1 = f.d1(x) / p.N;
    const double g2 = f.d2(x) / p.N;
    const double fn = std::exp(-fx / p.N);
    // f_N'' = f_N ((f'/N)^2 - f''/N)
    const double margin = sign * fn * (g1 * g1 - g2 + p.K / p.N);
    if (!std::isfinite(margin)) {
      std::ostringstream msg;
      msg << "second derivative undefined at x = " << x;
      report.record_failure({x}, msg.str());
      continue;
    }
    report.record(margin, {x});
  }
  report.finalize();
  return report;
}

CheckReport check_geodesic(const ScalarFunction1D& f, const ConvexityParams& p, double x0,
                           double x1, const std::vector<double>& t_grid, double tol) {
  validate(p);
  const double d = std::abs(x1 - x0);
  check_distance(p, d);
  const double kappa = p.K / p.N;
  const double sign = orientation(p.N);
  const double f0 = f_n(f, p.N, x0);
  const double f1 = f_n(f, p.N, x1);
  CheckReport report(tol);
  for (double t : t_grid) {
    const ExtReal a = cmp::sigma(kappa, 1.0 - t, d);
    const ExtReal b = cmp::sigma(kappa, t, d);
    if (a.is_infinite() || b.is_infinite()) {
      report.record_trivial();
      continue;
    }
    const double xt = (1.0 - t) * x0 + t * x1;
    const double margin = sign * (a.value() * f0 + b.value() * f1 - f_n(f, p.N, xt));
    report.record(margin, {x0, x1, t});
  }
  report.finalize();
  return report;
}

CheckReport check_derivative(const ScalarFunction1D& f, const ConvexityParams& p, double x0,
                             double x1, double tol) {
  validate(p);
  const double d = std::abs(x1 - x0);
  if (d == 0.0) throw std::invalid_argument("check_derivative needs a nonconstant geodesic");
  check_distance(p, d);
  const double kappa = p.K / p.N;
  const double f0 = f_n(f, p.N, x0);
  const double f1 = f_n(f, p.N, x1);
  // (f_N o gamma)'(0) = f_N'(x0) (x1 - x0), f_N' = -f' f_N / N
  const double slope = -f.d1(x0) / p.N * f0 * (x1 - x0);
  const double margin =
      orientation(p.N) * (f1 - cmp::c(kappa, d) * f0 - cmp::s(kappa, d) / d * slope);
  CheckReport report(tol);
  if (!std::isfinite(margin)) {
    report.record_failure({x0, x1}, "derivative undefined at x0");
  } else {
    report.record(margin, {x0, x1});
  }
  report.finalize();
  return report;
}

CheckReport check_pointwise_box(
    const std::function<double(const std::vector<double>&)>& f, double K, double N,
    const std::vector<std::vector<double>>& points, double h, double tol) {
  if (N == 0.0) throw std::invalid_argument("N must be nonzero");
  const double sign = orientation(N);
  auto fn = [&](const std::vector<double>& x) { return std::exp(-f(x) / N); };
  CheckReport report(tol);
  for (const auto& x : points) {
    const double center = fn(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto xp = x;
      auto xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double second = (fn(xp) - 2.0 * center + fn(xm)) / (h * h);
      auto loc = x;
      loc.push_back(static_cast<double>(i));
      report.record(sign * (second + K / N * center), std::move(loc));
    }
  }
  report.finalize();
  return report;
}

std::pair<double, double> scale_shift(double K, double N, double c, double /*a*/) {
  if (!(c > 0.0)) throw std::invalid_argument("scale factor c must be positive");
  return {c * K, c * N};
}

std::pair<double, double> sum_rule(double K1, double N1, double K2, double N2) {
  if (!(N2 > 0.0) || !(N1 < -N2)) {
    std::ostringstream msg;
    msg << "sum rule needs N2 > 0 and N1 < -N2 (got N1 = " << N1 << ", N2 = " << N2
        << "); outside this range it fails, e.g. f1 = 0 is (0,-1)-convex and "
           "f2 = -2 log x is (0,2)-convex on (0,inf) but f1 + f2 is not (0,1)-convex";
    throw std::invalid_argument(msg.str());
  }
  return {K1 + K2, N1 + N2};
}

bool mono_rule(double K, double N, double K_prime, double N_prime) {
  if (!(N < 0.0)) throw std::invalid_argument("N must be negative");
  return K_prime <= K && N_prime >= N && N_prime < 0.0;
}

ExampleKind parse_example_kind(char c) {
  switch (c) {
    case 'a': return ExampleKind::kA;
    case 'b': return ExampleKind::kB;
    case 'c': return ExampleKind::kC;
    case 'd': return ExampleKind::kD;
    default: throw std::invalid_argument(std::string("unknown example kind '") + c + "'");
  }
}

ExampleFunction example_function(ExampleKind kind, double K, double N) {
  using Fn = ScalarFunction1D::Fn;
  if (!(N < 0.0)) throw std::invalid_argument("N must be negative");
  constexpr double kLn2 = std::numbers::ln2;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  switch (kind) {
    case ExampleKind::kA: {
      if (!(K > 0.0)) throw std::invalid_argument("example (a) needs K > 0");
      const double a = std::sqrt(-K / N);
      auto log_cosh = [](double y) {
        const double ay = std::abs(y);
        return ay + std::log1p(std::exp(-2.0 * ay)) - kLn2;
      };
      return {ScalarFunction1D([=](double x) { return -N * log_cosh(a * x); },
                               Fn([=](double x) { return -N * a * std::tanh(a * x); }),
                               Fn([=](double x) {
                                 const double sech = 1.0 / std::cosh(a * x);
                                 return -N * a * a * sech * sech;
                               })),
              Interval{-kInf, kInf}};
    }
    case ExampleKind::kB: {
      if (!(K > 0.0)) throw std::invalid_argument("example (b) needs K > 0");
      const double a = std::sqrt(-K / N);
      auto log_sinh = [](double y) { return y + std::log(-std::expm1(-2.0 * y)) - kLn2; };
      return {ScalarFunction1D([=](double x) { return -N * log_sinh(a * x); },
                               Fn([=](double x) { return -N * a / std::tanh(a * x); }),
                               Fn([=](double x) {
                                 const double csch = 1.0 / std::sinh(a * x);
                                 return N * a * a * csch * csch;
                               })),
              Interval{0.0, kInf}};
    }
    case ExampleKind::kC: {
      if (K != 0.0) throw std::invalid_argument("example (c) needs K = 0");
      return {ScalarFunction1D([=](double x) { return -N * std::log(x); },
                               Fn([=](double x) { return -N / x; }),
                               Fn([=](double x) { return N / (x * x); })),
              Interval{0.0, kInf}};
    }
    case ExampleKind::kD: {
      if (!(K < 0.0)) throw std::invalid_argument("example (d) needs K < 0");
      const double b = std::sqrt(K / N);
      const double end = std::numbers::pi / (2.0 * b);
      return {ScalarFunction1D([=](double x) { return -N * std::log(std::cos(b * x)); },
                               Fn([=](double x) { return N * b * std::tan(b * x); }),
                               Fn([=](double x) {
                                 const double sec = 1.0 / std::cos(b * x);
                                 return N * b * b * sec * sec;
                               })),
              Interval{-end, end}};
    }
  }
  throw std::invalid_argument("unknown example kind");
}

double k_convexity_margin(const ScalarFunction1D& f, double K, double x0, double x1, double t) {
  const double d = x1 - x0;
  return (1.0 - t) * f(x0) + t * f(x1) - 0.5 * K * (1.0 - t) * t * d * d -
         f((1.0 - t) * x0 + t * x1);
}

}  // namespace negdimcd::convexity
