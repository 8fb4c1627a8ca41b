#include "negdimcd/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace negdimcd::quadrature {

Rule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
  }
  return r;
}

const Rule& gl20() {
  static const Rule rule = gauss_legendre(20);
  return rule;
}

Rule composite(double a, double b, int panels) {
  if (panels < 1) throw std::invalid_argument("composite: panels must be positive");
  const Rule& g = gl20();
  Rule r;
  r.x.reserve(panels * g.x.size());
  r.w.reserve(panels * g.x.size());
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      r.x.push_back(mid + 0.5 * h * g.x[i]);
      r.w.push_back(0.5 * h * g.w[i]);
    }
  }
  return r;
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels) {
  const Rule r = composite(a, b, panels);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(r.x[i]);
  return s;
}

Result integrate_doubling(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, int start_panels, int max_panels) {
  Result res;
  res.panels = start_panels;
  double prev = integrate(f, a, b, res.panels);
  while (res.panels < max_panels) {
    res.panels *= 2;
    res.value = integrate(f, a, b, res.panels);
    res.error_estimate = std::abs(res.value - prev);
    if (res.error_estimate <= std::max(abs_tol, rel_tol * std::abs(res.value))) {
      res.converged = true;
      return res;
    }
    prev = res.value;
  }
  res.value = prev;
  return res;
}

}  // namespace negdimcd::quadrature
