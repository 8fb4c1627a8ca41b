#pragma once

#include <functional>
#include <vector>

namespace negdimcd::quadrature {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

/// n-point rule, computed by Newton iteration on P_n.
Rule gauss_legendre(int n);

/// The 20-point rule used by the composite integrators.
const Rule& gl20();

/// Composite nodes/weights on [a, b]: `panels` equal panels of gl20.
Rule composite(double a, double b, int panels);

double integrate(const std::function<double(double)>& f, double a, double b, int panels);

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
  bool converged = false;
};

/// Doubles the panel count until two successive values agree to
/// max(abs_tol, rel_tol |value|) or max_panels is reached.
Result integrate_doubling(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, double abs_tol = 1e-14, int start_panels = 8,
                          int max_panels = 4096);

}  // namespace negdimcd::quadrature
