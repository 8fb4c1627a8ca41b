#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "negdimcd/check_report.hpp"
#include "negdimcd/scalar_function.hpp"

namespace negdimcd::geometry {

/// A model space carrying the measure e^{-psi} vol.
///
/// Either a weighted interval of the real line (n = 1) or the unit 2-sphere
/// with a weight depending on the polar angle only (n = 2). Points are x on
/// the line and theta in (0, pi) on the sphere; a direction is an angle alpha
/// from the radial direction (ignored on the line).
class WeightedSpace {
 public:
  enum class Kind { kLine, kRotSphere };

  static WeightedSpace line(ScalarFunction1D psi, Interval domain = {});
  /// Rejects weights with psi'(0+) or psi'(pi-) visibly nonzero.
  static WeightedSpace rot_sphere(ScalarFunction1D psi);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] bool is_line() const { return kind_ == Kind::kLine; }
  [[nodiscard]] int n() const { return is_line() ? 1 : 2; }
  [[nodiscard]] const ScalarFunction1D& psi() const { return psi_; }
  [[nodiscard]] const Interval& domain() const { return domain_; }
  [[nodiscard]] bool compact() const { return !is_line(); }

 private:
  WeightedSpace(Kind k, ScalarFunction1D psi, Interval domain)
      : kind_(k), psi_(std::move(psi)), domain_(domain) {}
  Kind kind_;
  ScalarFunction1D psi_;
  Interval domain_;
};

struct RicciValue {
  double value = 0.0;
  /// The pole limit cot(theta) psi'(theta) -> psi''(0) was used.
  bool pole_limit = false;
};

/// Ric_N(v) for the unit vector v at angle alpha from the radial direction.
RicciValue ricci_n(const WeightedSpace& space, double x, double alpha, double N);

/// Ric(v) + Hess psi(v, v), the N -> -inf limit of ricci_n.
double bakry_emery(const WeightedSpace& space, double x, double alpha);

struct CurvatureCertificate {
  double K = 0.0;
  double N = 0.0;
  double inf_point = 0.0;
  double inf_alpha = 0.0;
};

/// Minimum of ricci_n over the grid (and over n_directions angles in
/// [0, pi/2] on the sphere).
CurvatureCertificate min_ricci_n(const WeightedSpace& space, double N,
                                 const std::vector<double>& grid, int n_directions = 33);

/// Delta_m u for u on the line or a radial u(theta) on the sphere.
double laplacian_m(const WeightedSpace& space, const ScalarFunction1D& u, double x);

/// Bochner slack Delta_m(|grad u|^2/2) - <grad Delta_m u, grad u>
///   - Ric_N(grad u) - (Delta_m u)^2 / N at one point.
double bochner_margin_at(const WeightedSpace& space, const ScalarFunction1D& u, double N,
                         double x);

CheckReport bochner_margin(const WeightedSpace& space, const ScalarFunction1D& u, double N,
                           const std::vector<double>& grid, double tol);

/// Eigenvalues of -(w u')' = lambda w u on (a, b) with zero boundary flux,
/// discretized on `cells` cell-centred cells. Returns them ascending.
std::vector<double> sturm_liouville_spectrum(const std::function<double(double)>& w, double a,
                                             double b, int cells);

struct LichnerowiczResult {
  double lambda1 = 0.0;         ///< finest mesh
  double lambda1_half = 0.0;    ///< cells / 2
  double lambda1_quarter = 0.0; ///< cells / 4
  double observed_order = 0.0;
  double K = 0.0;
  double bound = 0.0;
  bool bound_vacuous = false;
  /// Run outside the compact setting (Gaussian line).
  bool advisory = false;
  CheckReport report;
};

/// First nonzero eigenvalue of -Delta_m (radial modes on the sphere) against
/// K N / (N - 1). K defaults to min_ricci_n on a 401-point grid. Lines need a
/// bounded domain and are run in advisory mode.
LichnerowiczResult lichnerowicz(const WeightedSpace& space, double N, int cells, double tol,
                                std::optional<double> K = std::nullopt);

/// (K1 + K2, N1 + N2) for a base (K2, N2) of dimension n with N2 >= n and an
/// extra weight (K1, N1) with N1 < -N2.
std::pair<double, double> weighted_sum_certificate(double K2, double N2, int n, double K1,
                                                   double N1);

/// (K, N1 + N2) for the product of (K, N1) and (K, N2) with N1 < -N2 and
/// N2 >= n2.
std::pair<double, double> product_certificate(double K, double N1, double N2, int n2);

/// On a product of two weighted lines, checks
/// Ric_{N1+N2}(v) >= Ric_{N1}(v1) + Ric_{N2}(v2) at every grid pair and
/// n_directions unit directions.
CheckReport product_chain(const WeightedSpace& first, double N1, const WeightedSpace& second,
                          double N2, const std::vector<double>& grid1,
                          const std::vector<double>& grid2, int n_directions, double tol);

}  // namespace negdimcd::geometry
