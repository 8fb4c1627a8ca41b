#pragma once

#include <functional>
#include <string>
#include <vector>

#include "negdimcd/check_report.hpp"
#include "negdimcd/geometry.hpp"
#include "negdimcd/scalar_function.hpp"

namespace negdimcd::transport {

/// A probability density on a compact interval [lo, hi] of the real line
/// (Lebesgue density), with tabulated cdf and a monotone quantile.
class Density1D {
 public:
  /// Uniform on [a, b].
  static Density1D uniform(double a, double b);
  /// N(mean, sd^2) truncated at mean +- 8 sd and renormalized.
  static Density1D gaussian(double mean, double sd);
  /// pdf / integral(pdf) on [a, b]; pdf must be positive inside.
  static Density1D from_pdf(ScalarFunction1D pdf, double a, double b, int panels = 256);

  [[nodiscard]] double lo() const { return lo_; }
  [[nodiscard]] double hi() const { return hi_; }
  [[nodiscard]] double pdf(double x) const;
  [[nodiscard]] double pdf_d1(double x) const;
  [[nodiscard]] double cdf(double x) const;
  [[nodiscard]] double quantile(double u) const;
  /// Integral of the raw pdf before normalization.
  [[nodiscard]] double raw_mass() const { return raw_mass_; }
  [[nodiscard]] int panels() const { return static_cast<int>(edges_.size()) - 1; }
  [[nodiscard]] const std::string& label() const { return label_; }

 private:
  friend class GeodesicPath;
  Density1D() = default;
  void build_table(int panels);

  ScalarFunction1D pdf_;
  double lo_ = 0.0, hi_ = 1.0;
  double scale_ = 1.0;
  double raw_mass_ = 1.0;
  std::vector<double> edges_, cum_;
  std::string label_;
  // Set for interpolated measures, whose quantile is known exactly.
  std::function<double(double)> exact_quantile_;
};

struct W2Result {
  double value = 0.0;
  double refined = 0.0;  ///< value at twice the nodes
  bool converged = false;
};

/// W_2 via the quantile coupling, by composite Gauss-Legendre in u with
/// `nodes` nodes; converged when doubling changes the value by <= rel_tol.
W2Result w2(const Density1D& mu0, const Density1D& mu1, int nodes = 10000,
            double rel_tol = 1e-8);

/// A monotone map T with its derivative.
struct TransportPlan1D {
  std::function<double(double)> map;
  std::function<double(double)> d_map;

  /// T = Q1 o F0 and T' = p0 / p1(T).
  static TransportPlan1D monotone(const Density1D& mu0, const Density1D& mu1);
};

/// Displacement interpolation between mu0 and mu1 along T_t = (1-t) id + t T.
class GeodesicPath {
 public:
  GeodesicPath(Density1D mu0, Density1D mu1);

  [[nodiscard]] double map(double x, double t) const;
  /// Lebesgue Jacobian (1-t) + t T'(x).
  [[nodiscard]] double jacobian(double x, double t) const;
  /// Jacobian with respect to m = e^{-psi} dx.
  [[nodiscard]] double m_jacobian(const geometry::WeightedSpace& space, double x, double t) const;
  [[nodiscard]] double quantile(double t, double u) const;
  /// Lebesgue density of mu_t at y, by inverting the quantile.
  [[nodiscard]] double density(double t, double y) const;
  /// mu_t as a standalone density; its quantile is the interpolated one.
  [[nodiscard]] Density1D at(double t, int panels = 256) const;

  [[nodiscard]] const Density1D& mu0() const { return mu0_; }
  [[nodiscard]] const Density1D& mu1() const { return mu1_; }
  [[nodiscard]] const TransportPlan1D& plan() const { return plan_; }

 private:
  Density1D mu0_, mu1_;
  TransportPlan1D plan_;
};

/// Densities below this are clamped (with a diagnostic) where negative
/// powers are taken.
inline constexpr double kDensityFloor = 1e-300;

/// S_N(mu) = int rho^{(N-1)/N} dm with rho = d mu / dm.
double renyi_entropy(const Density1D& mu, const geometry::WeightedSpace& space, double N);
/// Ent_m(mu) = int rho log rho dm.
double relative_entropy(const Density1D& mu, const geometry::WeightedSpace& space);
/// I_m(mu) = int |(log rho)'|^2 d mu.
double fisher_information(const Density1D& mu, const geometry::WeightedSpace& space);

/// Line with psi = x^2/2 + log(2 pi)/2, so that m = N(0,1).
geometry::WeightedSpace standard_gaussian_space();
/// Line with psi = 0.
geometry::WeightedSpace lebesgue_space();
/// Weight x^p on (0, inf), i.e. psi = -p log x.
geometry::WeightedSpace power_weight_space(double p);

enum class CdMode { kCD, kCDStar };

/// For each N' in n_primes and t in t_grid:
///   int [c^{(1-t)}(|T x - x|) rho0(x)^{-1/N'} + c^{(t)}(|T x - x|) rho1(T x)^{-1/N'}] d mu0
///   - S_{N'}(mu_t)
/// with c = tau_{K,N'} (CD) or sigma_{K/N'} (CD*). An infinite coefficient at
/// any node makes that (t, N') trivially true. Margins are kept as samples
/// at (t, N').
CheckReport check_cd(const geometry::WeightedSpace& space, const Density1D& mu0,
                     const Density1D& mu1, double K, double N,
                     const std::vector<double>& n_primes, const std::vector<double>& t_grid,
                     CdMode mode, double tol, int panels = 64);

/// tau^{(1-t)} + tau^{(t)} J_1(x)^{1/N} - J_t(x)^{1/N} at every (x, t), with
/// J_t the m-Jacobian of the given map.
CheckReport check_jacobian_convexity(const geometry::WeightedSpace& space,
                                     const TransportPlan1D& plan, double K, double N,
                                     const std::vector<double>& x_grid,
                                     const std::vector<double>& t_grid, double tol);

/// m[a, b] = int_a^b e^{-psi}.
double measure(const geometry::WeightedSpace& space, const Interval& A);

enum class BmMode { kBM, kBMStar };

/// Brunn-Minkowski for the intervals A0, A1 at time t. The sup of the
/// coefficients is taken over the distance range by sampling.
CheckReport brunn_minkowski(const geometry::WeightedSpace& space, const Interval& A0,
                            const Interval& A1, double t, double K, double N, BmMode mode,
                            double tol);

/// Ent_m(mu_t) = Ent_m(mu0) - int log J_t d mu0.
double entropy_along(const geometry::WeightedSpace& space, const GeodesicPath& path, double t,
                     int panels = 64);

/// (K,N)-convexity of Ent_m along the monotone geodesic, in the form
/// sigma^{(1-t)} E_N(mu0) + sigma^{(t)} E_N(mu1) - E_N(mu_t), E_N = exp(-Ent/N).
CheckReport check_entropic_cd(const geometry::WeightedSpace& space, const Density1D& mu0,
                              const Density1D& mu1, double K, double N,
                              const std::vector<double>& t_grid, double tol);

/// E_N(mu1)/E_N(mu0) - c_{K/N}(W2) - (s_{K/N}(W2)/N) sqrt(I_m(mu0)).
CheckReport hwi_check(const geometry::WeightedSpace& space, const Density1D& mu0,
                      const Density1D& mu1, double K, double N, double tol);

/// Ent_m(mu) + N log cosh(sqrt(-K/N) W2(m, mu)); `m` is the reference
/// measure as a density and must agree with e^{-psi}.
CheckReport talagrand_check(const geometry::WeightedSpace& space, const Density1D& m,
                            const Density1D& mu, double K, double N, double tol);

/// I_m(mu) - K N (exp(2 Ent_m(mu)/N) - 1), vacuous when the admissibility
/// condition fails.
CheckReport log_sobolev_check(const geometry::WeightedSpace& space, const Density1D& m,
                              const Density1D& mu, double K, double N, double tol);

/// Value of the admissibility expression c + (s/N) sqrt(I).
double log_sobolev_admissibility(const geometry::WeightedSpace& space, const Density1D& m,
                                 const Density1D& mu, double K, double N);

struct MongeAmpereResidual {
  double max_abs = 0.0;
  double max_rel = 0.0;
};

/// rho0(x) - rho_t(T_t x) J_t(x) over quadrature nodes of mu0, with rho_t
/// from finite differences of the interpolated quantile. max_abs is scaled by
/// e^{-psi(x)} (Lebesgue density units); max_rel is relative to rho0.
MongeAmpereResidual monge_ampere_residual(const geometry::WeightedSpace& space,
                                          const GeodesicPath& path, double t, int panels = 16);

}  // namespace negdimcd::transport
