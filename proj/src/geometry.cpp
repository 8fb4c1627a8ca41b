#include "negdimcd/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace negdimcd::geometry {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPoleEps = 1e-7;
constexpr double kBochnerStep = 2e-3;

bool at_pole(double theta) { return std::sin(theta) < kPoleEps; }

void require_negative(double N, const char* who) {
  if (!(N < 0.0)) throw std::invalid_argument(std::string(who) + ": N must be negative");
}

// Ric_N of a weighted line for any N != 1; N == 1 is the unweighted limit,
// finite only where psi' vanishes.
double ricci_line(const ScalarFunction1D& psi, double x, double N) {
  const double d1 = psi.d1(x);
  if (N == 1.0) {
    return d1 == 0.0 ? psi.d2(x) : -std::numeric_limits<double>::infinity();
  }
  return psi.d2(x) - d1 * d1 / (N - 1);
}

// cot(theta) f'(theta), replaced by f''(theta) at the poles.
double cot_times(double theta, double d1, double d2_limit) {
  if (at_pole(theta)) return d2_limit;
  return std::cos(theta) / std::sin(theta) * d1;
}

// Fourth-order central differences.
template <class F>
double fd1(const F& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

template <class F>
double fd2(const F& f, double x, double h) {
  return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) /
         (12 * h * h);
}

}  // namespace

WeightedSpace WeightedSpace::line(ScalarFunction1D psi, Interval domain) {
  if (!psi.valid()) throw std::invalid_argument("line: missing psi");
  return {Kind::kLine, std::move(psi), domain};
}

WeightedSpace WeightedSpace::rot_sphere(ScalarFunction1D psi) {
  if (!psi.valid()) throw std::invalid_argument("rot_sphere: missing psi");
  for (double theta : {1e-6, kPi - 1e-6}) {
    if (std::abs(psi.d1(theta)) > 1e-4) {
      throw std::invalid_argument("rot_sphere: psi'(theta) must vanish at the poles");
    }
  }
  return {Kind::kRotSphere, std::move(psi), Interval{0.0, kPi}};
}

RicciValue ricci_n(const WeightedSpace& space, double x, double alpha, double N) {
  require_negative(N, "ricci_n");
  const ScalarFunction1D& psi = space.psi();
  if (space.is_line()) return {ricci_line(psi, x, N), false};
  const double c2 = std::cos(alpha) * std::cos(alpha);
  const double s2 = 1.0 - c2;
  const double d1 = psi.d1(x), d2 = psi.d2(x);
  const double tangential = cot_times(x, d1, d2);
  const double value = 1.0 + d2 * c2 + tangential * s2 - d1 * d1 * c2 / (N - 2);
  return {value, at_pole(x)};
}

double bakry_emery(const WeightedSpace& space, double x, double alpha) {
  const ScalarFunction1D& psi = space.psi();
  if (space.is_line()) return psi.d2(x);
  const double c2 = std::cos(alpha) * std::cos(alpha);
  const double d2 = psi.d2(x);
  return 1.0 + d2 * c2 + cot_times(x, psi.d1(x), d2) * (1.0 - c2);
}

CurvatureCertificate min_ricci_n(const WeightedSpace& space, double N,
                                 const std::vector<double>& grid, int n_directions) {
  require_negative(N, "min_ricci_n");
  if (grid.empty()) throw std::invalid_argument("min_ricci_n: empty grid");
  CurvatureCertificate cert;
  cert.N = N;
  cert.K = std::numeric_limits<double>::infinity();
  const int dirs = space.is_line() ? 1 : std::max(n_directions, 2);
  for (double x : grid) {
    for (int j = 0; j < dirs; ++j) {
      const double alpha = dirs == 1 ? 0.0 : (kPi / 2) * j / (dirs - 1);
      const double r = ricci_n(space, x, alpha, N).value;
      if (r < cert.K) {
        cert.K = r;
        cert.inf_point = x;
        cert.inf_alpha = alpha;
      }
    }
  }
  return cert;
}

double laplacian_m(const WeightedSpace& space, const ScalarFunction1D& u, double x) {
  const double u1 = u.d1(x), u2 = u.d2(x);
  const double drift = u1 * space.psi().d1(x);
  if (space.is_line()) return u2 - drift;
  return u2 + cot_times(x, u1, u2) - drift;
}

double bochner_margin_at(const WeightedSpace& space, const ScalarFunction1D& u, double N,
                         double x) {
  require_negative(N, "bochner_margin");
  double h = kBochnerStep;
  if (!space.is_line()) {
    if (at_pole(x)) throw std::invalid_argument("bochner_margin: pole points are not supported");
    h = std::min({h, x / 3, (kPi - x) / 3});
  }
  auto g = [&u](double y) {
    const double d = u.d1(y);
    return d * d / 2;
  };
  auto lap = [&](double y) { return laplacian_m(space, u, y); };
  const double u1 = u.d1(x);
  const double g1 = fd1(g, x, h), g2 = fd2(g, x, h);
  const double psi1 = space.psi().d1(x);
  double lap_g = g2 - g1 * psi1;
  if (!space.is_line()) lap_g += cot_times(x, g1, g2);
  const double lap_u = lap(x);
  const double cross = fd1(lap, x, h) * u1;
  const double ric = ricci_n(space, x, 0.0, N).value * u1 * u1;
  return lap_g - cross - ric - lap_u * lap_u / N;
}

CheckReport bochner_margin(const WeightedSpace& space, const ScalarFunction1D& u, double N,
                           const std::vector<double>& grid, double tol) {
  CheckReport rep(tol);
  for (double x : grid) rep.record(bochner_margin_at(space, u, N, x), {x});
  rep.finalize();
  return rep;
}

std::vector<double> sturm_liouville_spectrum(const std::function<double(double)>& w, double a,
                                             double b, int cells) {
  if (cells < 3) throw std::invalid_argument("sturm_liouville_spectrum: need >= 3 cells");
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("sturm_liouville_spectrum: need a bounded interval");
  }
  const double h = (b - a) / cells;
  std::vector<double> face(cells + 1, 0.0), mass(cells);
  for (int k = 1; k < cells; ++k) face[k] = w(a + k * h);
  for (int i = 0; i < cells; ++i) {
    mass[i] = w(a + (i + 0.5) * h);
    if (!(mass[i] > 0.0)) throw std::invalid_argument("sturm_liouville_spectrum: w must be > 0");
  }
  Eigen::VectorXd diag(cells), sub(cells - 1);
  for (int i = 0; i < cells; ++i) diag[i] = (face[i] + face[i + 1]) / (h * h * mass[i]);
  for (int i = 0; i + 1 < cells; ++i) {
    sub[i] = -face[i + 1] / (h * h * std::sqrt(mass[i] * mass[i + 1]));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("sturm_liouville_spectrum: no convergence");
  const Eigen::VectorXd& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

LichnerowiczResult lichnerowicz(const WeightedSpace& space, double N, int cells, double tol,
                                std::optional<double> K) {
  require_negative(N, "lichnerowicz");
  if (cells < 12) throw std::invalid_argument("lichnerowicz: need at least 12 cells");
  LichnerowiczResult res;
  res.report = CheckReport(tol);
  double a = 0.0, b = kPi;
  std::function<double(double)> w;
  const ScalarFunction1D& psi = space.psi();
  if (space.is_line()) {
    a = space.domain().lo;
    b = space.domain().hi;
    if (!std::isfinite(a) || !std::isfinite(b)) {
      throw std::invalid_argument("lichnerowicz: the line needs a bounded domain");
    }
    w = [psi](double x) { return std::exp(-psi(x)); };
    res.advisory = true;
    res.report.diagnostics.emplace_back(
        "advisory: noncompact model truncated to a bounded interval, outside the compact setting");
  } else {
    w = [psi](double t) { return std::sin(t) * std::exp(-psi(t)); };
    res.report.diagnostics.emplace_back("radial spectrum only");
  }

  if (K) {
    res.K = *K;
  } else {
    std::vector<double> grid(401);
    for (int i = 0; i <= 400; ++i) grid[i] = space.domain().clamp_inside(a + (b - a) * i / 400, 0.0);
    if (space.is_line()) {
      grid.front() = a + 1e-9 * (b - a);
      grid.back() = b - 1e-9 * (b - a);
    }
    res.K = min_ricci_n(space, N, grid).K;
  }

  res.lambda1 = sturm_liouville_spectrum(w, a, b, cells).at(1);
  res.lambda1_half = sturm_liouville_spectrum(w, a, b, cells / 2).at(1);
  res.lambda1_quarter = sturm_liouville_spectrum(w, a, b, cells / 4).at(1);
  const double d_fine = res.lambda1_half - res.lambda1;
  const double d_coarse = res.lambda1_quarter - res.lambda1_half;
  res.observed_order = d_fine != 0.0 ? std::log2(std::abs(d_coarse / d_fine)) : 0.0;

  res.bound = res.K * N / (N - 1);
  if (res.K <= 0.0) {
    res.bound_vacuous = true;
    res.report.record_trivial();
  } else {
    res.report.record(res.lambda1 - res.bound, {static_cast<double>(cells)});
  }
  if (std::abs(d_fine) > tol) {
    res.report.mark_inconclusive("lambda1 moved by " + std::to_string(std::abs(d_fine)) +
                                 " under refinement");
  }
  res.report.finalize();
  return res;
}

std::pair<double, double> weighted_sum_certificate(double K2, double N2, int n, double K1,
                                                   double N1) {
  if (!(N2 >= n)) throw std::invalid_argument("weighted_sum_certificate: need N2 >= n");
  if (!(N1 < -N2)) throw std::invalid_argument("weighted_sum_certificate: need N1 < -N2");
  return {K1 + K2, N1 + N2};
}

std::pair<double, double> product_certificate(double K, double N1, double N2, int n2) {
  if (!(N2 >= n2)) throw std::invalid_argument("product_certificate: need N2 >= n2");
  if (!(N1 < -N2)) throw std::invalid_argument("product_certificate: need N1 < -N2");
  return {K, N1 + N2};
}

CheckReport product_chain(const WeightedSpace& first, double N1, const WeightedSpace& second,
                          double N2, const std::vector<double>& grid1,
                          const std::vector<double>& grid2, int n_directions, double tol) {
  if (!first.is_line() || !second.is_line()) {
    throw std::invalid_argument("product_chain: both factors must be weighted lines");
  }
  product_certificate(0.0, N1, N2, 1);
  const double N = N1 + N2;
  CheckReport rep(tol);
  for (double x : grid1) {
    const double a1 = first.psi().d1(x), a2 = first.psi().d2(x);
    const double r1 = ricci_line(first.psi(), x, N1);
    for (double y : grid2) {
      const double b1 = second.psi().d1(y), b2 = second.psi().d2(y);
      const double r2 = ricci_line(second.psi(), y, N2);
      for (int j = 0; j < n_directions; ++j) {
        const double alpha = 2 * kPi * j / n_directions;
        const double v1 = std::cos(alpha), v2 = std::sin(alpha);
        const double drift = a1 * v1 + b1 * v2;
        const double lhs = a2 * v1 * v1 + b2 * v2 * v2 - drift * drift / (N - 2);
        // r2 is -inf for N2 = 1 unless psi2' vanishes; a zero v2 drops it.
        const double rhs = r1 * v1 * v1 + (v2 == 0.0 ? 0.0 : r2 * v2 * v2);
        rep.record(lhs - rhs, {x, y, alpha});
      }
    }
  }
  rep.finalize();
  return rep;
}

}  // namespace negdimcd::geometry
