#include "negdimcd/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "negdimcd/comparison.hpp"
#include "negdimcd/quadrature.hpp"

namespace negdimcd::transport {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTruncation = 8.0;

double psi_at(const geometry::WeightedSpace& space, double x) { return space.psi()(x); }

void require_inside(const geometry::WeightedSpace& space, const Density1D& mu, const char* who) {
  const Interval& d = space.domain();
  if (mu.lo() < d.lo || mu.hi() > d.hi) {
    throw std::invalid_argument(std::string(who) + ": support leaves the space's domain");
  }
}

double floor_density(double rho, bool& clamped) {
  if (rho < kDensityFloor) {
    clamped = true;
    return kDensityFloor;
  }
  return rho;
}

// Integrates f over the support of mu with node doubling.
double integrate_support(const Density1D& mu, const std::function<double(double)>& f) {
  return quadrature::integrate_doubling(f, mu.lo(), mu.hi(), 1e-13, 1e-15, 8, 2048).value;
}

ExtReal coefficient(CdMode mode, double K, double N, double t, double d) {
  if (mode == CdMode::kCD) return comparison::tau(K, N, t, d);
  return comparison::sigma(K / N, t, d);
}

}  // namespace

// ---------------------------------------------------------------------------
// Density1D

Density1D Density1D::uniform(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("uniform: need a < b");
  Density1D d;
  d.pdf_ = ScalarFunction1D::constant(1.0);
  d.lo_ = a;
  d.hi_ = b;
  d.raw_mass_ = b - a;
  d.scale_ = 1.0 / (b - a);
  d.label_ = "uniform";
  d.build_table(16);
  return d;
}

Density1D Density1D::gaussian(double mean, double sd) {
  if (!(sd > 0.0)) throw std::invalid_argument("gaussian: sd must be positive");
  Density1D d;
  const double norm = 1.0 / (sd * std::sqrt(2 * kPi));
  d.pdf_ = ScalarFunction1D(
      [=](double x) {
        const double z = (x - mean) / sd;
        return norm * std::exp(-z * z / 2);
      },
      ScalarFunction1D::Fn([=](double x) {
        const double z = (x - mean) / sd;
        return -z / sd * norm * std::exp(-z * z / 2);
      }),
      ScalarFunction1D::Fn([=](double x) {
        const double z = (x - mean) / sd;
        return (z * z - 1) / (sd * sd) * norm * std::exp(-z * z / 2);
      }));
  d.lo_ = mean - kTruncation * sd;
  d.hi_ = mean + kTruncation * sd;
  d.raw_mass_ = 1.0 - std::erfc(kTruncation / std::sqrt(2.0));
  d.scale_ = 1.0 / d.raw_mass_;
  d.label_ = "gaussian";
  d.build_table(256);
  return d;
}

Density1D Density1D::from_pdf(ScalarFunction1D pdf, double a, double b, int panels) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("from_pdf: need a bounded interval a < b");
  }
  Density1D d;
  d.pdf_ = std::move(pdf);
  d.lo_ = a;
  d.hi_ = b;
  const auto q = quadrature::integrate_doubling([&](double x) { return d.pdf_(x); }, a, b, 1e-14,
                                                1e-300, 16, 4096);
  if (!(q.value > 0.0) || !std::isfinite(q.value)) {
    throw std::invalid_argument("from_pdf: pdf must have positive finite mass");
  }
  d.raw_mass_ = q.value;
  d.scale_ = 1.0 / q.value;
  d.label_ = "pdf";
  d.build_table(panels);
  return d;
}

void Density1D::build_table(int panels) {
  const quadrature::Rule& g = quadrature::gl20();
  edges_.resize(panels + 1);
  cum_.assign(panels + 1, 0.0);
  const double h = (hi_ - lo_) / panels;
  for (int k = 0; k <= panels; ++k) edges_[k] = lo_ + k * h;
  edges_[panels] = hi_;
  for (int k = 0; k < panels; ++k) {
    const double mid = edges_[k] + h / 2;
    double s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * pdf_(mid + h / 2 * g.x[i]);
    cum_[k + 1] = cum_[k] + s * h / 2 * scale_;
  }
}

double Density1D::pdf(double x) const {
  if (x < lo_ || x > hi_) return 0.0;
  return scale_ * pdf_(x);
}

double Density1D::pdf_d1(double x) const {
  if (x < lo_ || x > hi_) return 0.0;
  return scale_ * pdf_.d1(x);
}

double Density1D::cdf(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  const int n = panels();
  const double h = (hi_ - lo_) / n;
  const int k = std::clamp(static_cast<int>((x - lo_) / h), 0, n - 1);
  const double a = edges_[k];
  if (x == a) return cum_[k];
  const quadrature::Rule& g = quadrature::gl20();
  const double half = (x - a) / 2, mid = a + half;
  double s = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * pdf_(mid + half * g.x[i]);
  return std::min(1.0, cum_[k] + s * half * scale_);
}

double Density1D::quantile(double u) const {
  if (u <= 0.0) return lo_;
  if (u >= 1.0) return hi_;
  if (exact_quantile_) return exact_quantile_(u);
  const int n = panels();
  auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  int k = static_cast<int>(it - cum_.begin()) - 1;
  if (k >= n) return hi_;
  k = std::max(k, 0);
  double a = edges_[k], b = edges_[k + 1];
  const double span = cum_[k + 1] - cum_[k];
  double x = span > 0 ? a + (b - a) * (u - cum_[k]) / span : 0.5 * (a + b);
  for (int iter = 0; iter < 100; ++iter) {
    const double r = cdf(x) - u;
    if (r == 0.0) return x;
    if (r > 0) b = x;
    else a = x;
    const double p = pdf(x);
    double next = p > 0 ? x - r / p : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 4e-16 * (std::abs(x) + (hi_ - lo_) / n) || b - a <= 4e-16 * (std::abs(x) + 1)) {
      break;
    }
  }
  return x;
}

// ---------------------------------------------------------------------------
// Transport

W2Result w2(const Density1D& mu0, const Density1D& mu1, int nodes, double rel_tol) {
  auto sq = [&](double u) {
    const double d = mu0.quantile(u) - mu1.quantile(u);
    return d * d;
  };
  const int panels = std::max(1, nodes / 20);
  W2Result r;
  r.value = std::sqrt(quadrature::integrate(sq, 0.0, 1.0, panels));
  r.refined = std::sqrt(quadrature::integrate(sq, 0.0, 1.0, 2 * panels));
  r.converged = std::abs(r.value - r.refined) <= rel_tol * std::max(1.0, r.refined);
  return r;
}

TransportPlan1D TransportPlan1D::monotone(const Density1D& mu0, const Density1D& mu1) {
  TransportPlan1D plan;
  plan.map = [mu0, mu1](double x) { return mu1.quantile(mu0.cdf(x)); };
  plan.d_map = [mu0, mu1](double x) {
    const double y = mu1.quantile(mu0.cdf(x));
    return mu0.pdf(x) / mu1.pdf(y);
  };
  return plan;
}

GeodesicPath::GeodesicPath(Density1D mu0, Density1D mu1)
    : mu0_(std::move(mu0)), mu1_(std::move(mu1)), plan_(TransportPlan1D::monotone(mu0_, mu1_)) {}

double GeodesicPath::map(double x, double t) const {
  return (1 - t) * x + t * plan_.map(x);
}

double GeodesicPath::jacobian(double x, double t) const {
  const double j = (1 - t) + t * plan_.d_map(x);
  if (!(j > 0.0)) throw std::domain_error("transport map is not increasing");
  return j;
}

double GeodesicPath::m_jacobian(const geometry::WeightedSpace& space, double x, double t) const {
  return std::exp(psi_at(space, x) - psi_at(space, map(x, t))) * jacobian(x, t);
}

double GeodesicPath::quantile(double t, double u) const {
  return (1 - t) * mu0_.quantile(u) + t * mu1_.quantile(u);
}

double GeodesicPath::density(double t, double y) const {
  if (t == 0.0) return mu0_.pdf(y);
  if (t == 1.0) return mu1_.pdf(y);
  if (y < quantile(t, 0.0) || y > quantile(t, 1.0)) return 0.0;
  // Safeguarded Newton in u on Q_t(u) = y, with Q_t' = (1-t)/p0 + t/p1.
  double a = 0.0, b = 1.0, u = 0.5;
  double x = mu0_.quantile(u);
  for (int i = 0; i < 200 && b - a > 1e-17; ++i) {
    const double x1 = mu1_.quantile(u);
    const double r = (1 - t) * x + t * x1 - y;
    if (r == 0.0) break;
    if (r < 0) a = u;
    else b = u;
    const double p0 = mu0_.pdf(x), p1 = mu1_.pdf(x1);
    double next = 0.5 * (a + b);
    if (p0 > 0 && p1 > 0) {
      const double cand = u - r / ((1 - t) / p0 + t / p1);
      if (cand > a && cand < b) next = cand;
    }
    const bool done = std::abs(next - u) <= 1e-16 * std::max(u, 1e-300);
    u = next;
    x = mu0_.quantile(u);
    if (done) break;
  }
  return mu0_.pdf(x) / jacobian(x, t);
}

Density1D GeodesicPath::at(double t, int panels) const {
  if (t == 0.0) return mu0_;
  if (t == 1.0) return mu1_;
  const GeodesicPath self = *this;
  Density1D d =
      Density1D::from_pdf(ScalarFunction1D([self, t](double y) { return self.density(t, y); }),
                          quantile(t, 0.0), quantile(t, 1.0), panels);
  d.exact_quantile_ = [self, t](double u) { return self.quantile(t, u); };
  d.label_ = "interpolated";
  return d;
}

// ---------------------------------------------------------------------------
// Entropies

double renyi_entropy(const Density1D& mu, const geometry::WeightedSpace& space, double N) {
  require_inside(space, mu, "renyi_entropy");
  if (N == 0.0) throw std::invalid_argument("renyi_entropy: N must be nonzero");
  return integrate_support(mu, [&](double x) {
    const double p = mu.pdf(x);
    if (p <= 0.0) return 0.0;
    return std::pow(p, (N - 1) / N) * std::exp(-psi_at(space, x) / N);
  });
}

double relative_entropy(const Density1D& mu, const geometry::WeightedSpace& space) {
  require_inside(space, mu, "relative_entropy");
  return integrate_support(mu, [&](double x) {
    const double p = mu.pdf(x);
    if (p <= 0.0) return 0.0;
    return p * (std::log(p) + psi_at(space, x));
  });
}

double fisher_information(const Density1D& mu, const geometry::WeightedSpace& space) {
  require_inside(space, mu, "fisher_information");
  return integrate_support(mu, [&](double x) {
    const double p = mu.pdf(x);
    if (p <= 0.0) return 0.0;
    const double score = mu.pdf_d1(x) / p + space.psi().d1(x);
    return score * score * p;
  });
}

geometry::WeightedSpace standard_gaussian_space() {
  const double c = 0.5 * std::log(2 * kPi);
  return geometry::WeightedSpace::line(ScalarFunction1D([c](double x) { return x * x / 2 + c; },
                                                        ScalarFunction1D::Fn([](double x) { return x; }),
                                                        ScalarFunction1D::Fn([](double) { return 1.0; })));
}

geometry::WeightedSpace lebesgue_space() {
  return geometry::WeightedSpace::line(ScalarFunction1D::constant(0.0));
}

geometry::WeightedSpace power_weight_space(double p) {
  return geometry::WeightedSpace::line(
      ScalarFunction1D([p](double x) { return -p * std::log(x); },
                       ScalarFunction1D::Fn([p](double x) { return -p / x; }),
                       ScalarFunction1D::Fn([p](double x) { return p / (x * x); })),
      Interval{0.0, std::numeric_limits<double>::infinity()});
}

// ---------------------------------------------------------------------------
// Curvature-dimension checks

namespace {

struct CdNode {
  double x, w;  // quadrature node and weight times p0
  double rho0, rho1, tx, dtx, psi_x;
};

std::vector<CdNode> cd_nodes(const geometry::WeightedSpace& space, const Density1D& mu0,
                             const Density1D& mu1, const TransportPlan1D& plan, int panels,
                             bool& clamped) {
  const quadrature::Rule r = quadrature::composite(mu0.lo(), mu0.hi(), panels);
  std::vector<CdNode> nodes;
  nodes.reserve(r.x.size());
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    CdNode n{};
    n.x = r.x[i];
    const double p0 = mu0.pdf(n.x);
    n.w = r.w[i] * p0;
    n.tx = plan.map(n.x);
    n.dtx = plan.d_map(n.x);
    n.psi_x = psi_at(space, n.x);
    n.rho0 = floor_density(p0 * std::exp(n.psi_x), clamped);
    n.rho1 = floor_density(mu1.pdf(n.tx) * std::exp(psi_at(space, n.tx)), clamped);
    nodes.push_back(n);
  }
  return nodes;
}

struct CdMargin {
  bool trivial = false;
  double margin = 0.0;
};

CdMargin cd_margin(const geometry::WeightedSpace& space, const std::vector<CdNode>& nodes,
                   double K, double Np, double t, CdMode mode) {
  double rhs = 0.0, lhs = 0.0;
  for (const CdNode& n : nodes) {
    const double d = std::abs(n.tx - n.x);
    const ExtReal c0 = coefficient(mode, K, Np, 1 - t, d);
    const ExtReal c1 = coefficient(mode, K, Np, t, d);
    if (c0.is_infinite() || c1.is_infinite()) return {true, 0.0};
    rhs += n.w * (c0.value() * std::pow(n.rho0, -1 / Np) + c1.value() * std::pow(n.rho1, -1 / Np));
    const double xt = (1 - t) * n.x + t * n.tx;
    const double jt = std::exp(n.psi_x - psi_at(space, xt)) * ((1 - t) + t * n.dtx);
    if (!(jt > 0.0)) throw std::domain_error("check_cd: transport map is not increasing");
    lhs += n.w * std::pow(jt / n.rho0, 1 / Np);
  }
  return {false, rhs - lhs};
}

}  // namespace

CheckReport check_cd(const geometry::WeightedSpace& space, const Density1D& mu0,
                     const Density1D& mu1, double K, double N,
                     const std::vector<double>& n_primes, const std::vector<double>& t_grid,
                     CdMode mode, double tol, int panels) {
  if (!(N < 0.0)) throw std::invalid_argument("check_cd: N must be negative");
  require_inside(space, mu0, "check_cd");
  require_inside(space, mu1, "check_cd");
  for (double Np : n_primes) {
    if (!(Np >= N && Np < 0.0)) throw std::invalid_argument("check_cd: need N' in [N, 0)");
  }
  for (double t : t_grid) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("check_cd: t outside [0,1]");
  }
  const TransportPlan1D plan = TransportPlan1D::monotone(mu0, mu1);
  bool clamped = false;
  const auto coarse = cd_nodes(space, mu0, mu1, plan, panels, clamped);
  const auto fine = cd_nodes(space, mu0, mu1, plan, 2 * panels, clamped);
  CheckReport rep(tol);
  double worst_shift = 0.0;
  for (double Np : n_primes) {
    for (double t : t_grid) {
      const CdMargin m = cd_margin(space, fine, K, Np, t, mode);
      if (m.trivial) {
        rep.record_trivial();
        continue;
      }
      const CdMargin mc = cd_margin(space, coarse, K, Np, t, mode);
      worst_shift = std::max(worst_shift, std::abs(m.margin - mc.margin));
      rep.record(m.margin, {t, Np}, true);
    }
  }
  if (clamped) rep.diagnostics.emplace_back("density clamped at 1e-300");
  if (worst_shift > std::max(tol, 1e-9)) {
    rep.mark_inconclusive("quadrature moved a margin by " + std::to_string(worst_shift) +
                          " under node doubling");
  }
  rep.finalize();
  return rep;
}

CheckReport check_jacobian_convexity(const geometry::WeightedSpace& space,
                                     const TransportPlan1D& plan, double K, double N,
                                     const std::vector<double>& x_grid,
                                     const std::vector<double>& t_grid, double tol) {
  if (!(N < 0.0)) throw std::invalid_argument("check_jacobian_convexity: N must be negative");
  CheckReport rep(tol);
  for (double x : x_grid) {
    const double tx = plan.map(x), dtx = plan.d_map(x);
    const double d = std::abs(tx - x);
    const double psi_x = psi_at(space, x);
    auto jac = [&](double t) {
      const double j = std::exp(psi_x - psi_at(space, (1 - t) * x + t * tx)) * ((1 - t) + t * dtx);
      if (!(j > 0.0)) throw std::domain_error("check_jacobian_convexity: map is not increasing");
      return j;
    };
    const double j1 = jac(1.0);
    for (double t : t_grid) {
      const ExtReal c0 = comparison::tau(K, N, 1 - t, d);
      const ExtReal c1 = comparison::tau(K, N, t, d);
      if (c0.is_infinite() || c1.is_infinite()) {
        rep.record_trivial();
        continue;
      }
      const double margin =
          c0.value() + c1.value() * std::pow(j1, 1 / N) - std::pow(jac(t), 1 / N);
      rep.record(margin, {x, t});
    }
  }
  rep.finalize();
  return rep;
}

double measure(const geometry::WeightedSpace& space, const Interval& A) {
  if (!(A.lo < A.hi)) throw std::invalid_argument("measure: empty interval");
  return quadrature::integrate_doubling([&](double x) { return std::exp(-psi_at(space, x)); },
                                        A.lo, A.hi, 1e-15, 1e-300, 8, 8192)
      .value;
}

CheckReport brunn_minkowski(const geometry::WeightedSpace& space, const Interval& A0,
                            const Interval& A1, double t, double K, double N, BmMode mode,
                            double tol) {
  if (!(N < 0.0)) throw std::invalid_argument("brunn_minkowski: N must be negative");
  if (!(A0.lo < A0.hi) || !(A1.lo < A1.hi)) {
    throw std::invalid_argument("brunn_minkowski: empty interval");
  }
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("brunn_minkowski: t outside [0,1]");
  const double diam = std::max(A0.hi, A1.hi) - std::min(A0.lo, A1.lo);
  if (K < 0.0) {
    const double reach = mode == BmMode::kBM ? kPi * std::sqrt((N - 1) / K) : kPi * std::sqrt(N / K);
    if (!(diam < reach)) throw std::invalid_argument("brunn_minkowski: diameter out of range");
  }
  const CdMode cmode = mode == BmMode::kBM ? CdMode::kCD : CdMode::kCDStar;
  const double dmin = std::max({0.0, A1.lo - A0.hi, A0.lo - A1.hi});
  const double dmax = std::max(A1.hi - A0.lo, A0.hi - A1.lo);
  constexpr int kSamples = 65;
  double sup0 = 0.0, sup1 = 0.0;
  CheckReport rep(tol);
  for (int i = 0; i < kSamples; ++i) {
    const double d = dmin + (dmax - dmin) * i / (kSamples - 1);
    const ExtReal c0 = coefficient(cmode, K, N, 1 - t, d);
    const ExtReal c1 = coefficient(cmode, K, N, t, d);
    if (c0.is_infinite() || c1.is_infinite()) {
      rep.record_trivial();
      rep.finalize();
      return rep;
    }
    sup0 = std::max(sup0, c0.value());
    sup1 = std::max(sup1, c1.value());
  }
  const Interval At{(1 - t) * A0.lo + t * A1.lo, (1 - t) * A0.hi + t * A1.hi};
  const double m0 = measure(space, A0), m1 = measure(space, A1), mt = measure(space, At);
  const double margin =
      sup0 * std::pow(m0, 1 / N) + sup1 * std::pow(m1, 1 / N) - std::pow(mt, 1 / N);
  rep.record(margin, {t});
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Entropic curvature-dimension and functional inequalities

double entropy_along(const geometry::WeightedSpace& space, const GeodesicPath& path, double t,
                     int panels) {
  const double ent0 = relative_entropy(path.mu0(), space);
  if (t == 0.0) return ent0;
  const quadrature::Rule r = quadrature::composite(path.mu0().lo(), path.mu0().hi(), panels);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    s += r.w[i] * path.mu0().pdf(r.x[i]) * std::log(path.m_jacobian(space, r.x[i], t));
  }
  return ent0 - s;
}

CheckReport check_entropic_cd(const geometry::WeightedSpace& space, const Density1D& mu0,
                              const Density1D& mu1, double K, double N,
                              const std::vector<double>& t_grid, double tol) {
  if (!(N < 0.0)) throw std::invalid_argument("check_entropic_cd: N must be negative");
  const double W = w2(mu0, mu1).value;
  if (K < 0.0 && !(W < kPi * std::sqrt(N / K))) {
    throw std::invalid_argument("check_entropic_cd: W2 out of range");
  }
  const GeodesicPath path(mu0, mu1);
  const double e0 = std::exp(-relative_entropy(mu0, space) / N);
  const double e1 = std::exp(-relative_entropy(mu1, space) / N);
  CheckReport rep(tol);
  for (double t : t_grid) {
    const double et = std::exp(-entropy_along(space, path, t) / N);
    const double c0 = comparison::sigma(K / N, 1 - t, W).value();
    const double c1 = comparison::sigma(K / N, t, W).value();
    rep.record(c0 * e0 + c1 * e1 - et, {t}, true);
  }
  rep.finalize();
  return rep;
}

CheckReport hwi_check(const geometry::WeightedSpace& space, const Density1D& mu0,
                      const Density1D& mu1, double K, double N, double tol) {
  if (!(N < 0.0)) throw std::invalid_argument("hwi_check: N must be negative");
  const double W = w2(mu0, mu1).value;
  if (K < 0.0 && !(W <= kPi * std::sqrt(N / K))) {
    throw std::invalid_argument("hwi_check: W2 out of range");
  }
  const double ratio =
      std::exp(-(relative_entropy(mu1, space) - relative_entropy(mu0, space)) / N);
  const double kappa = K / N;
  const double margin = ratio - comparison::c(kappa, W) -
                        comparison::s(kappa, W) / N * std::sqrt(fisher_information(mu0, space));
  CheckReport rep(tol);
  rep.record(margin, {W});
  rep.finalize();
  return rep;
}

namespace {

void require_reference(const geometry::WeightedSpace& space, const Density1D& m, double K,
                       double N, const char* who) {
  if (!(K > 0.0) || !(N < 0.0)) throw std::invalid_argument(std::string(who) + ": need K > 0, N < 0");
  const double mass = measure(space, {m.lo(), m.hi()});
  bool match = std::abs(mass - 1.0) <= 1e-6;
  for (int i = 1; i < 16 && match; ++i) {
    const double x = m.lo() + (m.hi() - m.lo()) * i / 16;
    const double w = std::exp(-psi_at(space, x));
    match = std::abs(m.pdf(x) - w) <= 1e-6 * std::max(1.0, w);
  }
  if (!match) {
    throw std::invalid_argument(std::string(who) + ": reference density does not match e^{-psi}");
  }
}

}  // namespace

CheckReport talagrand_check(const geometry::WeightedSpace& space, const Density1D& m,
                            const Density1D& mu, double K, double N, double tol) {
  require_reference(space, m, K, N, "talagrand_check");
  const double W = w2(m, mu).value;
  const double margin =
      relative_entropy(mu, space) + N * std::log(std::cosh(std::sqrt(-K / N) * W));
  CheckReport rep(tol);
  rep.record(margin, {W});
  rep.finalize();
  return rep;
}

double log_sobolev_admissibility(const geometry::WeightedSpace& space, const Density1D& m,
                                 const Density1D& mu, double K, double N) {
  const double W = w2(mu, m).value;
  return comparison::c(K / N, W) +
         comparison::s(K / N, W) / N * std::sqrt(fisher_information(mu, space));
}

CheckReport log_sobolev_check(const geometry::WeightedSpace& space, const Density1D& m,
                              const Density1D& mu, double K, double N, double tol) {
  require_reference(space, m, K, N, "log_sobolev_check");
  CheckReport rep(tol);
  if (!(log_sobolev_admissibility(space, m, mu, K, N) > 0.0)) {
    rep.record_trivial();
    rep.diagnostics.emplace_back("inadmissible, vacuous");
    rep.finalize();
    return rep;
  }
  const double I = fisher_information(mu, space);
  const double margin = I - K * N * std::expm1(2 * relative_entropy(mu, space) / N);
  rep.record(margin, {I});
  rep.finalize();
  return rep;
}

MongeAmpereResidual monge_ampere_residual(const geometry::WeightedSpace& space,
                                          const GeodesicPath& path, double t, int panels) {
  const Density1D& mu0 = path.mu0();
  const quadrature::Rule r = quadrature::composite(mu0.lo(), mu0.hi(), panels);
  MongeAmpereResidual res;
  for (double x : r.x) {
    const double u = mu0.cdf(x);
    const double h = std::clamp(1e-4 * std::min(u, 1 - u), 1e-12, 1e-6);
    double slope;
    if (u - h >= 0.0 && u + h <= 1.0) {
      slope = (path.quantile(t, u + h) - path.quantile(t, u - h)) / (2 * h);
    } else if (u + h <= 1.0) {
      slope = (path.quantile(t, u + h) - path.quantile(t, u)) / h;
    } else {
      slope = (path.quantile(t, u) - path.quantile(t, u - h)) / h;
    }
    const double pt = 1.0 / slope;
    const double xt = path.map(x, t);
    // rho0 - rho_t(T_t x) J_t, scaled by e^{-psi(x)} so that far tails of a
    // heavy weight do not dominate; this is p0(x) - p_t(T_t x) J_t^{Leb}(x).
    const double ex = std::exp(psi_at(space, x));
    const double rho0 = mu0.pdf(x) * ex;
    const double rhot = pt * std::exp(psi_at(space, xt));
    const double diff = std::abs(rho0 - rhot * path.m_jacobian(space, x, t)) / ex;
    res.max_abs = std::max(res.max_abs, diff);
    if (rho0 > 0.0) res.max_rel = std::max(res.max_rel, diff * ex / rho0);
  }
  return res;
}

}  // namespace negdimcd::transport
