#include "negdimcd/gradflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "negdimcd/comparison.hpp"
#include "negdimcd/convexity.hpp"

namespace negdimcd::gradflow {

namespace {

double norm(const Point& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Point axpy(const Point& x, double a, const Point& v) {
  Point out(x);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * v[i];
  return out;
}

std::string format_point(const Point& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

// f_N(a) / f_N(b)
double fn_ratio(double fa, double fb, double N) { return std::exp(-(fa - fb) / N); }

// (e^{K tau} - 1) / K, read as tau at K = 0.
double expm1_over(double K, double tau) { return K == 0.0 ? tau : std::expm1(K * tau) / K; }

// Whether d is inside the range where EVI_{K,N} is asserted.
bool admissible_distance(double K, double N, double d) {
  if (K >= 0.0) return true;
  return d < std::numbers::pi * std::sqrt(N / K);
}

double phi_kn(double K, double N, double d) {
  const double s = comparison::s(K / N, d / 2);
  return s * s;
}

enum class StepStatus { kOk, kOutside, kBlowUp };

struct StepResult {
  StepStatus status;
  Point x;
};

StepResult rk4_step(const Potential& f, const Point& x, double h, double cap) {
  auto field = [&](const Point& p, Point& out) {
    if (!f.inside(p)) return StepStatus::kOutside;
    out = f.gradient(p);
    const double g = norm(out);
    if (!std::isfinite(g) || g > cap) return StepStatus::kBlowUp;
    for (double& c : out) c = -c;
    return StepStatus::kOk;
  };
  Point k1, k2, k3, k4;
  StepStatus st;
  if ((st = field(x, k1)) != StepStatus::kOk) return {st, x};
  if ((st = field(axpy(x, h / 2, k1), k2)) != StepStatus::kOk) return {st, x};
  if ((st = field(axpy(x, h / 2, k2), k3)) != StepStatus::kOk) return {st, x};
  if ((st = field(axpy(x, h, k3), k4)) != StepStatus::kOk) return {st, x};
  Point out(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  if (!f.inside(out)) return {StepStatus::kOutside, x};
  return {StepStatus::kOk, out};
}

// One nominal step, split into halves while it would leave the box.
StepResult advance(const Potential& f, const Point& x, double h, int depth,
                   const IntegrateOptions& opts, bool& projected) {
  StepResult r = rk4_step(f, x, h, opts.gradient_cap);
  if (r.status != StepStatus::kOutside) return r;
  if (depth >= opts.max_halvings) {
    // Project the explicit Euler predictor back into the box.
    Point g = f.gradient(x);
    Point y = axpy(x, -h, g);
    for (std::size_t i = 0; i < y.size() && i < f.box.size(); ++i) {
      y[i] = std::clamp(y[i], f.box[i].lo, f.box[i].hi);
      y[i] = f.box[i].clamp_inside(y[i]);
    }
    projected = true;
    return {StepStatus::kOk, y};
  }
  StepResult first = advance(f, x, h / 2, depth + 1, opts, projected);
  if (first.status != StepStatus::kOk) return first;
  return advance(f, first.x, h / 2, depth + 1, opts, projected);
}

// Shared body of the two differential EVI checks. phi(d) is the distance
// functional, rhs(f(z), f(xi)) the right-hand side, K the linear coefficient.
template <class Phi, class Rhs>
CheckReport differential_evi(const GradientCurve& curve, const Potential& f, double K,
                             const Point& z, double tol, Phi phi, Rhs rhs,
                             const std::function<bool(double)>& admissible) {
  CheckReport rep(tol);
  const std::size_t n = curve.size();
  if (n < 3) {
    rep.mark_inconclusive("curve has fewer than three samples");
    rep.finalize();
    return rep;
  }
  std::vector<double> d(n), ph(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = distance(curve.points[i], z);
    ph[i] = phi(d[i]);
  }
  const double fz = f.value(z);
  double max_second = 0.0;
  std::size_t kinks = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = curve.times[i] - curve.times[i - 1];
    const double hp = curve.times[i + 1] - curve.times[i];
    const double back = (ph[i] - ph[i - 1]) / hm;
    const double fwd = (ph[i + 1] - ph[i]) / hp;
    max_second = std::max(max_second, std::abs(fwd - back) / (0.5 * (hm + hp)));
    if (!admissible(d[i])) {
      rep.record_trivial();
      continue;
    }
    double deriv = (ph[i + 1] - ph[i - 1]) / (hm + hp);
    if (d[i] <= d[i - 1] && d[i] <= d[i + 1]) {
      deriv = std::max(back, fwd);
      ++kinks;
    }
    const double margin = rhs(fz, f.value(curve.points[i])) - deriv - K * ph[i];
    rep.record(margin, {curve.times[i]});
  }
  const double allowance = 5.0 * curve.step * max_second;
  rep.tolerance = tol + allowance;
  char buf[96];
  std::snprintf(buf, sizeof buf, "discretization allowance %.3g", allowance);
  rep.diagnostics.emplace_back(buf);
  if (kinks > 0) rep.diagnostics.push_back(std::to_string(kinks) + " one-sided sample(s)");
  rep.finalize();
  return rep;
}

}  // namespace

double distance(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

bool Potential::inside(const Point& x) const {
  for (std::size_t i = 0; i < x.size() && i < box.size(); ++i) {
    if (!box[i].contains(x[i])) return false;
  }
  return true;
}

Potential Potential::from_1d(const ScalarFunction1D& f, Interval domain) {
  Potential p;
  p.value = [f](const Point& x) { return f(x.at(0)); };
  p.gradient = [f](const Point& x) { return Point{f.d1(x.at(0))}; };
  p.box = {domain};
  return p;
}

Potential Potential::linear(Point a, double c) {
  Potential p;
  p.value = [a, c](const Point& x) {
    double s = c;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x.at(i);
    return s;
  };
  p.gradient = [a](const Point&) { return a; };
  return p;
}

Potential Potential::quadratic(double K) {
  Potential p;
  p.value = [K](const Point& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return K * s / 2;
  };
  p.gradient = [K](const Point& x) {
    Point g(x);
    for (double& v : g) v *= K;
    return g;
  };
  return p;
}

Potential Potential::constant(double c) {
  Potential p;
  p.value = [c](const Point&) { return c; };
  p.gradient = [](const Point& x) { return Point(x.size(), 0.0); };
  return p;
}

std::size_t GradientCurve::index_near(double t) const {
  if (times.empty()) throw std::logic_error("empty curve");
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return times.size() - 1;
  std::size_t i = static_cast<std::size_t>(it - times.begin());
  if (i > 0 && t - times[i - 1] < times[i] - t) --i;
  return i;
}

void GradientCurve::write_table(std::ostream& os) const {
  char buf[32];
  os << "# t";
  if (!points.empty()) {
    for (std::size_t j = 0; j < points[0].size(); ++j) os << " x" << j + 1;
  }
  os << "\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", times[i]);
    os << buf;
    for (double v : points[i]) {
      std::snprintf(buf, sizeof buf, " %.17g", v);
      os << buf;
    }
    os << "\n";
  }
}

GradientCurve integrate(const Potential& f, const Point& x0, double T, double step,
                        const IntegrateOptions& opts) {
  if (!(step > 0.0)) throw std::invalid_argument("integrate: step must be positive");
  if (!(T >= 0.0)) throw std::invalid_argument("integrate: horizon must be nonnegative");
  if (!f.inside(x0)) throw std::invalid_argument("integrate: x0 outside the domain");
  GradientCurve c;
  c.step = step;
  c.times.push_back(0.0);
  c.points.push_back(x0);
  const auto n_full = static_cast<std::size_t>(std::floor(T / step * (1 + 1e-12)));
  const double rest = T - static_cast<double>(n_full) * step;
  const std::size_t n = n_full + (rest > 1e-12 * step ? 1 : 0);
  bool projected = false;
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = i <= n_full ? static_cast<double>(i) * step : T;
    const double h = t - c.times.back();
    StepResult r = advance(f, c.points.back(), h, 0, opts, projected);
    if (r.status == StepStatus::kBlowUp) {
      c.truncated = true;
      c.diagnostics.push_back("gradient exceeded the cap near t = " +
                              std::to_string(c.times.back()) + "; curve truncated");
      break;
    }
    c.times.push_back(t);
    c.points.push_back(std::move(r.x));
  }
  if (projected) c.diagnostics.emplace_back("step halving exhausted; projected into the box");
  return c;
}

SlopeValue local_slope(const Potential& f, const Point& x) {
  return {std::max(norm(f.gradient(x)), 0.0)};
}

MetricSpeed metric_speed(const GradientCurve& curve, std::size_t i) {
  const std::size_t n = curve.size();
  if (n < 2) throw std::invalid_argument("metric_speed: curve too short");
  if (i >= n) throw std::out_of_range("metric_speed: index");
  if (i == 0) {
    return {distance(curve.points[1], curve.points[0]) / (curve.times[1] - curve.times[0]), true};
  }
  if (i == n - 1) {
    return {distance(curve.points[i], curve.points[i - 1]) / (curve.times[i] - curve.times[i - 1]),
            true};
  }
  return {distance(curve.points[i + 1], curve.points[i - 1]) /
              (curve.times[i + 1] - curve.times[i - 1]),
          false};
}

CheckReport verify_edi(const GradientCurve& curve, const Potential& f, double s, double t,
                       double tol) {
  if (!(s < t)) throw std::invalid_argument("verify_edi: need s < t");
  CheckReport rep(tol);
  const std::size_t is = curve.index_near(s), it = curve.index_near(t);
  if (is >= it) {
    rep.mark_inconclusive("s and t snap to the same sample");
    rep.finalize();
    return rep;
  }
  bool one_sided = false;
  auto integrand = [&](std::size_t i) {
    const MetricSpeed v = metric_speed(curve, i);
    one_sided = one_sided || v.one_sided;
    const double g = local_slope(f, curve.points[i]).value;
    return v.value * v.value + g * g;
  };
  double integral = 0.0;
  double prev = integrand(is);
  for (std::size_t i = is + 1; i <= it; ++i) {
    const double cur = integrand(i);
    integral += 0.5 * (curve.times[i] - curve.times[i - 1]) * (prev + cur);
    prev = cur;
  }
  const double residual =
      f.value(curve.points[it]) - f.value(curve.points[is]) + 0.5 * integral;
  rep.record(-std::abs(residual), {curve.times[is], curve.times[it]});
  if (one_sided) rep.diagnostics.emplace_back("endpoint speed uses a one-sided difference");
  rep.finalize();
  return rep;
}

CheckReport verify_evi(const GradientCurve& curve, const Potential& f, double K, double N,
                       const Point& z, double tol) {
  if (!(N < 0.0)) throw std::invalid_argument("verify_evi: N must be negative");
  return differential_evi(
      curve, f, K, z, tol, [K, N](double d) { return phi_kn(K, N, d); },
      [N](double fz, double fx) { return N / 2 * (1 - fn_ratio(fz, fx, N)); },
      [K, N](double d) { return admissible_distance(K, N, d); });
}

CheckReport verify_evi_k(const GradientCurve& curve, const Potential& f, double K,
                         const Point& z, double tol) {
  return differential_evi(
      curve, f, K, z, tol, [](double d) { return d * d / 2; },
      [](double fz, double fx) { return fz - fx; }, [](double) { return true; });
}

CheckReport verify_evi_integrated(const GradientCurve& curve, const Potential& f, double K,
                                  double N, const Point& z, double t0, double t1, double tol) {
  if (!(N < 0.0)) throw std::invalid_argument("verify_evi_integrated: N must be negative");
  if (!(t0 <= t1)) throw std::invalid_argument("verify_evi_integrated: need t0 <= t1");
  CheckReport rep(tol);
  const std::size_t i0 = curve.index_near(t0), i1 = curve.index_near(t1);
  for (std::size_t i = i0; i <= i1; ++i) {
    if (!admissible_distance(K, N, distance(curve.points[i], z))) {
      rep.record_trivial();
      rep.diagnostics.emplace_back("distance to z leaves the admissible range on [t0,t1]");
      rep.finalize();
      return rep;
    }
  }
  const double tau = curve.times[i1] - curve.times[i0];
  const double ratio = fn_ratio(f.value(z), f.value(curve.points[i1]), N);
  const double lhs = N / 2 * expm1_over(K, tau) * (1 - ratio);
  const double rhs = std::exp(K * tau) * phi_kn(K, N, distance(curve.points[i1], z)) -
                     phi_kn(K, N, distance(curve.points[i0], z));
  rep.record(lhs - rhs, {curve.times[i0], curve.times[i1]});
  rep.finalize();
  return rep;
}

CheckReport regularizing_bound(const GradientCurve& curve, const Potential& f, double K,
                               double N, const Point& z, double t, double tol) {
  if (!(N < 0.0)) throw std::invalid_argument("regularizing_bound: N must be negative");
  if (!(t > 0.0)) throw std::invalid_argument("regularizing_bound: need t > 0");
  CheckReport rep(tol);
  const std::size_t it = curve.index_near(t);
  if (it == 0) {
    rep.mark_inconclusive("t snaps to the initial sample");
    rep.finalize();
    return rep;
  }
  for (std::size_t i = 0; i <= it; ++i) {
    if (!admissible_distance(K, N, distance(curve.points[i], z))) {
      rep.record_trivial();
      rep.diagnostics.emplace_back("distance to z leaves the admissible range on [0,t]");
      rep.finalize();
      return rep;
    }
  }
  const double tt = curve.times[it];
  const double lhs = fn_ratio(f.value(z), f.value(curve.points[it]), N);
  const double rhs =
      1 + 2 / (N * expm1_over(K, tt)) * phi_kn(K, N, distance(curve.points[0], z));
  rep.record(lhs - rhs, {tt});
  rep.finalize();
  return rep;
}

CheckReport continuity_estimate(const GradientCurve& curve, const Potential& f, double K,
                                double N, double t0, double t1, std::optional<double> inf_f,
                                double tol) {
  if (!inf_f) throw std::invalid_argument("continuity_estimate: needs inf f (bounded below)");
  if (!(N < 0.0)) throw std::invalid_argument("continuity_estimate: N must be negative");
  if (!(t0 <= t1)) throw std::invalid_argument("continuity_estimate: need t0 <= t1");
  CheckReport rep(tol);
  const std::size_t i0 = curve.index_near(t0), i1 = curve.index_near(t1);
  for (std::size_t i = i0; i <= i1; ++i) {
    if (!admissible_distance(K, N, distance(curve.points[i], curve.points[i0]))) {
      rep.record_trivial();
      rep.diagnostics.emplace_back("curve leaves the admissible range on [t0,t1]");
      rep.finalize();
      return rep;
    }
  }
  const double tau = curve.times[i1] - curve.times[i0];
  // f_N(xi(t0)) / inf f_N with inf f_N = exp(-inf f / N).
  const double ratio = fn_ratio(f.value(curve.points[i0]), *inf_f, N);
  const double coef = N / 2 * (K == 0.0 ? tau : -std::expm1(-K * tau) / K);
  const double lhs = phi_kn(K, N, distance(curve.points[i0], curve.points[i1]));
  rep.record(coef * (1 - ratio) - lhs, {curve.times[i0], curve.times[i1]});
  rep.finalize();
  return rep;
}

double expansion_theta(double K, double N, double L, double t0, double t1) {
  return (2 * K + 4 * L * L / N) * (t1 + std::sqrt(t1 * t0) + t0) / 3;
}

double expansion_rhs(double K, double N, double L, double d0, double t0, double t1) {
  const double theta = expansion_theta(K, N, L, t0, t1);
  const double e = theta == 0.0 ? 1.0 : std::expm1(theta) / theta;
  const double gap = std::sqrt(t1) - std::sqrt(t0);
  return 2 * std::exp(-theta) * (d0 * d0 / 2 - N * gap * gap * e);
}

namespace {

struct FlowPair {
  GradientCurve xi, zeta;
};

FlowPair integrate_pair_audited(const Potential& f, const Point& x, const Point& y, double L,
                                double horizon, double step) {
  FlowPair fp{integrate(f, x, horizon, step), integrate(f, y, horizon, step)};
  for (const GradientCurve* c : {&fp.xi, &fp.zeta}) {
    if (c->truncated) throw std::invalid_argument("expansion_bound: trajectory blew up");
    for (const Point& p : c->points) {
      if (norm(f.gradient(p)) > L * (1 + 1e-12) + 1e-12) {
        throw std::invalid_argument("expansion_bound: |grad f| > L at " + format_point(p));
      }
    }
  }
  return fp;
}

}  // namespace

CheckReport expansion_bound(const Potential& f, const Point& x, const Point& y, double K,
                            double N, double L,
                            const std::vector<std::pair<double, double>>& time_pairs,
                            double step, double tol) {
  if (!(N < 0.0)) throw std::invalid_argument("expansion_bound: N must be negative");
  double horizon = 0.0;
  for (auto [a, b] : time_pairs) {
    if (a < 0 || b < 0) throw std::invalid_argument("expansion_bound: negative time");
    horizon = std::max({horizon, a, b});
  }
  const FlowPair fp = integrate_pair_audited(f, x, y, L, horizon, step);
  const double d0 = distance(x, y);
  CheckReport rep(tol);
  for (auto [t0, t1] : time_pairs) {
    const std::size_t i0 = fp.xi.index_near(t0), i1 = fp.zeta.index_near(t1);
    const double s0 = fp.xi.times[i0], s1 = fp.zeta.times[i1];
    const double d = distance(fp.xi.points[i0], fp.zeta.points[i1]);
    rep.record(expansion_rhs(K, N, L, d0, s0, s1) - d * d, {s0, s1});
  }
  rep.finalize();
  return rep;
}

CheckReport expansion_bound(const Potential& f, const Point& x, const Point& y, double K,
                            double N, double L, double t0, double t1, double step, double tol) {
  return expansion_bound(f, x, y, K, N, L, {{t0, t1}}, step, tol);
}

CheckReport same_time_contraction(const Potential& f, const Point& x, const Point& y, double K,
                                  double N, double L, const std::vector<double>& times,
                                  double step, double tol) {
  if (!(N < 0.0)) throw std::invalid_argument("same_time_contraction: N must be negative");
  double horizon = 0.0;
  for (double t : times) horizon = std::max(horizon, t);
  const FlowPair fp = integrate_pair_audited(f, x, y, L, horizon, step);
  const double d0 = distance(x, y);
  CheckReport rep(tol);
  for (double t : times) {
    const std::size_t i = fp.xi.index_near(t);
    const double s = fp.xi.times[i];
    const double bound = std::exp(-(K + 2 * L * L / N) * s) * d0;
    rep.record(bound - distance(fp.xi.points[i], fp.zeta.points[i]), {s});
  }
  rep.finalize();
  return rep;
}

CheckReport lipschitz_convexity_claim(const ScalarFunction1D& f, double K, double N, double L,
                                      const std::vector<double>& grid, double tol) {
  if (!(N < 0.0)) throw std::invalid_argument("lipschitz_convexity_claim: N must be negative");
  for (double x : grid) {
    if (std::abs(f.d1(x)) > L * (1 + 1e-12) + 1e-12) {
      throw std::invalid_argument("lipschitz_convexity_claim: |f'| > L at " + std::to_string(x));
    }
  }
  const CheckReport hyp = convexity::check_pointwise(f, {K, N}, grid, tol);
  if (!hyp.pass) {
    throw std::invalid_argument("lipschitz_convexity_claim: f is not (K,N)-convex on the grid");
  }
  CheckReport rep(tol);
  const double k_eff = K + L * L / N;
  for (double x : grid) rep.record(f.d2(x) - k_eff, {x});
  rep.finalize();
  return rep;
}

CheckReport energy_monotone(const GradientCurve& curve, const Potential& f, double slack) {
  CheckReport rep(0.0);
  double prev = curve.size() ? f.value(curve.points[0]) : 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double cur = f.value(curve.points[i]);
    rep.record(slack - (cur - prev), {curve.times[i]});
    prev = cur;
  }
  rep.finalize();
  return rep;
}

CheckReport slope_below_speed(const GradientCurve& curve, const Potential& f) {
  CheckReport rep(0.0);
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const double v = metric_speed(curve, i).value;
    const double g = local_slope(f, curve.points[i]).value;
    rep.record(v + 5 * curve.step - g, {curve.times[i]});
  }
  rep.finalize();
  return rep;
}

}  // namespace negdimcd::gradflow
