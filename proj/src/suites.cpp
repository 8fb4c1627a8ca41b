// Suite runners behind `negdimcd run` and `negdimcd certify`.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "negdimcd/cli.hpp"
#include "negdimcd/comparison.hpp"
#include "negdimcd/convexity.hpp"
#include "negdimcd/expression.hpp"
#include "negdimcd/geometry.hpp"
#include "negdimcd/gradflow.hpp"
#include "negdimcd/transport.hpp"

namespace negdimcd::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

std::vector<double> t_grid(int n) { return linspace(0.0, 1.0, std::max(n, 2)); }

// k=v;k=v, built in insertion order.
class Params {
 public:
  // Commas and semicolons would break the record columns; they become '/'.
  Params& add(const std::string& k, const std::string& v) {
    if (!s_.empty()) s_ += ';';
    std::string clean = v;
    std::replace(clean.begin(), clean.end(), ',', '/');
    std::replace(clean.begin(), clean.end(), ';', '/');
    s_ += k + '=' + clean;
    return *this;
  }
  Params& add(const std::string& k, double v) { return add(k, format_number(v)); }
  [[nodiscard]] const std::string& str() const { return s_; }

 private:
  std::string s_;
};

struct Emitter {
  std::vector<Record>& out;

  void report(const std::string& id, const Params& p, const CheckReport& r) const {
    out.push_back({id, p.str(), r.worst_margin, to_string(r.status)});
  }
  void info(const std::string& id, const Params& p, double value) const {
    out.push_back({id, p.str(), value, "info"});
  }
};

std::string base_name(const std::string& section) { return section.substr(0, section.find('.')); }

std::string join_id(const Section& s, const std::string& check) { return s.name + "." + check; }

double tol_or(const Options& opts, double fallback) { return opts.tol.value_or(fallback); }

void require_negative(const Section& s, const std::string& key, double N) {
  if (!(N < 0.0)) throw ConfigError(s.where(key) + ": N must be negative");
}

Interval interval_key(const Section& s, const std::string& key) {
  const auto v = s.numbers(key);
  if (v.size() != 2 || !(v[0] < v[1])) {
    throw ConfigError(s.where(key) + ": expected 'lo, hi' with lo < hi");
  }
  return {v[0], v[1]};
}

ScalarFunction1D expression_key(const Section& s, const std::string& key,
                                std::map<std::string, double> params) {
  try {
    return expr::Expression::parse(*s.get(key), params).function();
  } catch (const expr::ParseError& e) {
    throw ConfigError(s.where(key) + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// convexity

struct NamedFunction {
  ScalarFunction1D f;
  std::string name;
  std::optional<Interval> natural;  // default check interval
};

NamedFunction convexity_function(const Section& s, double K, double N,
                                 std::map<std::string, double> params) {
  if (s.has("example")) {
    const std::string kind = s.get_or("example", "");
    if (kind.size() != 1 || kind[0] < 'a' || kind[0] > 'd') {
      throw ConfigError(s.where("example") + ": expected one of a, b, c, d");
    }
    convexity::ExampleFunction ex;
    try {
      ex = convexity::example_function(convexity::parse_example_kind(kind[0]), K, N);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(s.where("K") + ": " + e.what());
    }
    Interval d;
    switch (kind[0]) {
      case 'a': d = {-3, 3}; break;
      case 'b':
      case 'c': d = {0.1, 5}; break;
      default: {
        const double half = 0.95 * (kPi / 2) * std::sqrt(N / K);
        d = {-half, half};
      }
    }
    return {ex.f, "example_" + kind, d};
  }
  if (!s.has("f")) throw ConfigError(s.where("f") + ": missing (or give example = a|b|c|d)");
  params["N"] = N;
  params["K"] = K;
  return {expression_key(s, "f", params), s.get_or("f", ""), std::nullopt};
}

void run_convexity(const Section& s, const Options& opts, SplitMix64 rng, const Emitter& emit) {
  const double N = s.number("N");
  require_negative(s, "N", N);
  const double K = s.number_or("K", 0.0);
  const NamedFunction nf = convexity_function(s, K, N, s.numeric_params());
  Interval dom;
  if (s.has("domain")) dom = interval_key(s, "domain");
  else if (nf.natural) dom = *nf.natural;
  else throw ConfigError(s.where("domain") + ": missing");
  const int grid_n = s.integer_or("grid", 201);
  const int pairs = s.integer_or("pairs", 20);
  const int t_points = s.integer_or("t_points", 11);
  if (grid_n < 2 || pairs < 1 || t_points < 2) throw ConfigError(s.where("grid") + ": counts too small");
  const double tol = tol_or(opts, default_tolerance(nf.f));

  const convexity::ConvexityParams cp(K, N, dom);
  Params p;
  p.add("f", nf.name).add("K", K).add("N", N).add("domain", format_number(dom.lo) + ":" + format_number(dom.hi));

  emit.report(join_id(s, "pointwise"), p,
              convexity::check_pointwise(nf.f, cp, linspace(dom.lo, dom.hi, grid_n), tol));

  std::vector<CheckReport> geo, der;
  const auto ts = t_grid(t_points);
  for (int i = 0; i < pairs; ++i) {
    double x0 = rng.uniform(dom.lo, dom.hi), x1 = rng.uniform(dom.lo, dom.hi);
    if (x0 == x1) x1 = 0.5 * (x0 + dom.hi);
    geo.push_back(convexity::check_geodesic(nf.f, cp, x0, x1, ts, tol));
    der.push_back(convexity::check_derivative(nf.f, cp, x0, x1, tol));
    der.push_back(convexity::check_derivative(nf.f, cp, x1, x0, tol));
  }
  Params pp = p;
  pp.add("pairs", pairs);
  emit.report(join_id(s, "geodesic"), pp, merge_reports(geo, tol));
  emit.report(join_id(s, "derivative"), pp, merge_reports(der, tol));
}

// ---------------------------------------------------------------------------
// flow

void run_flow(const Section& s, const Options& opts, const Emitter& emit) {
  const double K = s.number("K");
  const auto Ns = s.numbers_or("N", {-1, -2, -10});
  for (double N : Ns) require_negative(s, "N", N);
  const auto zs = s.numbers_or("z", {-1, 0, 2});
  const double x0 = s.number_or("x0", 1.0);
  const double T = s.number_or("T", 1.0);
  const double step = s.number_or("step", 1e-3);
  if (!(T > 0)) throw ConfigError(s.where("T") + ": must be positive");
  if (!(step > 0) || step > T) throw ConfigError(s.where("step") + ": must be in (0, T]");

  const std::string kind = s.get_or("potential", "quadratic");
  gradflow::Potential f;
  std::string name = kind;
  if (kind == "quadratic") {
    f = gradflow::Potential::quadratic(K);
  } else if (kind == "linear") {
    f = gradflow::Potential::linear({s.number_or("a", 1.0)});
  } else if (kind == "constant") {
    f = gradflow::Potential::constant(0.0);
  } else if (kind == "expression") {
    auto params = s.numeric_params();
    const auto fn = expression_key(s, "f", params);
    f = gradflow::Potential::from_1d(fn, s.has("domain") ? interval_key(s, "domain") : Interval{});
    name = s.get_or("f", "");
  } else {
    throw ConfigError(s.where("potential") + ": expected quadratic, linear, constant or expression");
  }
  if (!f.inside({x0})) throw ConfigError(s.where("x0") + ": outside the domain");

  const auto curve = gradflow::integrate(f, {x0}, T, step);
  Params base;
  base.add("potential", name).add("K", K).add("x0", x0).add("T", T).add("step", step);

  emit.report(join_id(s, "edi"), base,
              gradflow::verify_edi(curve, f, 0.0, curve.times.back(), tol_or(opts, s.number_or("edi_tol", 1e-6))));
  emit.report(join_id(s, "energy"), base, gradflow::energy_monotone(curve, f));

  const double tol = tol_or(opts, 1e-8);
  for (double N : Ns) {
    for (double z : zs) {
      Params p = base;
      p.add("N", N).add("z", z);
      emit.report(join_id(s, "evi"), p, gradflow::verify_evi(curve, f, K, N, {z}, tol));
      emit.report(join_id(s, "evi_integrated"), p,
                  gradflow::verify_evi_integrated(curve, f, K, N, {z}, 0.0, curve.times.back(), tol));
      emit.report(join_id(s, "regularizing"), p,
                  gradflow::regularizing_bound(curve, f, K, N, {z}, curve.times.back(), tol));
    }
  }

  if (s.has("L")) {
    const double L = s.number("L");
    const double y0 = s.number_or("y0", x0 + 1.0);
    std::vector<std::pair<double, double>> tp;
    const auto grid = linspace(T / 10, T, 10);
    for (double a : grid)
      for (double b : grid) tp.emplace_back(std::min(a, b), std::max(a, b));
    for (double N : Ns) {
      Params p = base;
      p.add("N", N).add("L", L).add("y0", y0);
      try {
        emit.report(join_id(s, "expansion"), p,
                    gradflow::expansion_bound(f, {x0}, {y0}, K, N, L, tp, step, tol));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(s.where("L") + ": " + e.what());
      }
    }
  }
}

// ---------------------------------------------------------------------------
// geometry

void run_geometry(const Section& s, const Options& opts, const Emitter& emit) {
  const double N = s.number("N");
  require_negative(s, "N", N);
  const std::string kind = s.get_or("space", "line");
  auto params = s.numeric_params();
  const ScalarFunction1D psi =
      s.has("psi") ? expression_key(s, "psi", params) : ScalarFunction1D::constant(0.0);
  const int grid_n = s.integer_or("grid", 201);

  std::optional<geometry::WeightedSpace> space;
  std::vector<double> grid, interior;
  if (kind == "line") {
    const Interval dom = interval_key(s, "domain");
    space = geometry::WeightedSpace::line(psi, dom);
    grid = interior = linspace(dom.lo, dom.hi, grid_n);
  } else if (kind == "sphere") {
    try {
      space = geometry::WeightedSpace::rot_sphere(psi);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(s.where("psi") + ": " + e.what());
    }
    grid = linspace(0.0, kPi, grid_n);
    interior = linspace(0.05, kPi - 0.05, grid_n);
  } else {
    throw ConfigError(s.where("space") + ": expected line or sphere");
  }
  Params base;
  base.add("space", kind).add("psi", s.get_or("psi", "0")).add("N", N);

  const auto cert = geometry::min_ricci_n(*space, N, grid);
  if (s.has("K")) {
    const double K = s.number("K");
    CheckReport r(tol_or(opts, 1e-9));
    r.record(cert.K - K, {cert.inf_point, cert.inf_alpha});
    r.finalize();
    Params p = base;
    p.add("K", K);
    emit.report(join_id(s, "ricci"), p, r);
  } else {
    emit.info(join_id(s, "ricci_min"), base, cert.K);
  }

  for (const auto& u_text : s.words_or("u", {})) {
    ScalarFunction1D u;
    try {
      u = expr::Expression::parse(u_text, params).function();
    } catch (const expr::ParseError& e) {
      throw ConfigError(s.where("u") + ": " + e.what());
    }
    Params p = base;
    p.add("u", u_text);
    emit.report(join_id(s, "bochner"), p, geometry::bochner_margin(*space, u, N, interior, tol_or(opts, 1e-8)));
  }

  if (s.has("cells")) {
    const int cells = s.integer_or("cells", 0);
    if (cells < 16) throw ConfigError(s.where("cells") + ": need at least 16");
    std::optional<double> K;
    if (s.has("K")) K = s.number("K");
    geometry::LichnerowiczResult lr;
    try {
      lr = geometry::lichnerowicz(*space, N, cells, tol_or(opts, 1e-3), K);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(s.where("cells") + ": " + e.what());
    }
    Params p = base;
    p.add("cells", cells).add("K", lr.K).add("bound", lr.bound);
    if (lr.advisory) p.add("mode", "advisory");
    emit.report(join_id(s, "lichnerowicz"), p, lr.report);
    Params q = base;
    q.add("cells", cells).add("order", lr.observed_order);
    emit.info(join_id(s, "lambda1"), q, lr.lambda1);
  }
}

// ---------------------------------------------------------------------------
// transport

transport::Density1D density_key(const Section& s, const std::string& key) {
  const auto v = s.get(key);
  if (!v) throw ConfigError(s.where(key) + ": missing");
  const auto colon = v->find(':');
  const std::string kind = v->substr(0, colon);
  Section tmp{s.name, {{key, colon == std::string::npos ? "" : v->substr(colon + 1)}}};
  const auto args = colon == std::string::npos ? std::vector<double>{} : tmp.numbers(key);
  try {
    if (kind == "gaussian" && args.size() == 2) return transport::Density1D::gaussian(args[0], args[1]);
    if (kind == "uniform" && args.size() == 2) return transport::Density1D::uniform(args[0], args[1]);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(s.where(key) + ": " + e.what());
  }
  throw ConfigError(s.where(key) + ": expected gaussian:mean,sd or uniform:a,b");
}

struct WeightSpec {
  geometry::WeightedSpace space;
  std::string name;
  bool gaussian = false;
};

WeightSpec weight_key(const Section& s) {
  const std::string w = s.get_or("weight", "lebesgue");
  if (w == "lebesgue") return {transport::lebesgue_space(), w};
  if (w == "gaussian") return {transport::standard_gaussian_space(), w, true};
  if (w.rfind("power:", 0) == 0) {
    Section tmp{s.name, {{"weight", w.substr(6)}}};
    const double p = tmp.number("weight");
    return {transport::power_weight_space(p), w};
  }
  throw ConfigError(s.where("weight") + ": expected lebesgue, gaussian or power:<p>");
}

// sigma_{K/N'} - tau_{K,N'} over the transport distances of the CD data.
CheckReport tau_below_sigma(const transport::Density1D& mu0, const transport::Density1D& mu1,
                            double K, const std::vector<double>& n_primes,
                            const std::vector<double>& ts, double tol) {
  const auto plan = transport::TransportPlan1D::monotone(mu0, mu1);
  CheckReport r(tol);
  for (double x : linspace(mu0.lo(), mu0.hi(), 65)) {
    const double d = std::abs(plan.map(x) - x);
    for (double Np : n_primes) {
      for (double t : ts) {
        const ExtReal tau = comparison::tau(K, Np, t, d);
        const ExtReal sig = comparison::sigma(K / Np, t, d);
        if (sig.is_infinite()) {
          r.record_trivial();
        } else if (tau.is_infinite()) {
          r.record_failure({x, Np, t}, "tau infinite where sigma is finite");
        } else {
          r.record(sig.value() - tau.value(), {x, Np, t});
        }
      }
    }
  }
  r.finalize();
  return r;
}

// Weighted lines with Ric_N >= K (psi'' >= K) tried against entropic CD(K,N)
// on random Gaussian pairs; reports the smallest margin found.
double entropic_search(double K, double N, int trials, SplitMix64& rng) {
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < trials; ++i) {
    const double amp = rng.uniform(0.0, 0.3), freq = rng.uniform(0.5, 2.0);
    // psi = K x^2/2 + amp (x^2/2 + cos(freq x)/freq^2): psi'' = K + amp (1 - cos) >= K.
    const double c = 0.5 * std::log(2 * kPi);
    const auto psi = ScalarFunction1D(
        [=](double x) { return K * x * x / 2 + amp * (x * x / 2 + std::cos(freq * x) / (freq * freq)) + c; },
        ScalarFunction1D::Fn([=](double x) { return K * x + amp * (x - std::sin(freq * x) / freq); }),
        ScalarFunction1D::Fn([=](double x) { return K + amp * (1 - std::cos(freq * x)); }));
    const auto space = geometry::WeightedSpace::line(psi);
    const auto mu0 = transport::Density1D::gaussian(rng.uniform(-1, 1), rng.uniform(0.3, 1.5));
    const auto mu1 = transport::Density1D::gaussian(rng.uniform(-1, 1), rng.uniform(0.3, 1.5));
    const auto r = transport::check_entropic_cd(space, mu0, mu1, K, N, t_grid(5), 0.0);
    worst = std::min(worst, r.worst_margin);
  }
  return worst;
}

void run_transport(const Section& s, const Options& opts, SplitMix64 rng, const Emitter& emit) {
  const double N = s.number("N");
  require_negative(s, "N", N);
  const double K = s.number_or("K", 0.0);
  const WeightSpec w = weight_key(s);
  const auto mu0 = density_key(s, "mu0");
  const auto mu1 = density_key(s, "mu1");
  const auto nps = s.numbers_or("n_primes", {N, N / 2, N / 4});
  for (double Np : nps) {
    if (!(Np >= N && Np < 0)) throw ConfigError(s.where("n_primes") + ": need N' in [N, 0)");
  }
  const auto ts = t_grid(s.integer_or("t_points", 11));
  const double tol = tol_or(opts, s.number_or("tol", 1e-9));
  const auto checks = s.words_or("checks", {"w2", "cd", "cdstar", "jacobian", "entropic"});

  Params base;
  base.add("weight", w.name).add("mu0", s.get_or("mu0", "")).add("mu1", s.get_or("mu1", ""))
      .add("K", K).add("N", N);

  std::optional<CheckReport> cd, cds;
  for (const auto& c : checks) {
    Params p = base;
    if (c == "w2") {
      const auto r = transport::w2(mu0, mu1);
      if (r.converged) {
        emit.info(join_id(s, "w2"), p, r.value);
      } else {
        emit.out.push_back({join_id(s, "w2"), p.str(), r.value, "inconclusive"});
      }
    } else if (c == "cd" || c == "cdstar") {
      const auto mode = c == "cd" ? transport::CdMode::kCD : transport::CdMode::kCDStar;
      auto r = transport::check_cd(w.space, mu0, mu1, K, N, nps, ts, mode, tol);
      emit.report(join_id(s, c), p, r);
      (c == "cd" ? cd : cds) = std::move(r);
    } else if (c == "jacobian") {
      const auto plan = transport::TransportPlan1D::monotone(mu0, mu1);
      const double pad = 1e-3 * (mu0.hi() - mu0.lo());
      emit.report(join_id(s, c), p,
                  transport::check_jacobian_convexity(w.space, plan, K, N,
                                                      linspace(mu0.lo() + pad, mu0.hi() - pad, 21), ts, tol));
    } else if (c == "bm" || c == "bmstar") {
      const Interval A0 = interval_key(s, "A0"), A1 = interval_key(s, "A1");
      const double t = s.number_or("bm_t", 0.5);
      p.add("A0", format_number(A0.lo) + ":" + format_number(A0.hi))
          .add("A1", format_number(A1.lo) + ":" + format_number(A1.hi))
          .add("t", t);
      const auto mode = c == "bm" ? transport::BmMode::kBM : transport::BmMode::kBMStar;
      emit.report(join_id(s, c), p, transport::brunn_minkowski(w.space, A0, A1, t, K, N, mode, tol));
    } else if (c == "entropic") {
      emit.report(join_id(s, c), p, transport::check_entropic_cd(w.space, mu0, mu1, K, N, ts, tol));
    } else if (c == "hwi") {
      emit.report(join_id(s, c), p, transport::hwi_check(w.space, mu0, mu1, K, N, tol));
    } else if (c == "talagrand" || c == "logsobolev") {
      if (!w.gaussian) throw ConfigError(s.where("checks") + ": " + c + " needs weight = gaussian");
      const auto m = transport::Density1D::gaussian(0, 1);
      emit.report(join_id(s, c), p,
                  c == "talagrand" ? transport::talagrand_check(w.space, m, mu0, K, N, tol)
                                   : transport::log_sobolev_check(w.space, m, mu0, K, N, tol));
    } else if (c == "monge_ampere") {
      const transport::GeodesicPath path(mu0, mu1);
      CheckReport r(1e-6);
      for (double t : {0.25, 0.5, 0.75}) {
        r.record(-transport::monge_ampere_residual(w.space, path, t).max_abs, {t});
      }
      r.finalize();
      emit.report(join_id(s, c), p, r);
    } else if (c == "xn_crosscheck") {
      // Weight x^N against CD(0,N), next to the x^{N-1} model.
      const auto other = transport::power_weight_space(N);
      const auto r = transport::check_cd(other, mu0, mu1, 0.0, N, {N}, ts, transport::CdMode::kCD, tol);
      Params q = base;
      q.add("cross_weight", "x^N").add("outcome", to_string(r.status));
      emit.info(join_id(s, "xn_crosscheck"), q, r.worst_margin);
      const auto g = geometry::min_ricci_n(other, N, linspace(mu0.lo(), mu1.hi(), 101));
      Params q2 = base;
      q2.add("cross_weight", "x^N").add("quantity", "min Ric_N");
      emit.info(join_id(s, "xn_ricci"), q2, g.K);
    } else if (c == "entropic_search") {
      const int trials = s.integer_or("search_trials", 20);
      Params q = base;
      q.add("trials", trials);
      emit.info(join_id(s, "entropic_search"), q, entropic_search(K, N, trials, rng));
    } else {
      throw ConfigError(s.where("checks") + ": unknown check '" + c + "'");
    }
  }
  if (cd && cds) {
    CheckReport r(tol);
    const std::size_t n = std::min(cd->samples.size(), cds->samples.size());
    for (std::size_t i = 0; i < n; ++i) {
      r.record(cds->samples[i].margin - cd->samples[i].margin, cd->samples[i].at);
    }
    if (cd->pass && !cds->pass) r.record_failure({}, "CD passed but CD* failed");
    r.finalize();
    emit.report(join_id(s, "cd_below_cdstar"), base, r);
    emit.report(join_id(s, "tau_le_sigma"), base, tau_below_sigma(mu0, mu1, K, nps, ts, 1e-12));
  }
}

std::uint64_t seed_of(const Config& c, const Options& opts) {
  if (opts.seed) return *opts.seed;
  if (const auto v = c.top("seed")) {
    Section tmp{"", {{"seed", *v}}};
    const double d = tmp.number("seed");
    if (d < 0 || d != std::floor(d)) throw ConfigError(".seed: expected a nonnegative integer");
    return static_cast<std::uint64_t>(d);
  }
  return 0;
}

}  // namespace

Outcome run(const Config& config, const Options& opts_in) {
  Options opts = opts_in;
  if (!opts.tol && config.top("tol")) opts.tol = config.sections.front().number("tol");
  const std::string suite = config.top("suite").value_or("");
  static const std::vector<std::string> kSuites = {"convexity", "flow", "geometry", "transport", "all"};
  if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end()) {
    throw ConfigError(".suite: expected convexity, flow, geometry, transport or all");
  }
  const std::uint64_t seed = seed_of(config, opts);
  SplitMix64 master(seed);
  Outcome out;
  const Emitter emit{out.records};
  int ran = 0;
  for (const auto& s : config.sections) {
    if (s.name.empty()) continue;
    const std::string base = base_name(s.name);
    // Every section gets its own stream, in declaration order.
    SplitMix64 rng = master.split();
    if (suite != "all" && base != suite) continue;
    try {
      if (base == "convexity") run_convexity(s, opts, rng, emit);
      else if (base == "flow") run_flow(s, opts, emit);
      else if (base == "geometry") run_geometry(s, opts, emit);
      else if (base == "transport") run_transport(s, opts, rng, emit);
      else if (base == "certify") continue;
      else throw ConfigError("[" + s.name + "]: unknown section");
    } catch (const std::invalid_argument& e) {
      throw ConfigError("[" + s.name + "]: " + e.what());
    } catch (const std::domain_error& e) {
      throw ConfigError("[" + s.name + "]: " + e.what());
    }
    ++ran;
  }
  if (ran == 0) throw ConfigError(".suite: no section matches suite '" + suite + "'");
  out.exit_code = std::any_of(out.records.begin(), out.records.end(), record_fails) ? 1 : 0;
  out.summary = summarize(out.records, "negdimcd run: suite=" + suite + " seed=" + std::to_string(seed));
  return out;
}

Outcome certify(const Config& config, const Options& opts) {
  const Section* s = config.find("certify");
  if (!s) throw ConfigError("[certify]: missing section");
  const auto Ns = s->numbers("N");
  for (double N : Ns) require_negative(*s, "N", N);
  const double k_min = s->number_or("K_min", -10.0), k_max = s->number_or("K_max", 10.0);
  if (!(k_min < k_max)) throw ConfigError(s->where("K_min") + ": need K_min < K_max");
  const int grid_n = s->integer_or("grid", 201);

  Outcome out;
  std::ostringstream notes;
  for (double N : Ns) {
    auto params = s->numeric_params();
    params["N"] = N;
    const NamedFunction nf = convexity_function(*s, 0.0, N, params);
    Interval dom;
    if (s->has("domain")) dom = interval_key(*s, "domain");
    else if (nf.natural) dom = *nf.natural;
    else throw ConfigError(s->where("domain") + ": missing");
    const auto grid = linspace(dom.lo, dom.hi, grid_n);
    const double tol = tol_or(opts, default_tolerance(nf.f));
    auto passes = [&](double K) {
      return convexity::check_pointwise(nf.f, convexity::ConvexityParams(K, N, dom), grid, tol).pass;
    };
    Params p;
    p.add("f", nf.name).add("N", N).add("domain", format_number(dom.lo) + ":" + format_number(dom.hi));
    if (!passes(k_min)) {
      out.records.push_back({"certify.K", p.str(), -std::numeric_limits<double>::infinity(), "false"});
      notes << "N=" << format_number(N) << ": no certificate on lattice\n";
      continue;
    }
    double lo = k_min, hi = k_max;
    if (passes(hi)) {
      lo = hi;
      notes << "N=" << format_number(N) << ": K_max passes, certificate capped\n";
    } else {
      while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        (passes(mid) ? lo : hi) = mid;
      }
    }
    out.records.push_back({"certify.K", p.str(), lo, "true"});
  }
  out.exit_code = std::any_of(out.records.begin(), out.records.end(), record_fails) ? 1 : 0;
  out.summary = summarize(out.records, "negdimcd certify (worst_margin column holds the certified K)") +
                notes.str();
  return out;
}

}  // namespace negdimcd::cli
