#include "lorentz/validate.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "lorentz/hyplab.hpp"
#include "lorentz/oracles.hpp"

namespace lorentz {

std::string to_string(Level l) { return l == Level::fast ? "fast" : "full"; }

Level parse_level(const std::string& s) {
  if (s == "fast") return Level::fast;
  if (s == "full") return Level::full;
  throw DomainError("unknown level '" + s + "'");
}

namespace {

// Collects the smallest slack and the first violated check.
struct Tally {
  double margin = kInf;
  int checks = 0;
  int failures = 0;
  std::string first;

  void add(double slack, const std::string& what) {
    ++checks;
    margin = std::min(margin, slack);
    if (!(slack >= 0)) {
      if (failures++ == 0) first = what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string pair_str(const Event& x, const Event& y) { return x.str() + " -> " + y.str(); }

Event sample(const Domain& dom, Rng& rng, double min_dist = 0.02) {
  return sample_interior(dom, rng, dom.sampling_box(), min_dist * dom.scale());
}

// Future causal partner of x inside dom, a fraction of the way to the exit.
Event causal_partner(const Domain& dom, const Event& x, Rng& rng, double cap = 3.0) {
  std::uniform_real_distribution<double> u(-1, 1), f(0.1, 0.9);
  while (true) {
    Vec v(x.size());
    v[0] = 1.0;
    double n2 = 0;
    for (int i = 1; i < x.size(); ++i) {
      v[i] = u(rng);
      n2 += v[i] * v[i];
    }
    if (n2 > 1) continue;
    const RayExit e = ray_exit(dom, x, v);
    const double reach = std::isfinite(e.param) ? std::min(e.param, cap) : cap;
    const Event y = x + (f(rng) * reach) * v;
    if (dom.contains(y)) return y;
  }
}

struct Frame {
  CriterionResult r;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Frame(int id, std::string name, double budget) {
    r.id = id;
    r.name = std::move(name);
    r.budget_s = budget;
  }

  CriterionResult finish(const Tally& t, const std::string& extra) {
    r.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.margin = t.margin;
    r.pass = t.failures == 0 && t.checks > 0 && r.wall_s <= r.budget_s;
    std::ostringstream os;
    os << "checks=" << t.checks << " failures=" << t.failures;
    if (!extra.empty()) os << ' ' << extra;
    if (t.failures) os << " first_failure=[" << t.first << ']';
    if (r.wall_s > r.budget_s) os << " over_budget";
    r.detail = os.str();
    return r;
  }
};

// 1. Diamond oracle agreement.
CriterionResult diamond_oracle(Level, std::uint64_t seed) {
  Frame f(1, "diamond oracle agreement", 60);
  Tally t;
  Rng rng(seed);
  const Diamond d({-1, 0}, {1, 0});
  Mesh mesh;
  mesh.k = 128;
  double worst_rel = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Event x = sample(d, rng), y = sample(d, rng);
    const double v = delta_diamond_2d(d.a(), d.b(), x, y);
    const double up = markowitz_upper(d, x, y, mesh).value;
    const double lo = markowitz_lower(d, x, y).value;
    const std::string at = pair_str(x, y);
    t.add(up - v + 1e-9 * (1 + v), "upper below oracle " + at);
    t.add(0.03 * v - (up - v) + 1e-12, "upper above 3% " + at);
    t.add(1e-6 - (v - lo), "lower not within 1e-6 " + at);
    t.add(v - lo + 1e-9 * (1 + v), "lower above oracle " + at);
    if (v > 0) worst_rel = std::max(worst_rel, (up - v) / v);
  }
  return f.finish(t, "worst_upper_rel=" + fmt(worst_rel));
}

// 2. Cone and half-space equality cases.
CriterionResult equality_cases(Level level, std::uint64_t seed) {
  Frame f(2, "cone/half-space equality cases", 60);
  Tally t;
  Rng rng(seed);
  std::vector<int> sizes{2};
  if (level == Level::full) sizes.push_back(3);
  double worst = 0.0;
  for (int size : sizes) {
    const ConeFuture cone(time_axis(size) * 0.0);
    const HalfSpaceFuture half(size);
    const TimeFunction tc = log_cosmological_time(cone), th = log_cosmological_time(half);
    for (int i = 0; i < 50; ++i) {
      const Event x = sample(cone, rng);
      const Event y = causal_partner(cone, x, rng);
      const double v = delta_cone_future(cone.apex(), x, y);
      const double up = markowitz_upper(cone, x, y).value;
      const double nd = null_distance(cone, tc, x, y).value;
      t.add(0.03 * v - std::abs(up - v), "cone upper " + pair_str(x, y));
      t.add(0.03 * v - std::abs(2 * nd - v), "cone null " + pair_str(x, y));
      if (v > 0) worst = std::max(worst, std::abs(up - v) / v);
    }
    for (int i = 0; i < 50; ++i) {
      const Event x = sample(half, rng);
      const Event y = causal_partner(half, x, rng);
      const double v = delta_halfspace(half, x, y);
      const double up = markowitz_upper(half, x, y).value;
      const double nd = null_distance(half, th, x, y).value;
      t.add(0.03 * v - std::abs(up - v), "half-space upper " + pair_str(x, y));
      t.add(0.03 * v - std::abs(nd - v), "half-space null " + pair_str(x, y));
      if (v > 0) worst = std::max(worst, std::abs(up - v) / v);
    }
  }
  return f.finish(t, "worst_rel=" + fmt(worst));
}

// 3. Quasi-hyperbolic sandwich on the stable diamond.
CriterionResult qh_sandwich(Level, std::uint64_t seed) {
  Frame f(3, "quasi-hyperbolic sandwich", 300);
  Tally t;
  Rng rng(seed);
  const double eps = 1.0;
  const double lo_c = eps / std::sqrt((2 + eps) * (2 + eps) + eps * eps), hi_c = 2 * std::sqrt(2.0);
  double min_ratio = kInf, max_ratio = 0.0;
  for (int size : {2, 3}) {
    Event a(size), b(size);
    a[0] = -1;
    b[0] = 1;
    const Diamond d(a, b, eps);
    QhGrid grid;
    grid.h = size == 2 ? 0.02 : 0.05;
    for (int i = 0; i < 50; ++i) {
      const Event x = sample(d, rng, 0.05), y = sample(d, rng, 0.05);
      const double k = quasi_hyperbolic_distance(d, x, y, grid).value;
      const double delta = markowitz_upper(d, x, y).value;
      const std::string at = pair_str(x, y);
      t.add(delta - 0.95 * lo_c * k, "lower side " + at);
      t.add(1.05 * hi_c * k - delta, "upper side " + at);
      if (k > 0) {
        min_ratio = std::min(min_ratio, delta / k);
        max_ratio = std::max(max_ratio, delta / k);
      }
    }
  }
  return f.finish(t, "delta/k in [" + fmt(min_ratio) + "," + fmt(max_ratio) + "]");
}

// 4. Null-distance sandwich on the stable cone complement.
CriterionResult null_sandwich(Level level, std::uint64_t seed) {
  Frame f(4, "null-distance sandwich", 180);
  Tally t;
  Rng rng(seed);
  const double c = std::sqrt(10.0);
  std::vector<int> sizes{2};
  if (level == Level::full) sizes.push_back(3);
  double worst_nd = 0.0, worst_d = 0.0;
  for (int size : sizes) {
    const StableConeComplement om(size, 1.0);
    const TimeFunction tau = log_cosmological_time(om);
    for (int i = 0; i < 50; ++i) {
      const Event x = sample(om, rng, 0.05);
      const Event y = (i % 2 == 0) ? causal_partner(om, x, rng) : sample(om, rng, 0.05);
      const double nd = null_distance(om, tau, x, y).value;
      const double delta = markowitz_upper(om, x, y).value;
      const std::string at = pair_str(x, y);
      t.add(c * delta + 0.05 - nd, "d > sqrt(10) delta " + at);
      t.add(2 * nd + mesh_slack(delta) - delta, "delta > 2 d " + at);
      if (delta > 0) worst_nd = std::max(worst_nd, nd / delta);
      if (nd > 0) worst_d = std::max(worst_d, delta / nd);
    }
  }
  return f.finish(t, "max d/delta=" + fmt(worst_nd) + " max delta/d=" + fmt(worst_d));
}

// 5. Cosmological time closed form against the generic maximizer.
CriterionResult cosmological_time_check(Level level, std::uint64_t seed) {
  Frame f(5, "cosmological time closed form", 30);
  Tally t;
  Rng rng(seed);
  double worst = 0.0;
  std::vector<int> sizes{2};
  if (level == Level::full) sizes.push_back(3);
  for (int size : sizes)
    for (double eps : {0.5, 1.0, 2.0}) {
      const StableConeComplement om(size, eps);
      const double k = 1 + eps;
      for (int i = 0; i < 100; ++i) {
        const Event x = sample(om, rng);
        const double expect = (k * x[0] + x.space_norm()) / std::sqrt(k * k - 1);
        const double got = cosmological_time_generic(om, x, TimeSign::past).value;
        const double rel = std::abs(got - expect) / expect;
        worst = std::max(worst, rel);
        t.add(1e-3 - rel, "eps=" + fmt(eps) + " at " + x.str());
      }
    }
  return f.finish(t, "worst_rel=" + fmt(worst));
}

// 6. Stable acausality of Lipschitz graphs.
CriterionResult acausality_check(Level, std::uint64_t) {
  Frame f(6, "stable acausality estimator", 5);
  Tally t;
  const auto graph = [](double slope) {
    std::vector<Event> s;
    for (int i = 0; i <= 400; ++i) {
      const double p = -2.0 + 4.0 * i / 400;
      s.push_back(Vec{slope * std::abs(p), p});
    }
    return s;
  };
  for (double l : {0.25, 0.5, 0.8}) {
    const AcausalityReport r = stable_acausality_epsilon(graph(l));
    t.add(r.kind == AcausalityReport::Kind::stable ? 0.0 : -1.0, "L=" + fmt(l) + " not stable");
    t.add(1e-6 - std::abs(r.epsilon - (1 / l - 1)), "L=" + fmt(l) + " eps=" + fmt(r.epsilon));
  }
  const AcausalityReport cone = stable_acausality_epsilon(graph(1.0));
  t.add(cone.kind == AcausalityReport::Kind::not_stable ? 0.0 : -1.0, "lightcone reported stable");
  return f.finish(t, "");
}

// 7. Hyperbolicity discrimination.
struct SeriesCase {
  std::string label;
  const Domain* dom;
  ScaleFamily family;
  bool expect_bounded;
};

CriterionResult hyperbolicity_check(Level, std::uint64_t seed) {
  Frame f(7, "hyperbolicity discrimination", 600);
  Tally t;
  const HalfSpaceFuture half(3);
  const SpacelikeSlab slab(3, 1.0);
  const Diamond stable({-1, 0}, {1, 0}, 1.0);
  const Diamond plain({-1, 0}, {1, 0});
  const std::vector<SeriesCase> cases{
      {"HalfSpaceFuture(1+2)", &half, {Event{1, 0, 0}, 1.0, 8.0, 1.0, 2.0}, true},
      {"StableDiamond(1+1)", &stable, {stable.center(), 1.0, 8.0, 1.0, 2.0}, true},
      {"SpacelikeSlab(1+2)", &slab, {slab.center(), 1.0, 8.0, 1.0, 2.0}, false},
      {"Diamond(1+1)", &plain, {plain.center(), 1.0, 8.0, 1.0, 2.0}, false},
  };
  std::ostringstream extra;
  for (const SeriesCase& c : cases) {
    SamplerSpec spec;
    spec.family = c.family;
    spec.seed = seed;
    // 1+1 evaluations are cheap, so the pool is large enough to reach the per-scale sup.
    const bool planar = c.dom->size() == 2;
    spec.pool = planar ? 160 : 48;
    spec.quadruples = planar ? 3000000 : 20000;
    const HyperbolicityReport r = hyperbolicity_series(*c.dom, default_evaluator_factory(*c.dom), spec);
    const double ratio = growth_ratio(r.series);
    if (c.expect_bounded) t.add(1.5 - ratio, c.label + " ratio " + fmt(ratio) + " not < 1.5");
    else t.add(ratio - 2.0, c.label + " ratio " + fmt(ratio) + " not > 2");
    extra << c.label << ":" << to_string(classify_growth(r.series)) << "(";
    for (size_t i = 0; i < r.series.size(); ++i) extra << (i ? "," : "") << fmt(r.series[i].second);
    extra << ") ";
  }
  return f.finish(t, extra.str());
}

// 8. Quasi-geodesic certificate.
CriterionResult quasigeodesic_check(Level, std::uint64_t seed) {
  Frame f(8, "quasi-geodesic certificate", 120);
  Tally t;
  const ConeFuture cone(Event{0, 0});
  const Diamond stable({-1, 0}, {1, 0}, 1.0);
  struct Case {
    const Domain* dom;
    TimeFunction tau;
    Event from, to;
  };
  const std::vector<Case> cases{
      {&cone, log_cosmological_time(cone), {1, 0}, {M_E * M_E, 3}},
      {&stable, log_time_ratio(stable), {-0.8, 0.1}, {0.8, -0.2}},
  };
  std::ostringstream extra;
  for (const Case& c : cases) {
    const CausalPath path = causal_quasigeodesic(*c.dom, c.from, c.to, c.tau, 32);
    const MarkowitzEvaluator est(*c.dom, Mesh{});
    const QuasiGeodesicCheck q = check_quasigeodesic(est, path, 2.0, 0.05, 200, seed);
    t.add(q.worst_lower, c.dom->name() + " lower side");
    t.add(q.worst_upper, c.dom->name() + " upper side");
    extra << c.dom->name() << ":lower_margin=" << fmt(q.worst_lower) << ",upper_margin=" << fmt(q.worst_upper)
          << ' ';
  }
  return f.finish(t, extra.str());
}

// 9. Hilbert against Markowitz on the diamond.
CriterionResult hilbert_check(Level, std::uint64_t seed) {
  Frame f(9, "Hilbert vs Markowitz", 60);
  Tally t;
  Rng rng(seed);
  const Diamond d({-1, 0}, {1, 0});
  double c = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Event x = sample(d, rng), y = sample(d, rng);
    const double h = hilbert_distance(d, x, y);
    const double up = markowitz_upper(d, x, y).value;
    t.add(up + mesh_slack(up) - h, "H > delta " + pair_str(x, y));
    if (h > 0) c = std::max(c, up / h);
  }
  t.add(std::isfinite(c) ? 0.0 : -1.0, "equivalence constant not finite");
  return f.finish(t, "c=" + fmt(c));
}

// 10. Conformal invariance.
CriterionResult conformal_check(Level level, std::uint64_t seed) {
  Frame f(10, "conformal invariance", 120);
  Tally t;
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst_sim = 0.0, worst_inv = 0.0;
  std::vector<int> sizes{2};
  if (level == Level::full) sizes.push_back(3);
  for (int size : sizes)
    for (double eps : {0.0, 1.0}) {
      Event a(size), b(size);
      a[0] = -1;
      b[0] = 1;
      const Diamond d(a, b, eps);
      for (int i = 0; i < 10; ++i) {
        Vec shift(size);
        for (int j = 0; j < size; ++j) shift[j] = u(rng);
        // Boosts do not preserve widened cones, so the stable diamond gets scaling and translation only.
        const Matrix lin = eps > 0 ? Matrix::identity(size) : Matrix::boost(size, 1, u(rng));
        const ConformalMap g = ConformalMap::similarity(1.5 + u(rng), lin, shift);
        const Diamond gd = transform_diamond(d, g);
        const Event x = sample(d, rng), y = sample(d, rng);
        const double v0 = markowitz_upper(d, x, y).value;
        const double v1 = markowitz_upper(gd, g.apply(x), g.apply(y)).value;
        const double rel = std::abs(v1 - v0) / std::max(v0, 1e-12);
        worst_sim = std::max(worst_sim, rel);
        const double tol = size == 2 ? 1e-6 : 0.03;
        t.add(tol - rel, "similarity " + pair_str(x, y));
      }
      if (eps > 0) continue;
      Event fa(size), fb(size);
      fa[0] = 1;
      fb[0] = 3;
      const Diamond far(fa, fb, eps);
      const ConformalMap inv = ConformalMap::inversion(size);
      const Diamond image = transform_diamond(far, inv);
      for (int i = 0; i < 10; ++i) {
        const Event x = sample(far, rng), y = sample(far, rng);
        const double v0 = markowitz_upper(far, x, y).value;
        const double v1 = markowitz_upper(image, inv.apply(x), inv.apply(y)).value;
        const double rel = std::abs(v1 - v0) / std::max(v0, 1e-12);
        worst_inv = std::max(worst_inv, rel);
        t.add(0.03 - rel, "inversion " + pair_str(x, y));
      }
    }
  return f.finish(t, "worst_similarity_rel=" + fmt(worst_sim) + " worst_inversion_rel=" + fmt(worst_inv));
}

using CriterionFn = std::function<CriterionResult(Level, std::uint64_t)>;

const std::vector<CriterionFn>& table() {
  static const std::vector<CriterionFn> t{diamond_oracle,   equality_cases,      qh_sandwich,
                                          null_sandwich,    cosmological_time_check, acausality_check,
                                          hyperbolicity_check, quasigeodesic_check, hilbert_check,
                                          conformal_check};
  return t;
}

}  // namespace

std::vector<int> criterion_ids() {
  std::vector<int> ids;
  for (size_t i = 1; i <= table().size(); ++i) ids.push_back(static_cast<int>(i));
  return ids;
}

CriterionResult run_criterion(int id, Level level, std::uint64_t seed) {
  if (id < 1 || id > static_cast<int>(table().size())) throw DomainError("no criterion " + std::to_string(id));
  try {
    return table()[id - 1](level, seed);
  } catch (const std::exception& e) {
    CriterionResult r;
    r.id = id;
    r.name = "criterion " + std::to_string(id);
    r.pass = false;
    r.margin = -kInf;
    r.detail = std::string("exception: ") + e.what();
    return r;
  }
}

std::vector<CriterionResult> validate_suite(Level level, std::uint64_t seed) {
  std::vector<CriterionResult> out;
  for (int id : criterion_ids()) out.push_back(run_criterion(id, level, seed));
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << "criterion " << r.id << ' ' << (r.pass ? "PASS" : "FAIL") << ' ' << r.name << " margin=" << fmt(r.margin)
     << " time=" << fmt(r.wall_s) << "s/" << fmt(r.budget_s) << "s " << r.detail;
  return os.str();
}

}  // namespace lorentz
