#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <queue>
#include <random>

#include "lorentz/metrics.hpp"

using namespace lorentz;

namespace {

const double kLn3 = std::log(3.0);
const double kLn9 = std::log(9.0);

// Markowitz distance of the unit diamond in 1+1 from its separable form in null coordinates.
double diamond_oracle(const Event& x, const Event& y) {
  const auto f = [](double s) { return std::log((1 + s) / (1 - s)); };
  return std::abs(f(y[0] + y[1]) - f(x[0] + x[1])) + std::abs(f(y[0] - y[1]) - f(x[0] - x[1]));
}

// Same for the future cone of the origin.
double cone_oracle(const Event& x, const Event& y) {
  return std::abs(std::log((y[0] + y[1]) / (x[0] + x[1]))) +
         std::abs(std::log((y[0] - y[1]) / (x[0] - x[1])));
}

// ∫ F_Ω along [p, q] with a 1024-panel Simpson rule.
double integrated_cost(const Domain& dom, const Event& p, const Event& q) {
  const Vec v = q - p;
  return simpson([&](double s) { return infinitesimal_markowitz(dom, p + s * v, v); }, 0.0, 1.0, 1024);
}

Event sample(const Domain& dom, Rng& rng, double min_dist = 0.02) {
  return sample_interior(dom, rng, dom.sampling_box(), min_dist);
}

// Lightlike segment from p along a random null direction, kept inside.
Event null_partner(const Domain& dom, const Event& p, Rng& rng) {
  std::uniform_real_distribution<double> u(-M_PI, M_PI), f(0.1, 0.9);
  Vec v(p.size());
  v[0] = u(rng) > 0 ? 1.0 : -1.0;
  if (p.size() == 2) {
    v[1] = u(rng) > 0 ? 1.0 : -1.0;
  } else {
    const double th = u(rng);
    v[1] = std::cos(th);
    v[2] = std::sin(th);
  }
  const RayExit e = ray_exit(dom, p, v);
  const double reach = std::isfinite(e.param) ? e.param : 3.0;
  return p + (f(rng) * reach) * v;
}

}  // namespace

TEST_CASE("infinitesimal functional examples") {
  const HalfSpaceFuture h(2);
  CHECK(infinitesimal_markowitz(h, {1, 0}, {1, 1}) == doctest::Approx(1.0));
  const ConeFuture c(Vec{0, 0});
  // Past exit at (0.5, -0.5): distance sqrt(2)/2 for |v| = sqrt(2).
  CHECK(infinitesimal_markowitz(c, {1, 0}, {1, 1}) == doctest::Approx(2.0));
  CHECK(infinitesimal_markowitz(c, {1, 0.2}, {2, 2}) ==
        doctest::Approx(2 * infinitesimal_markowitz(c, {1, 0.2}, {1, 1})));
  CHECK_THROWS_AS(infinitesimal_markowitz(c, {1, 0}, {1, 0}), CausalityError);
}

TEST_CASE("edge cost examples") {
  const Diamond d({-1, 0}, {1, 0});
  CHECK(markowitz_edge_cost(d, {0.25, -0.25}, {0.5, 0}) == doctest::Approx(kLn3));
  CHECK(markowitz_edge_cost(d, {0.25, -0.25}, {0.25, -0.25}) == 0.0);
  const HalfSpaceFuture h(2);
  CHECK(markowitz_edge_cost(h, {1, 1}, {M_E, M_E}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(markowitz_edge_cost(h, {1, 0}, {2, 0}), CausalityError);
  CHECK_THROWS_AS(markowitz_edge_cost(d, {0, 0}, {2, 2}), DomainError);
}

TEST_CASE("edge cost equals the integral of the infinitesimal functional") {
  Rng rng(3);
  std::vector<std::unique_ptr<Domain>> doms;
  doms.push_back(std::make_unique<Diamond>(Event{-1, 0}, Event{1, 0}));
  doms.push_back(std::make_unique<Diamond>(Event{-1, 0}, Event{1, 0}, 1.0));
  doms.push_back(std::make_unique<ConeFuture>(Event{0, 0}));
  doms.push_back(std::make_unique<StableConeComplement>(2, 1.0));
  doms.push_back(std::make_unique<EuclideanBall>(Event{0, 0, 0}, 1.0));
  doms.push_back(std::make_unique<Diamond>(Event{-1, 0, 0}, Event{1, 0, 0}, 0.5));
  for (const auto& dom : doms) {
    for (int i = 0; i < 20; ++i) {
      const Event p = sample(*dom, rng, 0.05);
      const Event q = null_partner(*dom, p, rng);
      const double c = markowitz_edge_cost(*dom, p, q);
      CHECK(c == doctest::Approx(integrated_cost(*dom, p, q)).epsilon(1e-6));
    }
  }
}

TEST_CASE("upper bound examples") {
  const Diamond d({-1, 0}, {1, 0});
  const DistanceEstimate e = markowitz_upper(d, {0, 0}, {0, 0.5}, Mesh{.k = 64});
  CHECK(e.kind == EstimateKind::upper);
  CHECK(e.value >= kLn9 - 1e-9);
  CHECK(e.value <= kLn9 + 0.05);
  CHECK(markowitz_upper(d, {0, 0.1}, {0, 0.1}).value == 0.0);
  const ConeFuture c(Vec{0, 0});
  const double v = markowitz_upper(c, {1, 0}, {M_E, 0}, Mesh{.k = 64}).value;
  CHECK(v >= 2.0 - 1e-9);
  CHECK(v <= 2.05);
  CHECK_THROWS_AS(markowitz_upper(d, {0, 0}, {2, 0}), DomainError);
}

TEST_CASE("lattice chains reproduce separable closed forms") {
  Rng rng(7);
  const Diamond d({-1, 0}, {1, 0});
  const ConeFuture c(Vec{0, 0});
  for (int i = 0; i < 30; ++i) {
    const Event x = sample(d, rng), y = sample(d, rng);
    CHECK(markowitz_upper(d, x, y).value == doctest::Approx(diamond_oracle(x, y)).epsilon(1e-6));
    const Event p = sample(c, rng), q = sample(c, rng);
    CHECK(markowitz_upper(c, p, q).value == doctest::Approx(cone_oracle(p, q)).epsilon(1e-6));
  }
}

TEST_CASE("chains satisfy their invariants") {
  Rng rng(11);
  std::vector<std::unique_ptr<Domain>> doms;
  doms.push_back(std::make_unique<Diamond>(Event{-1, 0}, Event{1, 0}, 1.0));
  doms.push_back(std::make_unique<StableConeComplement>(2, 1.0));
  doms.push_back(std::make_unique<Diamond>(Event{-1, 0, 0}, Event{1, 0, 0}, 1.0));
  doms.push_back(std::make_unique<HalfSpaceFuture>(3));
  for (const auto& dom : doms) {
    for (int i = 0; i < 5; ++i) {
      const Event x = sample(*dom, rng), y = sample(*dom, rng);
      const DistanceEstimate e = markowitz_upper(*dom, x, y, Mesh{.k = 32, .node_budget = 200});
      REQUIRE(e.chain.has_value());
      const LightlikeChain& ch = *e.chain;
      CHECK(ch.vertices.front() == x);
      CHECK((ch.vertices.back() - y).norm() < 1e-9);
      for (size_t k = 0; k + 1 < ch.vertices.size(); ++k)
        CHECK(causal_classify(ch.vertices[k + 1] - ch.vertices[k]).kind == CausalKind::lightlike);
      CHECK(chain_cost_deviation(*dom, ch) < 1e-9);
      CHECK(ch.total == doctest::Approx(e.value));
    }
  }
}

TEST_CASE("lower bound examples") {
  const HalfSpaceFuture h(2);
  CHECK(markowitz_lower(h, {1, 0}, {M_E, 0}).value == doctest::Approx(1.0));
  const Diamond d({-1, 0}, {1, 0});
  const DistanceEstimate e = markowitz_lower(d, {0, 0}, {0.5, 0});
  CHECK(e.kind == EstimateKind::lower);
  CHECK(e.value == doctest::Approx(kLn9));
  CHECK(markowitz_lower(d, {0, 0}, {0, 0.5}).value == doctest::Approx(kLn9));
  CHECK(markowitz_lower(d, {0.1, 0}, {0.1, 0}).value == 0.0);
}

TEST_CASE("lower bounds never exceed upper bounds") {
  Rng rng(13);
  std::vector<std::unique_ptr<Domain>> doms;
  doms.push_back(std::make_unique<Diamond>(Event{-1, 0}, Event{1, 0}));
  doms.push_back(std::make_unique<Diamond>(Event{-1, 0}, Event{1, 0}, 1.0));
  doms.push_back(std::make_unique<ConeFuture>(Event{0, 0}));
  doms.push_back(std::make_unique<HalfSpaceFuture>(2));
  doms.push_back(std::make_unique<SpacelikeSlab>(2, 1.0));
  doms.push_back(std::make_unique<EuclideanBall>(Event{0, 0}, 1.0));
  doms.push_back(std::make_unique<HalfSpaceFuture>(3));
  doms.push_back(std::make_unique<Diamond>(Event{-1, 0, 0}, Event{1, 0, 0}));
  for (const auto& dom : doms) {
    for (int i = 0; i < 8; ++i) {
      const Event x = sample(*dom, rng), y = sample(*dom, rng);
      const double lo = markowitz_lower(*dom, x, y).value;
      const double up = markowitz_upper(*dom, x, y, Mesh{.k = 32, .node_budget = 200}).value;
      CHECK(lo <= up + 1e-9);
    }
  }
}

TEST_CASE("upper bounds are symmetric and satisfy the triangle inequality") {
  Rng rng(17);
  const Diamond sd({-1, 0}, {1, 0}, 1.0);
  const StableConeComplement om(2, 1.0);
  for (const Domain* dom : {static_cast<const Domain*>(&sd), static_cast<const Domain*>(&om)}) {
    for (int i = 0; i < 6; ++i) {
      const Event x = sample(*dom, rng), y = sample(*dom, rng), z = sample(*dom, rng);
      const double xy = markowitz_upper(*dom, x, y).value;
      const double yx = markowitz_upper(*dom, y, x).value;
      const double yz = markowitz_upper(*dom, y, z).value;
      const double xz = markowitz_upper(*dom, x, z).value;
      CHECK(std::abs(xy - yx) <= 2 * mesh_slack(xy));
      CHECK(xz <= xy + yz + 2 * mesh_slack(xz));
    }
  }
}

TEST_CASE("refinement never increases the upper bound") {
  Rng rng(19);
  const Diamond sd({-1, 0}, {1, 0}, 1.0);
  const Diamond sd3({-1, 0, 0}, {1, 0, 0}, 1.0);
  for (const Domain* dom : {static_cast<const Domain*>(&sd), static_cast<const Domain*>(&sd3)}) {
    for (int i = 0; i < 4; ++i) {
      const Event x = sample(*dom, rng), y = sample(*dom, rng);
      Mesh m{.k = 16, .margin = 4, .d = 8, .node_budget = 100};
      double prev = markowitz_upper(*dom, x, y, m).value;
      for (int r = 0; r < 2; ++r) {
        m = m.refined();
        const double v = markowitz_upper(*dom, x, y, m).value;
        CHECK(v <= prev + 1e-12);
        prev = v;
      }
    }
  }
}

TEST_CASE("larger domains give smaller distances") {
  Rng rng(23);
  const Diamond d({-1, 0}, {1, 0});
  const ConeFuture c(Vec{-1, 0});
  const SpacelikeSlab wide(2, 1.0);
  for (int i = 0; i < 10; ++i) {
    const Event x = sample(d, rng), y = sample(d, rng);
    const double in_d = markowitz_upper(d, x, y).value;
    CHECK(markowitz_upper(c, x, y).value <= in_d + mesh_slack(in_d));
    CHECK(markowitz_upper(wide, x, y).value <= in_d + mesh_slack(in_d));
  }
}

TEST_CASE("similarities and the inversion preserve diamond distances") {
  Rng rng(29);
  std::uniform_real_distribution<double> u(-1, 1);
  const Diamond d({-1, 0}, {1, 0});
  for (int i = 0; i < 10; ++i) {
    const Matrix a = Matrix::boost(2, 1, u(rng));
    const ConformalMap g = ConformalMap::similarity(1.5 + u(rng), a, Vec{u(rng), u(rng)});
    const Diamond gd = transform_diamond(d, g);
    const Event x = sample(d, rng), y = sample(d, rng);
    const double v0 = markowitz_upper(d, x, y).value;
    CHECK(markowitz_upper(gd, g.apply(x), g.apply(y)).value == doctest::Approx(v0).epsilon(1e-6));
  }
  // The inversion maps a diamond inside the future cone of the origin to a diamond.
  const Diamond far({1, 0}, {3, 0});
  const ConformalMap inv = ConformalMap::inversion(2);
  const Diamond image = transform_diamond(far, inv);
  for (int i = 0; i < 10; ++i) {
    const Event x = sample(far, rng), y = sample(far, rng);
    const double v0 = markowitz_upper(far, x, y).value;
    const double v1 = markowitz_upper(image, inv.apply(x), inv.apply(y)).value;
    CHECK(std::abs(v1 - v0) <= 2 * mesh_slack(v0));
  }
}

TEST_CASE("a complete lightlike line makes the pseudo-distance degenerate") {
  GraphForm f;
  f.lower = [](const Vec& p) { return p[1]; };
  f.upper = [](const Vec& p) { return p[1] + 1.0; };
  f.base = Box{Vec{-kInf, -kInf}, Vec{kInf, kInf}};
  const GraphDomain strip(2, f);
  const DistanceEstimate e = markowitz_upper(strip, {0.3, 0}, {0.6, 0.1}, Mesh{.k = 16});
  CHECK(e.degenerate);
  CHECK(e.witness == "pseudo-distance degenerate");
}

TEST_CASE("quasi-hyperbolic examples") {
  const HalfSpaceFuture h(2);
  QhGrid g;
  g.h = 0.02;
  g.box = Box{Vec{0.0, -1.5}, Vec{3.0, 1.5}};
  const DistanceEstimate v = quasi_hyperbolic_distance(h, {1, 0}, {M_E, 0}, g);
  CHECK(v.value == doctest::Approx(1.0).epsilon(0.02));
  CHECK(quasi_hyperbolic_distance(h, {1, 0}, {1, 0}, g).value == 0.0);
  for (double d : {0.5, 1.0, 2.0}) {
    const double exact = std::acosh(1.0 + d * d / 2.0);
    const double got = quasi_hyperbolic_distance(h, {1, 0}, {1, d}, g).value;
    CHECK(got == doctest::Approx(exact).epsilon(0.02));
    CHECK(got >= exact * (1 - 1e-3));
  }
}

TEST_CASE("lightlike-only quasi-hyperbolic paths cost at most sqrt 2 more") {
  Rng rng(31);
  const Diamond sd({-1, 0}, {1, 0}, 1.0);
  QhGrid full, light;
  full.h = 0.02;
  light.h = 0.01;
  light.lightlike_only = true;
  for (int i = 0; i < 5; ++i) {
    const Event x = sample(sd, rng, 0.1), y = sample(sd, rng, 0.1);
    const double k = quasi_hyperbolic_distance(sd, x, y, full).value;
    const double kl = quasi_hyperbolic_distance(sd, x, y, light).value;
    CHECK(kl >= k - mesh_slack(k));
    CHECK(kl <= std::sqrt(2.0) * k + mesh_slack(k));
  }
}

namespace {

// Exhaustive shortest path on a (t, p) grid with every causal pair in a window as an edge.
double brute_null(const std::function<double(double)>& tau, const Event& x, const Event& y,
                  double h, double tmax) {
  const int nt = static_cast<int>(std::round((tmax - h) / h)) + 1;
  const double p0 = x[1] - 1.0, p1 = y[1] + 1.0;
  const int np = static_cast<int>(std::round((p1 - p0) / h)) + 1;
  const auto at = [&](int i, int j) { return Event{h + i * h, p0 + j * h}; };
  const auto snap = [&](const Event& e) {
    return static_cast<int>(std::round((e[0] - h) / h)) * np +
           static_cast<int>(std::round((e[1] - p0) / h));
  };
  std::vector<double> dist(nt * np, kInf);
  using Key = std::pair<double, int>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;
  const int s = snap(x), t = snap(y);
  dist[s] = 0;
  pq.emplace(0.0, s);
  const int w = 6;
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    if (v == t) return d;
    const int i = v / np, j = v % np;
    for (int di = -w; di <= w; ++di)
      for (int dj = -std::abs(di); dj <= std::abs(di); ++dj) {
        const int a = i + di, b = j + dj;
        if ((di == 0 && dj == 0) || a < 0 || a >= nt || b < 0 || b >= np) continue;
        const double c = std::abs(tau(at(a, b)[0]) - tau(at(i, j)[0]));
        if (d + c < dist[a * np + b]) {
          dist[a * np + b] = d + c;
          pq.emplace(d + c, a * np + b);
        }
      }
  }
  return kInf;
}

}  // namespace

TEST_CASE("null distance examples") {
  const HalfSpaceFuture h(2);
  const TimeFunction lt = log_cosmological_time(h);
  const DistanceEstimate e = null_distance(h, lt, {1, 0}, {M_E, 0});
  CHECK(e.kind == EstimateKind::exact);
  CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(null_distance(h, lt, {1, 0.3}, {1, 0.3}).value == 0.0);
  const Event x{1, -0.5}, y{1, 0.5};
  const DistanceEstimate z = null_distance(h, lt, x, y, Mesh{.k = 256});
  CHECK(z.kind == EstimateKind::upper);
  const double oracle = brute_null([](double t) { return std::log(t); }, x, y, 0.01, 2.5);
  CHECK(z.value == doctest::Approx(oracle).epsilon(0.02));
  // A single tooth through (1.5, 0) is optimal.
  CHECK(z.value == doctest::Approx(2 * std::log(1.5)).epsilon(0.02));
}

TEST_CASE("null distance rejects a decreasing time function") {
  const HalfSpaceFuture h(2);
  const TimeFunction bad{"-t", [](const Event& x) { return -x[0]; }};
  CHECK_THROWS_AS(null_distance(h, bad, {1, 0}, {2, 0}), DomainError);
  CHECK_THROWS_AS(null_distance(h, bad, {1, -0.5}, {1, 0.5}, Mesh{.k = 16}), DomainError);
}

TEST_CASE("null distance sandwiches the Markowitz distance on the cone") {
  Rng rng(37);
  const ConeFuture c(Vec{0, 0});
  const TimeFunction lt = log_cosmological_time(c);
  for (int i = 0; i < 10; ++i) {
    const Event x = sample(c, rng), y = sample(c, rng);
    const double d = null_distance(c, lt, x, y, Mesh{.k = 64}).value;
    const double delta = markowitz_upper(c, x, y).value;
    CHECK(d <= delta + mesh_slack(delta));
    CHECK(delta <= 2 * d + mesh_slack(delta));
  }
}

TEST_CASE("hilbert distance examples") {
  const EuclideanBall b({0, 0}, 1.0);
  CHECK(hilbert_distance(b, {0, 0}, {0, 0.5}) == doctest::Approx(kLn3));
  CHECK(hilbert_distance(b, {0, 0.2}, {0, 0.2}) == 0.0);
  const Diamond d({-1, 0}, {1, 0});
  const double hd = hilbert_distance(d, {0, 0}, {0, 0.5});
  CHECK(hd == doctest::Approx(kLn3));
  CHECK(hd <= kLn9);
}

TEST_CASE("hilbert distance never exceeds the Markowitz distance on diamonds") {
  Rng rng(41);
  const Diamond d({-1, 0}, {1, 0});
  for (int i = 0; i < 50; ++i) {
    const Event x = sample(d, rng), y = sample(d, rng);
    CHECK(hilbert_distance(d, x, y) <= diamond_oracle(x, y) + 1e-9);
  }
}

TEST_CASE("quadtree field matches the diamond closed form at its nodes") {
  const Diamond d({-1, 0}, {1, 0});
  const MarkowitzField f(d, Box{Vec{-1, -1}, Vec{1, 1}}, 0.01);
  Rng rng(43);
  for (int i = 0; i < 5; ++i) {
    const int a = f.snap(sample(d, rng)), b = f.snap(sample(d, rng));
    const std::vector<double> dist = f.distances_from(a);
    CHECK(dist[b] == doctest::Approx(diamond_oracle(f.node(a), f.node(b))).epsilon(1e-6));
  }
}

TEST_CASE("quadtree field brackets stable diamond distances") {
  const Diamond sd({-1, 0}, {1, 0}, 1.0);
  const MarkowitzField f(sd, sd.sampling_box(), 0.01);
  Rng rng(47);
  for (int i = 0; i < 5; ++i) {
    const int a = f.snap(sample(sd, rng, 0.1)), b = f.snap(sample(sd, rng, 0.1));
    const double v = f.distances_from(a)[b];
    const double up = markowitz_upper(sd, f.node(a), f.node(b), Mesh{.k = 128}).value;
    CHECK(v >= markowitz_lower(sd, f.node(a), f.node(b)).value - 1e-9);
    CHECK(std::abs(v - up) <= 2 * mesh_slack(up));
  }
}
