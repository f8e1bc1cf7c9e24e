#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lorentz/hyplab.hpp"
#include "lorentz/oracles.hpp"

using namespace lorentz;

namespace {

// Fixed tripod: three legs of length 3 meeting at w.
double tripod(const Event& x, const Event& y) {
  if (x == y) return 0.0;
  const bool hub = x[0] == 0.0 || y[0] == 0.0;
  return hub ? 3.0 : 6.0;
}

FunctionEvaluator cone_eval() {
  return FunctionEvaluator("cone", [](const Event& x, const Event& y) {
    return delta_cone_future(Event{0, 0}, x, y);
  });
}

// Causally ordered random walk, so every pair lies in the oracle's range.
std::vector<Event> causal_walk(Event p, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> dt(0.05, 0.6), slope(-1, 1);
  std::vector<Event> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(p);
    const double s = dt(rng);
    p = p + Vec{s, s * slope(rng)};
  }
  return out;
}

std::vector<Event> cone_pool(int n, std::uint64_t seed) { return causal_walk({1, 0}, n, seed); }

}  // namespace

TEST_CASE("gromov product") {
  const FunctionEvaluator t("tripod", tripod);
  const Event w{0, 0}, x{1, 0}, y{2, 0};
  CHECK(gromov_product(t, x, y, w) == 0.0);
  CHECK(gromov_product(t, x, x, w) == 3.0);
  CHECK(gromov_product(t, x, y, x) == 0.0);
}

TEST_CASE("four-point defect") {
  CHECK(four_point_defect(1, 1, 1, 1, 1, 1) == 0.0);
  CHECK(four_point_defect(0, 0, 0, 0, 0, 0) == 0.0);
  // Square with unit sides and diagonals 2: sums 2, 4, 2.
  CHECK(four_point_defect(1, 2, 1, 1, 2, 1) == 1.0);
  const auto e = cone_eval();
  const Event p{1, 0.2};
  CHECK(quadruple_defect(e, {p, p, p, p}) == 0.0);
  CHECK_THROWS_AS(four_point_delta(e, {p, p, p, p, {2, 0}}), DomainError);
}

TEST_CASE("defect is invariant under relabeling") {
  const auto e = cone_eval();
  const auto pts = cone_pool(20, 3);
  std::array<int, 4> perm{0, 1, 2, 3};
  for (int q = 0; q + 3 < 20; q += 4) {
    const std::array<Event, 4> base{pts[q], pts[q + 1], pts[q + 2], pts[q + 3]};
    const double v = quadruple_defect(e, base);
    std::sort(perm.begin(), perm.end());
    do {
      CHECK(quadruple_defect(e, {base[perm[0]], base[perm[1]], base[perm[2]], base[perm[3]]}) ==
            doctest::Approx(v).epsilon(1e-12));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("sampled delta is monotone in sample size") {
  const auto e = cone_eval();
  const auto pool = cone_pool(30, 5);
  double prev = 0.0;
  for (int n : {10, 50, 200, 800}) {
    const auto r = four_point_delta(e, pool, n, 11);
    CHECK(r.delta_hat >= prev);
    prev = r.delta_hat;
  }
  const HalfSpaceFuture h(2);
  const FunctionEvaluator he("halfspace", [&](const Event& x, const Event& y) { return delta_halfspace(h, x, y); });
  const auto hp = causal_walk({0.1, 0}, 30, 8);
  prev = 0.0;
  for (int n : {10, 100, 1000}) {
    const auto r = four_point_delta(he, hp, n, 4);
    CHECK(r.delta_hat >= prev);
    prev = r.delta_hat;
  }
}

TEST_CASE("report stores its worst quadruple") {
  const auto e = cone_eval();
  const auto r = four_point_delta(e, cone_pool(25, 17), 500, 1);
  CHECK(r.delta_hat >= 0.0);
  CHECK(std::abs(quadruple_defect(e, r.worst) - r.delta_hat) <= 1e-9);
  const auto again = four_point_delta(e, cone_pool(25, 17), 500, 1);
  CHECK(again.delta_hat == r.delta_hat);
}

TEST_CASE("growth verdicts") {
  CHECK(classify_growth({{1, 1.0}, {16, 1.4}}) == GrowthVerdict::bounded);
  CHECK(classify_growth({{1, 1.0}, {16, 2.1}}) == GrowthVerdict::growing);
  CHECK(classify_growth({{1, 1.0}, {16, 1.7}}) == GrowthVerdict::inconclusive);
  CHECK(growth_ratio({{1, 2.0}, {2, 3.0}, {4, 5.0}}) == 2.5);
  CHECK_THROWS_AS(growth_ratio({{1, 1.0}}), DomainError);
  CHECK(to_string(GrowthVerdict::growing) == "growing");
}

TEST_CASE("scale samples respect the floor and box") {
  const Diamond d({-1, 0}, {1, 0});
  ScaleFamily fam{d.center(), 1.0, 4.0, 1.0};
  Rng rng(3);
  for (double s : {1.0, 4.0}) {
    const auto pts = sample_scale(d, fam, s, 40, rng);
    CHECK(pts.size() == 40);
    for (const Event& p : pts) {
      CHECK(d.contains(p));
      CHECK(d.boundary_distance(p) >= fam.floor(s));
      CHECK(fam.region(s).contains(p));
    }
  }
}

TEST_CASE("cone axis is a (2,0)-quasi-geodesic") {
  const ConeFuture cone(Event{0, 0});
  const auto tf = log_cosmological_time(cone);
  const auto path = causal_quasigeodesic(cone, {1, 0}, {M_E, 0}, tf, 8);
  REQUIRE(path.vertices.size() == 9);
  for (int k = 0; k <= 8; ++k) CHECK(path.vertices[k][0] == doctest::Approx(std::exp(k / 8.0)).epsilon(1e-9));
  const auto oracle = cone_eval();
  CHECK(check_quasigeodesic(oracle, path, 2.0, 0.0, 30).worst_lower >= -1e-9);
  CHECK(check_quasigeodesic(oracle, path, 2.0, 0.0, 30).worst_upper >= -1e-9);
  const MarkowitzEvaluator est(cone, Mesh{.k = 32});
  const auto c = check_quasigeodesic(est, path, 2.0, 0.05, 20);
  CHECK(c.ok());

  const auto single = causal_quasigeodesic(cone, {1, 0}, {1, 0}, tf);
  CHECK(single.vertices.size() == 1);
  CHECK_THROWS_AS(causal_quasigeodesic(cone, {1, 0.5}, {1, -0.5}, tf), CausalityError);
}

TEST_CASE("diamond axis is a (2,0)-quasi-geodesic") {
  const Diamond d({-1, 0}, {1, 0});
  const auto path = causal_quasigeodesic(d, {-0.8, 0.1}, {0.7, -0.05}, log_time_ratio(d), 16);
  const FunctionEvaluator oracle("diamond", [&](const Event& x, const Event& y) {
    return delta_diamond_2d(d.a(), d.b(), x, y);
  });
  const auto c = check_quasigeodesic(oracle, path, 2.0, 0.0, 50);
  CHECK(c.worst_lower >= -1e-9);
  CHECK(c.worst_upper >= -1e-9);
  for (size_t i = 0; i + 1 < path.vertices.size(); ++i)
    CHECK(causally_precedes(path.vertices[i], path.vertices[i + 1]));
}

TEST_CASE("thin triangle defect") {
  const Event x{-0.5, 0}, y{0, 0}, z{0.5, 0};
  QuasiGeodesicTriangle tri;
  tri.sides = {sample_segment(x, y), sample_segment(y, z), sample_segment(z, x)};
  CHECK(tri.sides[0].size() == 33);
  CHECK(tri.x() == x);
  CHECK(tri.z() == z);
  const Diamond d({-1, 0}, {1, 0});
  const FunctionEvaluator oracle("diamond", [&](const Event& p, const Event& q) {
    return delta_diamond_2d(d.a(), d.b(), p, q);
  });
  double slack = 0.0;
  for (const auto& side : tri.sides)
    for (size_t i = 0; i + 1 < side.size(); ++i) slack = std::max(slack, oracle.distance(side[i], side[i + 1]));
  CHECK(thin_triangle_defect(oracle, tri) < 2 * slack);
}

TEST_CASE("witness families") {
  GraphForm f;
  f.lower = [](const Vec& p) { return std::max(0.0, p[1]); };
  f.upper = [](const Vec&) { return kInf; };
  f.lipschitz_lower = 1.0;
  f.lipschitz_upper = 0.0;
  f.base = Box{Vec{-kInf, -kInf}, Vec{kInf, kInf}};
  const GraphDomain g(2, f, {.convex = true});
  const auto ray = find_lightlike_boundary_ray(g);
  REQUIRE(ray.has_value());
  CHECK(ray->direction[1] == doctest::Approx(1.0));
  const auto tri = witness_family(g, WitnessKind::lightlike_boundary, 3);
  for (const Event& v : tri.sides[0]) CHECK(g.boundary_distance(v) < 0.2);
  const Box compact{{-1, -1}, {1, 1}};
  bool through = false;
  for (const Event& v : tri.sides[2]) through = through || compact.contains(v);
  CHECK(through);
  // z lies on the future cone of y.
  CHECK(causal_classify(tri.z() - tri.y()).kind == CausalKind::lightlike);

  const SpacelikeSlab slab(3, 1.0);
  const auto flat = witness_family(slab, WitnessKind::flat_slice, 0);
  for (int s = 0; s < 3; ++s) {
    CHECK(flat.sides[s].front()[0] == 0.0);
    CHECK((flat.sides[s].back() - flat.sides[s].front()).norm() == doctest::Approx(1.0));
  }

  const Diamond stable({-1, 0}, {1, 0}, 1.0);
  CHECK_THROWS_AS(witness_family(stable, WitnessKind::lightlike_boundary, 0), DomainError);
  CHECK_THROWS_AS(witness_family(stable, WitnessKind::broken_segment, 0), DomainError);
  CHECK_THROWS_AS(witness_family(SpacelikeSlab(2, 1.0), WitnessKind::flat_slice, 0), DomainError);

  const Diamond plain({-1, 0}, {1, 0});
  const auto broken = witness_family(plain, WitnessKind::broken_segment, 2);
  CHECK(causal_classify(broken.y() - broken.x()).kind == CausalKind::lightlike);
  CHECK(causal_classify(broken.y() - broken.z()).kind == CausalKind::lightlike);
  CHECK(causal_classify(broken.z() - broken.x()).kind == CausalKind::spacelike);
}

TEST_CASE("zigzag paths are causal and end at the target") {
  const Event a{-0.8, 0}, b{0.8, 0.3};
  for (int teeth : {1, 3, 8}) {
    const auto z = zigzag_path(a, b, teeth);
    CHECK(z.front() == a);
    CHECK((z.back() - b).norm() < 1e-12);
    for (size_t i = 0; i + 1 < z.size(); ++i) CHECK(causally_related(z[i], z[i + 1]));
  }
  const auto z3 = zigzag_path({0, 0, 0}, {1, 0.2, 0.3}, 4);
  for (size_t i = 0; i + 1 < z3.size(); ++i) CHECK(causally_related(z3[i], z3[i + 1]));
  CHECK_THROWS_AS(zigzag_path({0, 0}, {0.1, 1}, 2), CausalityError);
}

TEST_CASE("causal thinness") {
  const Diamond d({-1, 0}, {1, 0});
  const FunctionEvaluator oracle("diamond", [&](const Event& p, const Event& q) {
    return delta_diamond_2d(d.a(), d.b(), p, q);
  });
  const auto axis = sample_segment({-0.5, 0}, {0.5, 0});
  CHECK(causal_thinness(oracle, axis, axis) == 0.0);
  const auto zig = zigzag_path({-0.5, 0}, {0.5, 0}, 4);
  CHECK(causal_thinness(oracle, zig, axis) > 0.0);

  const SpacelikeSlab slab(2, 1.0);
  const auto detour = std::vector<Event>{{0, 0}, {0, 1}, {0, 2}};
  const FunctionEvaluator any("zero", [](const Event&, const Event&) { return 0.0; });
  CHECK_THROWS_AS(causal_thinness(any, detour, detour), CausalityError);
}

TEST_CASE("field evaluator snaps and agrees with its own distances") {
  const Diamond d({-1, 0}, {1, 0});
  const auto field = std::make_shared<MarkowitzField>(d, d.sampling_box(), 0.05);
  const FieldEvaluator e(field);
  const std::vector<Event> pts{{0, 0}, {0.2, 0.1}, {-0.3, 0.2}, {0.1, -0.4}};
  const auto prepared = e.prepare(pts);
  const auto m = e.matrix(pts);
  for (int i = 0; i < 4; ++i) {
    CHECK(d.contains(prepared[i]));
    CHECK(m[i][i] == 0.0);
    for (int j = 0; j < 4; ++j) {
      CHECK(m[i][j] == m[j][i]);
      CHECK(m[i][j] == doctest::Approx(e.distance(pts[i], pts[j])).epsilon(1e-9));
    }
  }
}
