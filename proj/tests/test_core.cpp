#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lorentz/core.hpp"

using namespace lorentz;

namespace {

// Cross ratio via line parameters, independent of the library's distance form.
double param_cross_ratio(double a, double p, double q, double b) {
  return std::abs(std::log(((q - a) * (b - p)) / ((p - a) * (b - q))));
}

Matrix random_lorentz(int size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  Matrix m = Matrix::identity(size);
  for (int k = 0; k < 4; ++k) {
    for (int i = 1; i < size; ++i) m = Matrix::boost(size, i, u(rng)) * m;
    for (int i = 1; i < size; ++i)
      for (int j = i + 1; j < size; ++j) m = Matrix::rotation(size, i, j, 2 * u(rng)) * m;
  }
  return m;
}

}  // namespace

TEST_CASE("minkowski form examples") {
  CHECK(minkowski_form({1, 1}, {1, 1}, 1.0) == doctest::Approx(-3.0));
  CHECK(minkowski_form({1, 1}, {1, 1}) == 0.0);
  CHECK(minkowski_form({2, 1, 1}, {1, 0, 3}) == doctest::Approx(-2 + 3));
  CHECK_THROWS_AS(minkowski_form({1, 1}, {1, 1, 0}), DimensionError);
}

TEST_CASE("causal classification") {
  auto c = causal_classify({1, 1});
  CHECK(c.kind == CausalKind::lightlike);
  CHECK(c.orientation == Orientation::future);
  c = causal_classify({1, 1}, 1.0);
  CHECK(c.kind == CausalKind::timelike);
  c = causal_classify({1, 1.5}, 1.0);
  CHECK(c.kind == CausalKind::timelike);
  CHECK(c.orientation == Orientation::future);
  c = causal_classify({-2, 1});
  CHECK(c.kind == CausalKind::timelike);
  CHECK(c.orientation == Orientation::past);
  c = causal_classify({0.5, 1});
  CHECK(c.kind == CausalKind::spacelike);
  CHECK(c.orientation == Orientation::none);
  c = causal_classify({1, 1 + 1e-12});
  CHECK(c.kind == CausalKind::lightlike);
}

TEST_CASE("time separation") {
  CHECK(time_separation({0, 0}, {2, 1}) == doctest::Approx(std::sqrt(3.0)));
  CHECK(time_separation({0, 0}, {1, 1}) == 0.0);
  CHECK(time_separation({1, 1}, {1, 1}) == 0.0);
  CHECK_THROWS_AS(time_separation({0, 0}, {0, 1}), CausalityError);
  CHECK_THROWS_AS(time_separation({1, 0}, {0, 0}), CausalityError);
}

TEST_CASE("rho_interval examples") {
  CHECK(rho_interval({-1, 1}, 0, 0.5) == doctest::Approx(std::log(3.0)));
  CHECK(rho_interval({0, kInf}, 1, std::exp(2.0)) == doctest::Approx(2.0));
  CHECK(rho_interval({-kInf, 0}, -1, -std::exp(-1.0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(rho_interval({-kInf, kInf}, 0, 1), DomainError);
  CHECK_THROWS_AS(rho_interval({-1, 1}, 0, 1), DomainError);
}

TEST_CASE("rho_interval agrees with the cross ratio of the interval") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 200; ++i) {
    const double a = -2 * u(rng), b = 3 * u(rng) + 0.1;
    const double s = a + (b - a) * u(rng), t = a + (b - a) * u(rng);
    CHECK(rho_interval({a, b}, s, t) == doctest::Approx(param_cross_ratio(a, s, t, b)).epsilon(1e-12));
  }
}

TEST_CASE("rho_interval is a metric") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.999, 0.999);
  const ProjectiveInterval j{-1, 1};
  for (int i = 0; i < 500; ++i) {
    const double r = u(rng), s = u(rng), t = u(rng);
    CHECK(rho_interval(j, r, r) == 0.0);
    CHECK(rho_interval(j, r, s) == doctest::Approx(rho_interval(j, s, r)));
    CHECK(rho_interval(j, r, t) <= rho_interval(j, r, s) + rho_interval(j, s, t) + 1e-12);
  }
}

TEST_CASE("cross_ratio_log examples") {
  const Endpoint inf = Endpoint::at_infinity(2);
  CHECK(cross_ratio_log(Endpoint::at({0, 0}), {1, 0}, {std::exp(1.0), 0}, inf) ==
        doctest::Approx(1.0));
  CHECK(cross_ratio_log(Endpoint::at({-1, -1}), {0, 0}, {0.5, 0.5}, Endpoint::at({1, 1})) ==
        doctest::Approx(std::log(3.0)));
  CHECK(cross_ratio_log(inf, {0, 0}, {1, 1}, inf) == 0.0);
  CHECK(cross_ratio_log(inf, {0, 0}, {1, 0}, Endpoint::at({2, 0})) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(cross_ratio_log(Endpoint::at({0, 0}), {1, 0}, {2, 1}, inf), DomainError);
  CHECK_THROWS_AS(cross_ratio_log(Endpoint::at({1.5, 0}), {1, 0}, {2, 0}, inf), DomainError);
}

TEST_CASE("cross_ratio_log matches a parametric oracle on random lines") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 300; ++i) {
    const Vec o{u(rng), u(rng), u(rng)}, d{u(rng), u(rng), u(rng)};
    std::vector<double> s{u(rng), u(rng), u(rng), u(rng)};
    std::sort(s.begin(), s.end());
    if (s[1] - s[0] < 1e-3 || s[3] - s[2] < 1e-3 || s[2] - s[1] < 1e-3) continue;
    const double got = cross_ratio_log(Endpoint::at(o + s[0] * d), o + s[1] * d, o + s[2] * d,
                                       Endpoint::at(o + s[3] * d));
    CHECK(got == doctest::Approx(param_cross_ratio(s[0], s[1], s[2], s[3])).epsilon(1e-9));
  }
}

TEST_CASE("inversion examples and involution") {
  const ConformalMap inv = ConformalMap::inversion(2);
  const Vec y = inv.apply({1, 0});
  CHECK(y[0] == doctest::Approx(-1.0));
  CHECK(y[1] == doctest::Approx(0.0));
  CHECK_THROWS_AS(inv.apply({1, 1}), DomainError);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 200; ++i) {
    const Vec x{u(rng), u(rng), u(rng)};
    const ConformalMap g = ConformalMap::inversion(3);
    if (std::abs(minkowski_form(x, x)) < 1e-3) continue;
    const Vec back = g.apply(g.apply(x));
    CHECK((back - x).norm() <= 1e-9 * (1 + x.norm()));
  }
}

TEST_CASE("similarities preserve the causal character and scale the form") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 200; ++i) {
    const Matrix a = random_lorentz(3, rng);
    CHECK(is_lorentz(a, 1e-8));
    const double lam = 0.5 + std::abs(u(rng));
    const ConformalMap g = ConformalMap::similarity(lam, a, Vec{u(rng), u(rng), u(rng)});
    const Vec x{u(rng), u(rng), u(rng)}, y{u(rng), u(rng), u(rng)};
    const Vec gx = g.apply(x), gy = g.apply(y);
    const double b0 = minkowski_form(y - x, y - x), b1 = minkowski_form(gy - gx, gy - gx);
    CHECK(b1 == doctest::Approx(lam * lam * b0).epsilon(1e-8).scale(1 + std::abs(b0)));
    const ConformalMap gi = g.inverse();
    CHECK((gi.apply(gx) - x).norm() <= 1e-8 * (1 + x.norm()));
  }
  Matrix bad = Matrix::identity(2);
  bad(0, 1) = 0.3;
  CHECK_THROWS_AS(ConformalMap::similarity(1.0, bad, Vec(2)), DomainError);
  CHECK_THROWS_AS(ConformalMap::similarity(0.0, Matrix::identity(2), Vec(2)), DomainError);
}

TEST_CASE("inversion maps null coordinate lines to null coordinate lines in 1+1") {
  // u' = -1/v, v' = -1/u with u = t + p, v = t - p.
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.2, 3);
  const ConformalMap g = ConformalMap::inversion(2);
  for (int i = 0; i < 100; ++i) {
    const double uu = u(rng), vv = u(rng);
    const Vec x{0.5 * (uu + vv), 0.5 * (uu - vv)};
    const Vec y = g.apply(x);
    CHECK(y[0] + y[1] == doctest::Approx(-1.0 / vv));
    CHECK(y[0] - y[1] == doctest::Approx(-1.0 / uu));
  }
}
