#include "lorentz/hyplab.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "../metrics/internal.hpp"

namespace lorentz {

// ---- evaluators ----

std::vector<std::vector<double>> DistanceEvaluator::matrix(const std::vector<Event>& pts) const {
  const int n = static_cast<int>(pts.size());
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<double> vals(pairs.size());
  parallel_for(static_cast<int>(pairs.size()), [&](int k) {
    vals[k] = distance(pts[pairs[k].first], pts[pairs[k].second]);
  });
  for (size_t k = 0; k < pairs.size(); ++k)
    m[pairs[k].first][pairs[k].second] = m[pairs[k].second][pairs[k].first] = vals[k];
  return m;
}

double MarkowitzEvaluator::distance(const Event& x, const Event& y) const {
  if (!planar_ || dom_.size() == 2 || x == y) return markowitz_upper(dom_, x, y, mesh_).value;
  const SectionDomain sec(dom_, x, detail::section_direction(x, y));
  return markowitz_upper(sec, Event{0.0, 0.0}, sec.project(y), mesh_).value;
}

std::vector<Event> FieldEvaluator::prepare(const std::vector<Event>& pts) const {
  std::vector<Event> out;
  for (const Event& p : pts) out.push_back(field_->node(field_->snap(p)));
  return out;
}

double FieldEvaluator::distance(const Event& x, const Event& y) const {
  return field_->distances_from(field_->snap(x))[field_->snap(y)];
}

std::vector<std::vector<double>> FieldEvaluator::matrix(const std::vector<Event>& pts) const {
  const int n = static_cast<int>(pts.size());
  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = field_->snap(pts[i]);
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  parallel_for(n, [&](int i) {
    const std::vector<double> d = field_->distances_from(ids[i]);
    for (int j = 0; j < n; ++j) m[i][j] = d[ids[j]];
  });
  // Symmetrize against round-off in the two Dijkstra runs.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m[i][j] = m[j][i] = std::min(m[i][j], m[j][i]);
  return m;
}

// ---- four-point condition ----

double gromov_product(const DistanceEvaluator& d, const Event& x, const Event& y, const Event& w) {
  return 0.5 * (d.distance(w, x) + d.distance(w, y) - d.distance(x, y));
}

double four_point_defect(double xy, double xz, double xw, double yz, double yw, double zw) {
  std::array<double, 3> s{xy + zw, xz + yw, xw + yz};
  std::sort(s.begin(), s.end());
  return 0.5 * (s[2] - s[1]);
}

double quadruple_defect(const DistanceEvaluator& d, const std::array<Event, 4>& q) {
  const auto m = d.matrix({q[0], q[1], q[2], q[3]});
  return four_point_defect(m[0][1], m[0][2], m[0][3], m[1][2], m[1][3], m[2][3]);
}

namespace {

struct PoolDelta {
  double delta = 0.0;
  std::array<int, 4> worst{0, 1, 2, 3};
};

PoolDelta pool_delta(const std::vector<std::vector<double>>& m, int quadruples, Rng& rng) {
  const int n = static_cast<int>(m.size());
  std::uniform_int_distribution<int> pick(0, n - 1);
  PoolDelta out;
  out.delta = -1.0;
  for (int q = 0; q < quadruples; ++q) {
    std::array<int, 4> id{};
    for (int k = 0; k < 4; ++k) {
      do {
        id[k] = pick(rng);
      } while (std::find(id.begin(), id.begin() + k, id[k]) != id.begin() + k);
    }
    const double v = four_point_defect(m[id[0]][id[1]], m[id[0]][id[2]], m[id[0]][id[3]],
                                       m[id[1]][id[2]], m[id[1]][id[3]], m[id[2]][id[3]]);
    if (v > out.delta) {
      out.delta = v;
      out.worst = id;
    }
  }
  out.delta = std::max(out.delta, 0.0);
  return out;
}

}  // namespace

HyperbolicityReport four_point_delta(const DistanceEvaluator& d, const std::vector<Event>& pool,
                                     int quadruples, std::uint64_t seed) {
  const std::vector<Event> pts = d.prepare(pool);
  std::vector<Event> distinct;
  for (const Event& p : pts)
    if (std::find(distinct.begin(), distinct.end(), p) == distinct.end()) distinct.push_back(p);
  if (distinct.size() < 4) throw DomainError("four_point_delta: fewer than 4 distinct points");
  Rng rng(seed);
  const PoolDelta pd = pool_delta(d.matrix(distinct), quadruples, rng);
  HyperbolicityReport r;
  r.delta_hat = pd.delta;
  r.quadruples = quadruples;
  for (int k = 0; k < 4; ++k) r.worst[k] = distinct[pd.worst[k]];
  return r;
}

std::string to_string(GrowthVerdict v) {
  switch (v) {
    case GrowthVerdict::bounded: return "bounded";
    case GrowthVerdict::growing: return "growing";
    case GrowthVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

double growth_ratio(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 2) throw DomainError("growth_ratio needs at least two scales");
  const double first = series.front().second, last = series.back().second;
  if (first <= 0) return last > 0 ? kInf : 1.0;
  return last / first;
}

GrowthVerdict classify_growth(const std::vector<std::pair<double, double>>& series) {
  const double r = growth_ratio(series);
  if (r < 1.5) return GrowthVerdict::bounded;
  if (r > 2.0) return GrowthVerdict::growing;
  return GrowthVerdict::inconclusive;
}

Box ScaleFamily::region(double s) const {
  const double r = d0 * r_mul * s;
  Box b{center, center};
  for (int i = 0; i < center.size(); ++i) {
    b.lo[i] -= r;
    b.hi[i] += r;
  }
  return b;
}

std::vector<Event> sample_scale(const Domain& dom, const ScaleFamily& fam, double s, int count, Rng& rng) {
  const Box box = fam.region(s);
  const double floor = fam.floor(s);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> g;
  // Moves x along a random null line to a log-uniform fraction of the way to the exit.
  const auto push = [&](const Event& x) -> std::optional<Event> {
    Vec l(x.size());
    for (int i = 1; i < x.size(); ++i) l[i] = g(rng);
    const double sn = l.space_norm();
    if (sn == 0) return std::nullopt;
    l = l / sn;
    l[0] = u01(rng) < 0.5 ? 1.0 : -1.0;
    const RayExit e = dom.exit(x, l);
    if (!std::isfinite(e.param)) return std::nullopt;
    const double lo = std::log(0.25 * floor), hi = std::log(e.param);
    if (lo >= hi) return std::nullopt;
    const double rem = std::exp(lo + u01(rng) * (hi - lo));
    return x + (e.param - rem) * l;
  };
  std::vector<Event> out;
  while (static_cast<int>(out.size()) < count) {
    Event x = sample_interior(dom, rng, box, floor);
    if (out.size() % 2 == 1) {
      const int pushes = u01(rng) < 0.5 ? 1 : 2;
      bool ok = true;
      for (int k = 0; k < pushes && ok; ++k) {
        const auto y = push(x);
        ok = y.has_value();
        if (ok) x = *y;
      }
      if (!ok) continue;
    }
    if (box.contains(x) && dom.contains(x) && dom.boundary_distance(x) >= floor) out.push_back(x);
  }
  return out;
}

EvaluatorFactory default_evaluator_factory(const Domain& dom) {
  const Domain* d = &dom;
  return [d](const Box& region, double floor) -> std::unique_ptr<DistanceEvaluator> {
    if (d->size() == 2) {
      Box r = region;
      const Box sb = d->sampling_box();
      for (int i = 0; i < 2; ++i) {
        const double half = 0.5 * (r.hi[i] - r.lo[i]);
        r.lo[i] -= 0.5 * half;
        r.hi[i] += 0.5 * half;
        if (d->flags().bounded) {
          r.lo[i] = std::max(r.lo[i], sb.lo[i]);
          r.hi[i] = std::min(r.hi[i], sb.hi[i]);
        }
      }
      return std::make_unique<FieldEvaluator>(std::make_shared<MarkowitzField>(*d, r, floor));
    }
    return std::make_unique<MarkowitzEvaluator>(*d, Mesh{.k = 64}, true);
  };
}

HyperbolicityReport hyperbolicity_series(const Domain& dom, const EvaluatorFactory& make,
                                         const SamplerSpec& spec) {
  HyperbolicityReport r;
  r.delta_hat = -1.0;
  Rng rng(spec.seed);
  for (double s : spec.scales) {
    const std::vector<Event> pool = sample_scale(dom, spec.family, s, spec.pool, rng);
    const auto ev = make(spec.family.region(s), spec.family.floor(s));
    const HyperbolicityReport one = four_point_delta(*ev, pool, spec.quadruples, rng());
    r.series.emplace_back(s, one.delta_hat);
    r.quadruples += one.quadruples;
    if (one.delta_hat > r.delta_hat) {
      r.delta_hat = one.delta_hat;
      r.worst = one.worst;
    }
  }
  r.delta_hat = std::max(r.delta_hat, 0.0);
  return r;
}

// ---- quasi-geodesics and triangles ----

CausalPath causal_quasigeodesic(const Domain& dom, const Event& from, const Event& to,
                                const TimeFunction& tau, int segments) {
  if (!dom.contains(from) || !dom.contains(to)) throw DomainError("causal_quasigeodesic: point outside Ω");
  if (!causally_precedes(from, to)) throw CausalityError("causal_quasigeodesic: from must precede to");
  CausalPath path;
  const double t0 = tau.tau(from);
  if (from == to) {
    path.vertices = {from};
    path.tau = {t0};
    return path;
  }
  const double t1 = tau.tau(to);
  if (!(t1 > t0)) throw DomainError("causal_quasigeodesic: time function not increasing");
  const Vec d = to - from;
  path.vertices.push_back(from);
  path.tau.push_back(t0);
  double lo_s = 0.0;
  for (int k = 1; k < segments; ++k) {
    const double target = t0 + (t1 - t0) * k / segments;
    double lo = lo_s, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (tau.tau(from + mid * d) < target) lo = mid;
      else hi = mid;
    }
    lo_s = 0.5 * (lo + hi);
    path.vertices.push_back(from + lo_s * d);
    path.tau.push_back(tau.tau(path.vertices.back()));
  }
  path.vertices.push_back(to);
  path.tau.push_back(t1);
  return path;
}

QuasiGeodesicCheck check_quasigeodesic(const DistanceEvaluator& d, const CausalPath& path, double a,
                                       double b, int pairs, std::uint64_t seed) {
  QuasiGeodesicCheck c;
  const int n = static_cast<int>(path.vertices.size());
  if (n < 2) {
    c.worst_lower = c.worst_upper = 0.0;
    return c;
  }
  Rng rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<std::pair<int, int>> ij;
  while (static_cast<int>(ij.size()) < pairs) {
    const int i = pick(rng), j = pick(rng);
    if (i != j) ij.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::vector<double> dist(ij.size());
  parallel_for(static_cast<int>(ij.size()), [&](int k) {
    dist[k] = d.distance(path.vertices[ij[k].first], path.vertices[ij[k].second]);
  });
  for (size_t k = 0; k < ij.size(); ++k) {
    const double dt = std::abs(path.tau[ij[k].second] - path.tau[ij[k].first]);
    c.worst_lower = std::min(c.worst_lower, dist[k] - (dt / a - b));
    c.worst_upper = std::min(c.worst_upper, (a * dt + b) - dist[k]);
  }
  c.pairs = pairs;
  return c;
}

std::vector<Event> sample_segment(const Event& p, const Event& q, int vertices) {
  std::vector<Event> out;
  for (int i = 0; i < vertices; ++i) out.push_back(p + (static_cast<double>(i) / (vertices - 1)) * (q - p));
  return out;
}

double thin_triangle_defect(const DistanceEvaluator& d, const QuasiGeodesicTriangle& tri) {
  std::vector<Event> all;
  std::vector<int> side_of;
  for (int s = 0; s < 3; ++s)
    for (const Event& v : tri.sides[s]) {
      all.push_back(v);
      side_of.push_back(s);
    }
  const auto m = d.matrix(d.prepare(all));
  double worst = 0.0;
  for (size_t i = 0; i < all.size(); ++i) {
    double best = kInf;
    for (size_t j = 0; j < all.size(); ++j)
      if (side_of[j] != side_of[i]) best = std::min(best, m[i][j]);
    worst = std::max(worst, best);
  }
  return worst;
}

std::optional<LightlikeRay> find_lightlike_boundary_ray(const Domain& dom) {
  const auto form = dom.graph_form();
  if (!form) return std::nullopt;
  const int size = dom.size();
  const int per_axis = size == 2 ? 81 : (size == 3 ? 21 : 7);
  std::vector<Vec> dirs = detail::sphere_directions(size, 16, 0.0, Vec(size));
  std::vector<double> lo(size), hi(size);
  for (int i = 1; i < size; ++i) {
    lo[i] = std::isfinite(form->base.lo[i]) ? form->base.lo[i] : -2.0;
    hi[i] = std::isfinite(form->base.hi[i]) ? form->base.hi[i] : 2.0;
  }
  std::vector<int> idx(size, 0);
  while (true) {
    Event p(size);
    for (int i = 1; i < size; ++i) p[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / (per_axis - 1);
    const double t = form->lower(p);
    if (std::isfinite(t)) {
      for (const Vec& w : dirs) {
        bool line = true;
        for (double s : {0.5, 1.0, 2.0, 4.0, 8.0}) {
          const Event q = p + s * w;
          if (!form->base.contains(q)) {
            line = false;
            break;
          }
          if (std::abs(form->lower(q) - (t + s)) > 1e-9 * (1.0 + std::abs(t) + s)) {
            line = false;
            break;
          }
        }
        if (line) {
          Event base = p;
          base[0] = t;
          Vec l = w;
          l[0] = 1.0;
          return LightlikeRay{base, l};
        }
      }
    }
    int k = 1;
    while (k < size && idx[k] == per_axis - 1) idx[k++] = 0;
    if (k == size) break;
    ++idx[k];
  }
  return std::nullopt;
}

QuasiGeodesicTriangle witness_family(const Domain& dom, WitnessKind kind, int k) {
  QuasiGeodesicTriangle tri;
  Event x, y, z;
  switch (kind) {
    case WitnessKind::lightlike_boundary: {
      const auto ray = find_lightlike_boundary_ray(dom);
      if (!ray) throw DomainError(dom.name() + ": no lightlike half-line in the boundary");
      const double eta = std::ldexp(1.0, -k), len = std::ldexp(1.0, k);
      const Vec up = time_axis(dom.size());
      x = ray->base + eta * up;
      y = x + len * ray->direction;
      z = ray->base + (eta + 2.0 * len) * up;
      break;
    }
    case WitnessKind::broken_segment: {
      const auto* d = dynamic_cast<const Diamond*>(&dom);
      if (!d || d->eps() > 0 || d->size() != 2)
        throw DomainError(dom.name() + ": no broken lightlike segment in the future boundary");
      const Vec span = d->b() - d->a();
      const double alpha = 0.5 * (span[0] + span[1]), beta = 0.5 * (span[0] - span[1]);
      const auto at = [&](double u, double w) {
        return d->a() + Vec{alpha * u + beta * w, alpha * u - beta * w};
      };
      const double eta = std::ldexp(1.0, -(k + 2));
      x = at(eta, 1 - eta);
      y = at(1 - eta, 1 - eta);
      z = at(1 - eta, eta);
      break;
    }
    case WitnessKind::flat_slice: {
      if (dom.size() < 3) throw DomainError("flat-slice triangles need n >= 2");
      Event c = dom.center();
      c[0] = 0.0;
      const double r = std::ldexp(1.0, k) / std::sqrt(3.0);
      std::array<Event, 3> v;
      for (int i = 0; i < 3; ++i) {
        v[i] = c;
        v[i][1] += r * std::cos(2 * M_PI * i / 3);
        v[i][2] += r * std::sin(2 * M_PI * i / 3);
      }
      x = v[0];
      y = v[1];
      z = v[2];
      break;
    }
  }
  for (const Event& p : {x, y, z, 0.5 * (x + y), 0.5 * (y + z), 0.5 * (z + x)})
    if (!dom.contains(p)) throw DomainError(dom.name() + ": witness triangle leaves the domain at " + p.str());
  tri.sides = {sample_segment(x, y), sample_segment(y, z), sample_segment(z, x)};
  tri.a = 2.0;
  tri.b = 0.0;
  return tri;
}

std::vector<Event> zigzag_path(const Event& from, const Event& to, int teeth, int per_segment) {
  const Vec d = to - from;
  const double tt = d[0], pp = d.space_norm();
  if (!(tt >= pp)) throw CausalityError("zigzag_path: endpoints not causally ordered");
  const Vec e = detail::section_direction(from, to);
  Vec up = e, down = -e;
  up[0] = down[0] = 1.0;
  const double s1 = (tt + pp) / (2.0 * teeth), s2 = (tt - pp) / (2.0 * teeth);
  std::vector<Event> out{from};
  Event cur = from;
  for (int k = 0; k < teeth; ++k) {
    for (const auto& [v, s] : {std::pair{up, s1}, std::pair{down, s2}}) {
      const Event next = cur + s * v;
      for (int j = 1; j <= per_segment; ++j) out.push_back(cur + (static_cast<double>(j) / per_segment) * (next - cur));
      cur = next;
    }
  }
  out.back() = to;
  return out;
}

double causal_thinness(const DistanceEvaluator& d, const std::vector<Event>& first,
                       const std::vector<Event>& second) {
  for (const auto* c : {&first, &second})
    for (size_t i = 0; i + 1 < c->size(); ++i)
      if (!causally_related((*c)[i], (*c)[i + 1]))
        throw CausalityError("causal_thinness: curve is not causal at " + (*c)[i].str());
  if (first.empty() || second.empty()) throw DomainError("causal_thinness: empty curve");
  if (first.front() != second.front() || first.back() != second.back())
    throw DomainError("causal_thinness: curves must share endpoints");
  std::vector<Event> all = first;
  all.insert(all.end(), second.begin(), second.end());
  const auto m = d.matrix(d.prepare(all));
  const size_t n1 = first.size();
  double worst = 0.0;
  for (size_t i = 0; i < n1; ++i) {
    double best = kInf;
    for (size_t j = n1; j < all.size(); ++j) best = std::min(best, m[i][j]);
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace lorentz
