#include <algorithm>
#include <atomic>
#include <cmath>
#include <queue>
#include <tuple>

#include "internal.hpp"

namespace lorentz {

Mesh Mesh::refined() const {
  Mesh m = *this;
  if (m.reach_budget == 0) m.reach_budget = node_budget;
  m.k *= 2;
  m.margin *= 2;
  m.d *= 2;
  m.node_budget *= 2;
  return m;
}

std::string Mesh::str() const {
  return "k=" + std::to_string(k) + " m=" + std::to_string(margin) + " d=" + std::to_string(d) +
         " N=" + std::to_string(node_budget) +
         " R=" + std::to_string(reach_budget ? reach_budget : node_budget) +
         " seed=" + std::to_string(seed);
}

double mesh_slack(double value) { return std::max(0.05 * std::abs(value), 0.05); }

std::string to_string(EstimateKind k) {
  switch (k) {
    case EstimateKind::upper: return "upper";
    case EstimateKind::lower: return "lower";
    case EstimateKind::exact: return "exact";
  }
  return "?";
}

namespace detail {

ShortestPaths dijkstra(const Graph& g, int source, int target) {
  const int n = static_cast<int>(g.size());
  ShortestPaths sp;
  sp.dist.assign(n, kInf);
  sp.hops.assign(n, 0);
  sp.prev.assign(n, -1);
  sp.prev_arc.assign(n, -1);
  using Key = std::tuple<double, int, int>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;
  std::vector<char> done(n, 0);
  sp.dist[source] = 0.0;
  pq.emplace(0.0, 0, source);
  while (!pq.empty()) {
    const auto [d, h, v] = pq.top();
    pq.pop();
    if (done[v]) continue;
    done[v] = 1;
    if (v == target) break;
    for (int a = 0; a < static_cast<int>(g[v].size()); ++a) {
      const Arc& e = g[v][a];
      const double nd = d + e.cost;
      const int nh = h + 1;
      if (nd < sp.dist[e.to] || (nd == sp.dist[e.to] && nh < sp.hops[e.to])) {
        sp.dist[e.to] = nd;
        sp.hops[e.to] = nh;
        sp.prev[e.to] = v;
        sp.prev_arc[e.to] = a;
        pq.emplace(nd, nh, e.to);
      }
    }
  }
  return sp;
}

std::vector<int> trace(const ShortestPaths& sp, int target) {
  std::vector<int> path;
  for (int v = target; v >= 0; v = sp.prev[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

double link_cost(double past_param, double future_param) {
  double c = 0.0;
  if (std::isfinite(past_param)) c += std::log1p(1.0 / past_param);
  if (std::isfinite(future_param)) c += std::log1p(1.0 / (future_param - 1.0));
  return c;
}

LineExits line_exits(const Domain& dom, const Event& p, const Vec& dir) {
  return {dom.exit(p, -dir).param, dom.exit(p, dir).param};
}

NullLattice build_lattice(const Domain& dom, const Event& x, const Event& y, const Mesh& mesh) {
  (void)dom;
  NullLattice lat;
  lat.x = x;
  const Vec d = y - x;
  const double alpha = 0.5 * (d[0] + d[1]), beta = 0.5 * (d[0] - d[1]);
  const double big = std::max(std::abs(alpha), std::abs(beta));
  const int k = std::max(1, mesh.k);
  const auto parts = [&](double c) -> int {
    if (c == 0.0) return 0;
    const double r = std::abs(c) / big;
    if (k % 8 == 0) return std::max<int>(1, static_cast<int>(std::llround(8 * r))) * (k / 8);
    return std::max<int>(1, static_cast<int>(std::llround(k * r)));
  };
  const int ka = parts(alpha), kb = parts(beta);
  const double base = big / k;
  const Vec u{1.0, 1.0}, w{1.0, -1.0};
  lat.su = (ka ? alpha / ka : base) * u;
  lat.sw = (kb ? beta / kb : base) * w;
  lat.yi = ka;
  lat.yj = kb;
  const double reach = mesh.margin * base;
  const int mi = static_cast<int>(std::ceil(reach / (lat.su.norm() / std::sqrt(2.0)) - 1e-9));
  const int mj = static_cast<int>(std::ceil(reach / (lat.sw.norm() / std::sqrt(2.0)) - 1e-9));
  lat.lo_i = -mi;
  lat.lo_j = -mj;
  lat.ni = ka + 2 * mi + 1;
  lat.nj = kb + 2 * mj + 1;
  const long long total = static_cast<long long>(lat.ni) * lat.nj;
  if (total > 40'000'000) throw SolverError("lattice too large: " + mesh.str());
  lat.inside.assign(static_cast<size_t>(total), 0);
  for (int i = 0; i < lat.ni; ++i)
    for (int j = 0; j < lat.nj; ++j)
      lat.inside[i * lat.nj + j] = dom.contains(lat.at(lat.lo_i + i, lat.lo_j + j));
  return lat;
}

Graph lattice_graph(const Domain& dom, const NullLattice& lat, const LinkWeight& weight) {
  Graph g(lat.count());
  std::vector<std::vector<Arc>> fwd(lat.count());
  parallel_for(lat.ni, [&](int ii) {
    const int i = lat.lo_i + ii;
    for (int j = lat.lo_j; j < lat.lo_j + lat.nj; ++j) {
      const int a = lat.id(i, j);
      if (!lat.inside[a]) continue;
      const Event p = lat.at(i, j);
      if (ii + 1 < lat.ni && lat.inside[lat.id(i + 1, j)]) {
        const LineExits ex = line_exits(dom, p, lat.su);
        if (ex.ahead > 1.0)
          if (auto c = weight(a, lat.id(i + 1, j), p, lat.su, ex)) fwd[a].push_back({lat.id(i + 1, j), *c});
      }
      if (j + 1 < lat.lo_j + lat.nj && lat.inside[lat.id(i, j + 1)]) {
        const LineExits ex = line_exits(dom, p, lat.sw);
        if (ex.ahead > 1.0)
          if (auto c = weight(a, lat.id(i, j + 1), p, lat.sw, ex)) fwd[a].push_back({lat.id(i, j + 1), *c});
      }
    }
  });
  for (int a = 0; a < lat.count(); ++a)
    for (const Arc& e : fwd[a]) {
      g[a].push_back(e);
      g[e.to].push_back({a, e.cost});
    }
  return g;
}

std::vector<Vec> sphere_directions(int size, int count, double phase, const Vec& preferred) {
  std::vector<Vec> out;
  const int n = size - 1;
  if (n == 1) {
    Vec a(size), b(size);
    a[1] = 1.0;
    b[1] = -1.0;
    return {a, b};
  }
  if (preferred.space_norm() > 0) {
    Vec p(size);
    for (int i = 1; i < size; ++i) p[i] = preferred[i] / preferred.space_norm();
    out.push_back(p);
    out.push_back(-p);
  }
  for (std::uint64_t idx = 0; static_cast<int>(out.size()) < count + 2 && idx < 100000; ++idx) {
    Vec v(size);
    if (n == 2) {
      const double th = 2.0 * M_PI * halton(idx, 2, phase);
      v[1] = std::cos(th);
      v[2] = std::sin(th);
    } else if (n == 3) {
      const double z = 2.0 * halton(idx, 2, phase) - 1.0, th = 2.0 * M_PI * halton(idx, 3, phase);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      v[1] = r * std::cos(th);
      v[2] = r * std::sin(th);
      v[3] = z;
    } else {
      double n2 = 0;
      for (int i = 1; i < size; ++i) {
        v[i] = 2.0 * halton(idx + 1, nth_prime(i - 1), phase) - 1.0;
        n2 += v[i] * v[i];
      }
      if (n2 > 1.0 || n2 < 1e-4) continue;
      v = v / std::sqrt(n2);
    }
    out.push_back(v);
  }
  return out;
}

BridgeNodes bridge_nodes(const Domain& dom, const Event& x, const Event& y, const Mesh& mesh) {
  const int size = dom.size();
  const Vec d = y - x;
  double ext = 0.0;
  for (int i = 0; i < size; ++i) ext = std::max(ext, std::abs(d[i]));
  const double pad =
      0.5 * ext + 0.5 * std::min(dom.boundary_distance(x), dom.boundary_distance(y));
  Vec lo(size), hi(size);
  double vol = 1.0;
  for (int i = 0; i < size; ++i) {
    lo[i] = std::min(x[i], y[i]) - pad;
    hi[i] = std::max(x[i], y[i]) + pad;
    vol *= hi[i] - lo[i];
  }
  Rng rng(mesh.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> shift(size);
  for (double& s : shift) s = u01(rng);
  BridgeNodes out;
  out.pts = {x, y};
  for (int idx = 1; idx <= mesh.node_budget; ++idx) {
    Event p(size);
    for (int i = 0; i < size; ++i)
      p[i] = lo[i] + (hi[i] - lo[i]) * halton(static_cast<std::uint64_t>(idx), nth_prime(i), shift[i]);
    if (dom.contains(p)) out.pts.push_back(p);
  }
  const int reach = mesh.reach_budget ? mesh.reach_budget : mesh.node_budget;
  out.radius = 2.0 * std::pow(vol / std::max(1, reach), 1.0 / size);
  return out;
}

std::vector<Event> bridge_corners(const Event& p, const Event& q, const std::vector<Vec>& dirs) {
  const Vec d = q - p;
  const double dt = d[0];
  const double dp2 = d.space_norm() * d.space_norm();
  std::vector<Event> out;
  for (const Vec& om : dirs) {
    double od = 0.0;
    for (int i = 1; i < d.size(); ++i) od += om[i] * d[i];
    const double fden = 2.0 * (dt - od);
    if (fden != 0.0) {
      const double lam = (dt * dt - dp2) / fden;
      if (lam > 0) {
        Vec n = om;
        n[0] = 1.0;
        out.push_back(p + lam * n);
      }
    }
    const double pden = 2.0 * (dt + od);
    if (pden != 0.0) {
      const double lam = (dp2 - dt * dt) / pden;
      if (lam > 0) {
        Vec n = om;
        n[0] = -1.0;
        out.push_back(p + lam * n);
      }
    }
  }
  return out;
}

Vec section_direction(const Event& x, const Event& y) {
  Vec e(x.size());
  const Vec d = y - x;
  const double s = d.space_norm();
  if (s > 1e-14 * (1.0 + x.norm())) {
    for (int i = 1; i < x.size(); ++i) e[i] = d[i] / s;
  } else {
    e[1] = 1.0;
  }
  return e;
}

}  // namespace detail

using namespace detail;

double infinitesimal_markowitz(const Domain& dom, const Event& x, const Vec& v) {
  const CausalClass c = causal_classify(v);
  if (c.kind != CausalKind::lightlike) throw CausalityError("infinitesimal_markowitz: v not lightlike");
  const RayExit ahead = ray_exit(dom, x, v), back = ray_exit(dom, x, -v);
  double f = 0.0;
  if (std::isfinite(ahead.param)) f += 1.0 / ahead.param;
  if (std::isfinite(back.param)) f += 1.0 / back.param;
  return f;
}

double markowitz_edge_cost(const Domain& dom, const Event& p, const Event& q) {
  require_same_dim(p, q);
  if (!dom.contains(p) || !dom.contains(q)) throw DomainError("markowitz_edge_cost: point outside Ω");
  if (p == q) return 0.0;
  const Vec d = q - p;
  if (causal_classify(d).kind != CausalKind::lightlike)
    throw CausalityError("markowitz_edge_cost: segment not lightlike");
  const RayExit ahead = ray_exit(dom, p, d), back = ray_exit(dom, p, -d);
  if (!(ahead.param > 1.0)) throw DomainError("markowitz_edge_cost: segment leaves Ω");
  return cross_ratio_log(back.exit, p, q, ahead.exit);
}

double chain_cost_deviation(const Domain& dom, const LightlikeChain& chain) {
  double worst = 0.0, sum = 0.0;
  for (size_t k = 0; k + 1 < chain.vertices.size(); ++k) {
    const double c = markowitz_edge_cost(dom, chain.vertices[k], chain.vertices[k + 1]);
    worst = std::max(worst, std::abs(c - chain.link_costs.at(k)));
    sum += chain.link_costs[k];
  }
  return std::max(worst, std::abs(sum - chain.total));
}

// ---- SectionDomain ----

SectionDomain::SectionDomain(const Domain& parent, const Event& origin, const Vec& spatial_unit)
    : Domain(2), parent_(parent), origin_(origin), e_(spatial_unit) {
  require_same_dim(origin, spatial_unit);
  if (std::abs(spatial_unit[0]) > 0 || std::abs(spatial_unit.norm() - 1.0) > 1e-9)
    throw DomainError("SectionDomain: direction must be a spatial unit vector");
}

Event SectionDomain::lift(const Event& x) const {
  Event p = origin_ + x[1] * e_;
  p[0] += x[0];
  return p;
}

Vec SectionDomain::lift_vector(const Vec& v) const {
  Vec p = v[1] * e_;
  p[0] += v[0];
  return p;
}

Event SectionDomain::project(const Event& x) const {
  const Vec d = x - origin_;
  return Event{d[0], dot(d, e_)};
}

DomainFlags SectionDomain::flags() const { return parent_.flags(); }

Event SectionDomain::center() const {
  const Event c = project(parent_.center());
  return contains(c) ? c : Event{0.0, 0.0};
}

Box SectionDomain::sampling_box() const {
  const Box b = parent_.sampling_box();
  double r = 0.0;
  for (int i = 1; i < parent_.size(); ++i)
    r += std::pow(std::max(std::abs(b.lo[i] - origin_[i]), std::abs(b.hi[i] - origin_[i])), 2);
  r = std::sqrt(r);
  return Box{Vec{b.lo[0] - origin_[0], -r}, Vec{b.hi[0] - origin_[0], r}};
}

RayExit SectionDomain::exit(const Event& x, const Vec& dir) const {
  const RayExit e = parent_.exit(lift(x), lift_vector(dir));
  if (!std::isfinite(e.param)) return RayExit{Endpoint::at_infinity(2), kInf};
  return RayExit{Endpoint::at(x + e.param * dir), e.param};
}

// ---- upper bounds ----

namespace {

void check_pair(const Domain& dom, const Event& x, const Event& y) {
  if (x.size() != dom.size() || y.size() != dom.size())
    throw DimensionError("distance query: dimension mismatch with " + dom.name());
  if (!dom.contains(x)) throw DomainError("point outside " + dom.name() + ": " + x.str());
  if (!dom.contains(y)) throw DomainError("point outside " + dom.name() + ": " + y.str());
}

DistanceEstimate lattice_upper(const Domain& dom, const Event& x, const Event& y, const Mesh& mesh) {
  DistanceEstimate est;
  est.kind = EstimateKind::upper;
  est.mesh = mesh;
  const NullLattice lat = build_lattice(dom, x, y, mesh);
  std::atomic<bool> degenerate{false};
  const Graph g = lattice_graph(dom, lat, [&](int, int, const Event&, const Vec&, const LineExits& ex) {
    const double c = link_cost(ex.back, ex.ahead);
    if (c == 0.0) degenerate = true;
    return std::optional<double>(c);
  });
  const int s = lat.id(0, 0), t = lat.id(lat.yi, lat.yj);
  const ShortestPaths sp = dijkstra(g, s, t);
  if (!std::isfinite(sp.dist[t]))
    throw SolverError("disconnected chain graph at " + mesh.str() + "; refine the mesh");
  const std::vector<int> path = trace(sp, t);
  LightlikeChain chain;
  chain.vertices.push_back(x);
  int prev_dir = -1;
  for (size_t k = 1; k < path.size(); ++k) {
    const int a = path[k - 1], b = path[k];
    const int dir = (std::abs(b - a) == lat.nj) ? 0 : 1;
    double c = 0.0;
    for (const Arc& e : g[a])
      if (e.to == b) c = e.cost;
    const Event pb = (b == t) ? y : lat.node(b);
    if (dir == prev_dir && !chain.link_costs.empty()) {
      chain.vertices.back() = pb;
      chain.link_costs.back() += c;
    } else {
      chain.vertices.push_back(pb);
      chain.link_costs.push_back(c);
    }
    prev_dir = dir;
  }
  chain.total = sp.dist[t];
  est.value = sp.dist[t];
  est.chain = chain;
  est.degenerate = degenerate;
  est.witness = degenerate ? "pseudo-distance degenerate" : "lattice chain";
  return est;
}

DistanceEstimate bridge_upper(const Domain& dom, const Event& x, const Event& y, const Mesh& mesh) {
  DistanceEstimate est;
  est.kind = EstimateKind::upper;
  est.mesh = mesh;
  const BridgeNodes nodes = bridge_nodes(dom, x, y, mesh);
  const int n = static_cast<int>(nodes.pts.size());
  Rng rng(mesh.seed ^ 0x9e3779b97f4a7c15ULL);
  const double phase = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  bool degenerate = false;
  const auto seg = [&](const Event& p, const Event& q) -> double {
    const Vec d = q - p;
    const LineExits ex = line_exits(dom, p, d);
    if (!(ex.ahead > 1.0)) return kInf;
    const double c = link_cost(ex.back, ex.ahead);
    if (c == 0.0) degenerate = true;
    return c;
  };
  std::vector<std::pair<int, int>> pairs;
  const double r2 = nodes.radius * nodes.radius;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vec d = nodes.pts[j] - nodes.pts[i];
      if ((i == 0 && j == 1) || dot(d, d) <= r2) pairs.emplace_back(i, j);
    }
  struct Best {
    double cost = kInf;
    Event corner;
    bool direct = false;
  };
  std::vector<Best> best(pairs.size());
  std::vector<char> degen(pairs.size(), 0);
  parallel_for(static_cast<int>(pairs.size()), [&](int k) {
    const Event& p = nodes.pts[pairs[k].first];
    const Event& q = nodes.pts[pairs[k].second];
    const Vec d = q - p;
    bool dg = false;
    const auto seg_local = [&](const Event& a, const Event& b) -> double {
      const Vec v = b - a;
      const LineExits ex = line_exits(dom, a, v);
      if (!(ex.ahead > 1.0)) return kInf;
      const double c = link_cost(ex.back, ex.ahead);
      if (c == 0.0) dg = true;
      return c;
    };
    Best b;
    if (causal_classify(d).kind == CausalKind::lightlike) {
      b.cost = seg_local(p, q);
      b.direct = true;
    } else {
      const auto dirs = sphere_directions(dom.size(), mesh.d, phase, d);
      for (const Event& z : bridge_corners(p, q, dirs)) {
        if (!dom.contains(z)) continue;
        const double c = seg_local(p, z);
        if (!(c < b.cost)) continue;
        const double c2 = c + seg_local(z, q);
        if (c2 < b.cost) {
          b.cost = c2;
          b.corner = z;
        }
      }
    }
    best[k] = b;
    degen[k] = dg;
  });
  (void)seg;
  std::vector<Event> corners;
  Graph g(n);
  for (size_t k = 0; k < pairs.size(); ++k) {
    if (!std::isfinite(best[k].cost)) continue;
    if (degen[k]) degenerate = true;
    int via = -1;
    if (!best[k].direct) {
      via = static_cast<int>(corners.size());
      corners.push_back(best[k].corner);
    }
    g[pairs[k].first].push_back({pairs[k].second, best[k].cost, via});
    g[pairs[k].second].push_back({pairs[k].first, best[k].cost, via});
  }
  const ShortestPaths sp = dijkstra(g, 0, 1);
  est.value = sp.dist[1];
  est.degenerate = degenerate;
  if (std::isfinite(est.value)) {
    const std::vector<int> path = trace(sp, 1);
    LightlikeChain chain;
    chain.vertices.push_back(x);
    for (size_t k = 1; k < path.size(); ++k) {
      const Arc& a = g[path[k - 1]][sp.prev_arc[path[k]]];
      const Event& p = nodes.pts[path[k - 1]];
      const Event& q = nodes.pts[path[k]];
      if (a.via >= 0) {
        const Event& z = corners[a.via];
        chain.vertices.push_back(z);
        chain.link_costs.push_back(seg(p, z));
        chain.vertices.push_back(q);
        chain.link_costs.push_back(seg(z, q));
      } else {
        chain.vertices.push_back(q);
        chain.link_costs.push_back(a.cost);
      }
    }
    chain.total = 0.0;
    for (double c : chain.link_costs) chain.total += c;
    est.chain = chain;
  }
  est.witness = degenerate ? "pseudo-distance degenerate" : "bridge chain";
  return est;
}

}  // namespace

DistanceEstimate markowitz_upper(const Domain& dom, const Event& x, const Event& y, const Mesh& mesh) {
  check_pair(dom, x, y);
  if (x == y) {
    DistanceEstimate e;
    e.kind = EstimateKind::upper;
    e.mesh = mesh;
    e.chain = LightlikeChain{{x}, {}, 0.0};
    return e;
  }
  if (dom.size() == 2) return lattice_upper(dom, x, y, mesh);

  const SectionDomain sec(dom, x, section_direction(x, y));
  DistanceEstimate planar = lattice_upper(sec, Event{0.0, 0.0}, sec.project(y), mesh);
  if (planar.chain) {
    for (Event& v : planar.chain->vertices) v = sec.lift(v);
    planar.chain->vertices.front() = x;
    planar.chain->vertices.back() = y;
  }
  DistanceEstimate bridged = bridge_upper(dom, x, y, mesh);
  const bool degenerate = planar.degenerate || bridged.degenerate;
  DistanceEstimate out = (bridged.value < planar.value) ? bridged : planar;
  if (!std::isfinite(out.value))
    throw SolverError("disconnected chain graph at " + mesh.str() + "; refine the mesh");
  out.degenerate = degenerate;
  if (degenerate) out.witness = "pseudo-distance degenerate";
  return out;
}

}  // namespace lorentz
