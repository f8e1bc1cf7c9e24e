#include <algorithm>
#include <cmath>

#include "internal.hpp"

namespace lorentz {

using namespace detail;

TimeFunction log_cosmological_time(const Domain& dom) {
  const Domain* d = &dom;
  return {"ln tau-", [d](const Event& x) { return std::log(cosmological_time(*d, x, TimeSign::past)); }};
}

TimeFunction log_time_ratio(const Domain& dom) {
  const Domain* d = &dom;
  return {"ln(tau-/tau+)", [d](const Event& x) {
            return std::log(cosmological_time(*d, x, TimeSign::past)) -
                   std::log(cosmological_time(*d, x, TimeSign::future));
          }};
}

namespace {

constexpr double kTauTol = 1e-12;

void require_increasing(double past, double future, const Event& p, const Event& q) {
  if (!(future > past - kTauTol * (1.0 + std::abs(past))))
    throw DomainError("invalid time function: not increasing from " + p.str() + " to " + q.str());
}

// |Δτ| for a causal link, validating monotonicity.
double causal_weight(const Event& p, double tp, const Event& q, double tq) {
  const CausalClass c = causal_classify(q - p);
  if (c.orientation == Orientation::future) require_increasing(tp, tq, p, q);
  if (c.orientation == Orientation::past) require_increasing(tq, tp, q, p);
  return std::abs(tq - tp);
}

DistanceEstimate lattice_null(const Domain& dom, const std::function<double(const Event&)>& tau,
                              const Event& x, const Event& y, const Mesh& mesh) {
  const NullLattice lat = build_lattice(dom, x, y, mesh);
  std::vector<double> tv(lat.count(), kInf);
  parallel_for(lat.count(), [&](int id) {
    if (lat.inside[id]) tv[id] = tau(lat.node(id));
  });
  const Graph g = lattice_graph(dom, lat, [&](int a, int b, const Event& p, const Vec& step,
                                               const LineExits&) -> std::optional<double> {
    if (!std::isfinite(tv[a]) || !std::isfinite(tv[b])) return std::nullopt;
    return causal_weight(p, tv[a], p + step, tv[b]);
  });
  const int s = lat.id(0, 0), t = lat.id(lat.yi, lat.yj);
  const ShortestPaths sp = dijkstra(g, s, t);
  DistanceEstimate est;
  est.kind = EstimateKind::upper;
  est.mesh = mesh;
  est.value = sp.dist[t];
  if (std::isfinite(est.value)) {
    for (int v : trace(sp, t)) est.path.push_back(lat.node(v));
    est.path.front() = x;
    est.path.back() = y;
  }
  est.witness = "null lattice zigzag";
  return est;
}

DistanceEstimate bridge_null(const Domain& dom, const std::function<double(const Event&)>& tau,
                             const Event& x, const Event& y, const Mesh& mesh) {
  const BridgeNodes nodes = bridge_nodes(dom, x, y, mesh);
  const int n = static_cast<int>(nodes.pts.size());
  std::vector<double> tv(n);
  parallel_for(n, [&](int i) { tv[i] = tau(nodes.pts[i]); });
  Rng rng(mesh.seed ^ 0x9e3779b97f4a7c15ULL);
  const double phase = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const auto inside_segment = [&](const Event& p, const Event& q) {
    return dom.exit(p, q - p).param > 1.0;
  };
  std::vector<std::pair<int, int>> pairs;
  const double r2 = nodes.radius * nodes.radius;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vec d = nodes.pts[j] - nodes.pts[i];
      if ((i == 0 && j == 1) || dot(d, d) <= r2) pairs.emplace_back(i, j);
    }
  std::vector<double> cost(pairs.size(), kInf);
  std::vector<Event> corner(pairs.size());
  parallel_for(static_cast<int>(pairs.size()), [&](int k) {
    const auto [i, j] = pairs[k];
    const Event& p = nodes.pts[i];
    const Event& q = nodes.pts[j];
    if (causally_related(p, q)) {
      if (inside_segment(p, q)) cost[k] = causal_weight(p, tv[i], q, tv[j]);
      return;
    }
    for (const Event& z : bridge_corners(p, q, sphere_directions(dom.size(), mesh.d, phase, q - p))) {
      if (!dom.contains(z) || !inside_segment(p, z) || !inside_segment(z, q)) continue;
      const double tz = tau(z);
      const double c = causal_weight(p, tv[i], z, tz) + causal_weight(z, tz, q, tv[j]);
      if (c < cost[k]) {
        cost[k] = c;
        corner[k] = z;
      }
    }
  });
  std::vector<Event> corners;
  Graph g(n);
  for (size_t k = 0; k < pairs.size(); ++k) {
    if (!std::isfinite(cost[k])) continue;
    int via = -1;
    if (corner[k].size() > 0) {
      via = static_cast<int>(corners.size());
      corners.push_back(corner[k]);
    }
    g[pairs[k].first].push_back({pairs[k].second, cost[k], via});
    g[pairs[k].second].push_back({pairs[k].first, cost[k], via});
  }
  const ShortestPaths sp = dijkstra(g, 0, 1);
  DistanceEstimate est;
  est.kind = EstimateKind::upper;
  est.mesh = mesh;
  est.value = sp.dist[1];
  if (std::isfinite(est.value)) {
    const std::vector<int> path = trace(sp, 1);
    est.path.push_back(x);
    for (size_t k = 1; k < path.size(); ++k) {
      const Arc& a = g[path[k - 1]][sp.prev_arc[path[k]]];
      if (a.via >= 0) est.path.push_back(corners[a.via]);
      est.path.push_back(nodes.pts[path[k]]);
    }
  }
  est.witness = "bridge zigzag";
  return est;
}

}  // namespace

DistanceEstimate null_distance(const Domain& dom, const TimeFunction& tau, const Event& x,
                               const Event& y, const Mesh& mesh) {
  if (x.size() != dom.size() || y.size() != dom.size())
    throw DimensionError("null_distance: dimension mismatch");
  if (!dom.contains(x) || !dom.contains(y)) throw DomainError("null_distance: point outside Ω");
  DistanceEstimate est;
  est.mesh = mesh;
  est.witness = tau.name;
  if (x == y || causally_related(x, y)) {
    const double tx = tau.tau(x), ty = tau.tau(y);
    if (causally_precedes(x, y)) require_increasing(tx, ty, x, y);
    else if (causally_precedes(y, x)) require_increasing(ty, tx, y, x);
    est.kind = EstimateKind::exact;
    est.value = std::abs(ty - tx);
    est.path = {x, y};
    return est;
  }
  if (dom.size() == 2) {
    est = lattice_null(dom, tau.tau, x, y, mesh);
  } else {
    const SectionDomain sec(dom, x, section_direction(x, y));
    DistanceEstimate planar = lattice_null(
        sec, [&](const Event& p) { return tau.tau(sec.lift(p)); }, Event{0.0, 0.0},
        sec.project(y), mesh);
    for (Event& v : planar.path) v = sec.lift(v);
    if (!planar.path.empty()) {
      planar.path.front() = x;
      planar.path.back() = y;
    }
    const DistanceEstimate bridged = bridge_null(dom, tau.tau, x, y, mesh);
    est = bridged.value < planar.value ? bridged : planar;
  }
  if (!std::isfinite(est.value))
    throw SolverError("disconnected zigzag graph at " + mesh.str() + "; refine the mesh");
  est.witness = tau.name + ", " + est.witness;
  return est;
}

double hilbert_distance(const Domain& dom, const Event& x, const Event& y) {
  if (!dom.contains(x) || !dom.contains(y)) throw DomainError("hilbert_distance: point outside Ω");
  if (x == y) return 0.0;
  const Vec d = y - x;
  const RayExit b = ray_exit(dom, x, d), a = ray_exit(dom, x, -d);
  return cross_ratio_log(a.exit, x, y, b.exit);
}

}  // namespace lorentz
