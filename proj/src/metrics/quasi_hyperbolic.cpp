#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include "internal.hpp"

namespace lorentz {

using namespace detail;

namespace {

constexpr long long kMaxGridNodes = 3'000'000;

// ∫ |b-a| / d(., ∂Ω) along [a, b]; infinite if the segment leaves Ω.
double qh_length(const Domain& dom, const Event& a, const Event& b, int panels) {
  const Vec d = b - a;
  const double len = d.norm();
  if (len == 0.0) return 0.0;
  bool ok = true;
  const double v = simpson(
      [&](double s) {
        const Event p = a + s * d;
        if (!ok || !dom.contains(p)) {
          ok = false;
          return 0.0;
        }
        const double bd = dom.boundary_distance(p);
        if (!(bd > 0)) {
          ok = false;
          return 0.0;
        }
        return len / bd;
      },
      0.0, 1.0, panels);
  return ok ? v : kInf;
}

double path_length(const Domain& dom, const std::vector<Event>& path, int panels) {
  double s = 0.0;
  for (size_t i = 0; i + 1 < path.size(); ++i) s += qh_length(dom, path[i], path[i + 1], panels);
  return s;
}

void smooth(const Domain& dom, std::vector<Event>& path, double h, int sweeps) {
  const int m = static_cast<int>(path.size());
  if (m < 3) return;
  const int size = path[0].size();
  const auto local = [&](int i, const Event& v) {
    return qh_length(dom, path[i - 1], v, 4) + qh_length(dom, v, path[i + 1], 4);
  };
  double step = h;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    bool moved = false;
    for (int i = 1; i < m - 1; ++i) {
      const double c0 = local(i, path[i]);
      if (!std::isfinite(c0)) continue;
      const double eta = 1e-3 * h;
      Vec g(size);
      bool finite = true;
      for (int k = 0; k < size; ++k) {
        Event a = path[i], b = path[i];
        a[k] += eta;
        b[k] -= eta;
        const double fa = local(i, a), fb = local(i, b);
        if (!std::isfinite(fa) || !std::isfinite(fb)) {
          finite = false;
          break;
        }
        g[k] = (fa - fb) / (2 * eta);
      }
      if (!finite || g.norm() == 0.0) continue;
      const Vec dir = -g / g.norm();
      for (double a = step; a > step * 1e-3; a *= 0.5) {
        const Event cand = path[i] + a * dir;
        if (local(i, cand) < c0) {
          path[i] = cand;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
    if (step < 1e-4 * h) break;
  }
}

Box default_box(const Domain& dom, const Event& x, const Event& y) {
  Box b = dom.sampling_box();
  const Vec d = y - x;
  double ext = 0.0;
  for (int i = 0; i < d.size(); ++i) ext = std::max(ext, std::abs(d[i]));
  for (int i = 0; i < d.size(); ++i) {
    b.lo[i] = std::min(b.lo[i], std::min(x[i], y[i]) - ext);
    b.hi[i] = std::max(b.hi[i], std::max(x[i], y[i]) + ext);
  }
  return b;
}

DistanceEstimate grid_solve(const Domain& dom, const Event& x, const Event& y, const QhGrid& grid) {
  const int size = dom.size();
  const Box box = grid.box ? *grid.box : default_box(dom, x, y);
  if (!box.finite()) throw SolverError("quasi-hyperbolic grid needs a finite box");
  double h = grid.h;
  std::vector<long long> cnt(size), stride(size);
  long long total = 0;
  for (int pass = 0; pass < 64; ++pass) {
    total = 1;
    for (int i = 0; i < size; ++i) {
      cnt[i] = static_cast<long long>(std::floor((box.hi[i] - box.lo[i]) / h)) + 1;
      total *= cnt[i];
    }
    if (total <= kMaxGridNodes) break;
    h *= 1.25;
  }
  stride[size - 1] = 1;
  for (int i = size - 2; i >= 0; --i) stride[i] = stride[i + 1] * cnt[i + 1];
  const auto coord = [&](long long id) {
    Event p(size);
    for (int i = 0; i < size; ++i) {
      p[i] = box.lo[i] + h * static_cast<double>((id / stride[i]) % cnt[i]);
    }
    return p;
  };
  std::vector<double> w(total, 0.0);
  parallel_for(static_cast<int>(cnt[0]), [&](int i0) {
    for (long long r = 0; r < stride[0]; ++r) {
      const long long id = i0 * stride[0] + r;
      const Event p = coord(id);
      if (dom.contains(p)) {
        const double bd = dom.boundary_distance(p);
        if (bd > 0) w[id] = 1.0 / bd;
      }
    }
  });

  std::vector<std::vector<int>> offsets;
  {
    std::vector<int> o(size, -1);
    while (true) {
      if (std::any_of(o.begin(), o.end(), [](int v) { return v != 0; })) offsets.push_back(o);
      int k = size - 1;
      while (k >= 0 && o[k] == 1) o[k--] = -1;
      if (k < 0) break;
      ++o[k];
    }
  }

  // Corners of the cell containing p.
  const auto corners = [&](const Event& p) {
    std::vector<long long> base(size);
    for (int i = 0; i < size; ++i) {
      const double f = (p[i] - box.lo[i]) / h;
      base[i] = std::clamp<long long>(static_cast<long long>(std::floor(f)), 0, cnt[i] - 1);
    }
    std::vector<long long> out;
    for (int mask = 0; mask < (1 << size); ++mask) {
      long long id = 0;
      bool ok = true;
      for (int i = 0; i < size; ++i) {
        const long long c = base[i] + ((mask >> i) & 1);
        if (c >= cnt[i]) ok = false;
        id += c * stride[i];
      }
      if (ok && w[id] > 0) out.push_back(id);
    }
    return out;
  };

  std::vector<double> dist(total, kInf);
  std::vector<long long> prev(total, -1);
  using Key = std::pair<double, long long>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;
  for (long long c : corners(x)) {
    const double v = qh_length(dom, x, coord(c), 4);
    if (v < dist[c]) {
      dist[c] = v;
      pq.emplace(v, c);
    }
  }
  std::vector<std::pair<long long, double>> targets;
  for (long long c : corners(y)) {
    const double v = qh_length(dom, coord(c), y, 4);
    if (std::isfinite(v)) targets.emplace_back(c, v);
  }
  double best = qh_length(dom, x, y, 16);
  long long best_node = -1;
  std::vector<char> done(total, 0);
  std::vector<long long> cidx(size);
  while (!pq.empty()) {
    const auto [d, v] = pq.top();
    pq.pop();
    if (done[v]) continue;
    done[v] = 1;
    if (d >= best) break;
    for (const auto& [c, tail] : targets)
      if (c == v && d + tail < best) {
        best = d + tail;
        best_node = v;
      }
    for (int i = 0; i < size; ++i) cidx[i] = (v / stride[i]) % cnt[i];
    for (const auto& o : offsets) {
      long long nb = 0;
      double len2 = 0.0;
      bool ok = true;
      for (int i = 0; i < size; ++i) {
        const long long c = cidx[i] + o[i];
        if (c < 0 || c >= cnt[i]) {
          ok = false;
          break;
        }
        nb += c * stride[i];
        len2 += o[i] * o[i];
      }
      if (!ok || w[nb] == 0.0 || done[nb]) continue;
      const double nd = d + h * std::sqrt(len2) * 0.5 * (w[v] + w[nb]);
      if (nd < dist[nb]) {
        dist[nb] = nd;
        prev[nb] = v;
        pq.emplace(nd, nb);
      }
    }
  }
  if (!std::isfinite(best)) throw SolverError("quasi-hyperbolic endpoints not connectable on the grid");

  std::vector<Event> path{y};
  for (long long v = best_node; v >= 0; v = prev[v]) path.push_back(coord(v));
  path.push_back(x);
  std::reverse(path.begin(), path.end());
  if (best_node < 0) path = {x, y};

  const double raw = path_length(dom, path, 8);
  std::vector<Event> sm = path;
  smooth(dom, sm, h, grid.smoothing_sweeps);
  const double smoothed = path_length(dom, sm, 8);
  DistanceEstimate est;
  est.kind = EstimateKind::upper;
  est.value = std::min(raw, smoothed);
  est.path = smoothed <= raw ? sm : path;
  est.witness = "grid h=" + std::to_string(h);
  return est;
}

DistanceEstimate light_solve(const Domain& dom, const Event& x, const Event& y, const QhGrid& grid) {
  if (dom.size() != 2) throw DimensionError("lightlike-only quasi-hyperbolic grid is 1+1 only");
  const Vec d = y - x;
  const double big = 0.5 * std::max(std::abs(d[0] + d[1]), std::abs(d[0] - d[1]));
  Mesh mesh;
  int k = static_cast<int>(std::ceil(big * std::sqrt(2.0) / grid.h));
  k = std::clamp(8 * ((k + 7) / 8), 8, 1024);
  mesh.k = k;
  mesh.margin = k;
  const NullLattice lat = build_lattice(dom, x, y, mesh);
  const Graph g = lattice_graph(dom, lat, [&](int, int, const Event& p, const Vec& step,
                                               const LineExits&) -> std::optional<double> {
    const double v = qh_length(dom, p, p + step, 2);
    if (!std::isfinite(v)) return std::nullopt;
    return v;
  });
  const int s = lat.id(0, 0), t = lat.id(lat.yi, lat.yj);
  const ShortestPaths sp = dijkstra(g, s, t);
  if (!std::isfinite(sp.dist[t])) throw SolverError("quasi-hyperbolic lightlike lattice disconnected");
  std::vector<Event> path;
  for (int v : trace(sp, t)) path.push_back(lat.node(v));
  path.front() = x;
  path.back() = y;
  DistanceEstimate est;
  est.kind = EstimateKind::upper;
  est.mesh = mesh;
  est.value = path_length(dom, path, 8);
  est.path = path;
  est.witness = "lightlike lattice";
  return est;
}

}  // namespace

DistanceEstimate quasi_hyperbolic_distance(const Domain& dom, const Event& x, const Event& y,
                                           const QhGrid& grid) {
  if (x.size() != dom.size() || y.size() != dom.size())
    throw DimensionError("quasi_hyperbolic_distance: dimension mismatch");
  if (!dom.contains(x) || !dom.contains(y)) throw DomainError("quasi_hyperbolic_distance: point outside Ω");
  if (!(grid.h > 0)) throw SolverError("quasi_hyperbolic_distance: grid step must be positive");
  if (x == y) return DistanceEstimate{0.0, EstimateKind::upper, {}, std::nullopt, {x}, "", false};
  return grid.lightlike_only ? light_solve(dom, x, y, grid) : grid_solve(dom, x, y, grid);
}

}  // namespace lorentz
