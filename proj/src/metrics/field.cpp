#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

#include "internal.hpp"

namespace lorentz {

using namespace detail;

MarkowitzField::MarkowitzField(const Domain& dom, const Box& region, double floor)
    : MarkowitzField(dom, region, floor, Options{}) {}

MarkowitzField::MarkowitzField(const Domain& dom, const Box& region, double floor, Options opt)
    : dom_(dom), opt_(opt) {
  if (dom.size() != 2) throw DimensionError("MarkowitzField is 1+1 only");
  if (!region.finite()) throw DomainError("MarkowitzField needs a finite region");
  if (!(floor > 0)) throw DomainError("MarkowitzField needs a positive floor");
  // Null coordinates U = t + p, W = t - p.
  const double ulo = region.lo[0] + region.lo[1], uhi = region.hi[0] + region.hi[1];
  const double wlo = region.lo[0] - region.hi[1], whi = region.hi[0] - region.lo[1];
  side_ = std::max(uhi - ulo, whi - wlo);
  u0_ = ulo;
  w0_ = wlo;
  depth_ = opt_.max_depth;
  const std::int64_t full = std::int64_t{1} << depth_;
  const double unit = side_ / static_cast<double>(full);

  // Subdivide.
  std::vector<std::array<std::int64_t, 3>> stack{{0, 0, full}};
  std::vector<std::array<std::int64_t, 3>> leaves;
  while (!stack.empty()) {
    const auto [i, j, s] = stack.back();
    stack.pop_back();
    const double len = static_cast<double>(s) * unit / std::sqrt(2.0);
    const Event c = at(2 * i + s, 2 * j + s);
    // A cell with no inside point on a 5x5 probe grid is dropped; slivers thinner than
    // a quarter cell are lost, which snapping absorbs.
    bool any_inside = dom.contains(c);
    for (int m = 0; m < 25 && !any_inside; ++m)
      any_inside = dom.contains(at(2 * i + (m % 5) * s / 2, 2 * j + (m / 5) * s / 2));
    if (!any_inside) continue;
    const double d = dom.contains(c) ? dom.boundary_distance(c) : 0.0;
    const bool split = s > 1 && len > opt_.kappa * std::max(d, floor);
    if (split) {
      const std::int64_t h = s / 2;
      stack.push_back({i, j, h});
      stack.push_back({i + h, j, h});
      stack.push_back({i, j + h, h});
      stack.push_back({i + h, j + h, h});
    } else if (any_inside) {
      leaves.push_back({i, j, s});
    }
  }

  // Nodes: inside corners of leaves.
  std::unordered_map<std::int64_t, int> ids;
  const std::int64_t stride = full + 1;
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> rows, cols;
  const auto add = [&](std::int64_t i, std::int64_t j) {
    const std::int64_t key = i * stride + j;
    if (ids.count(key)) return;
    const Event p = at(2 * i, 2 * j);
    if (!dom.contains(p)) return;
    ids.emplace(key, static_cast<int>(nodes_.size()));
    nodes_.push_back(p);
    rows[j].push_back(i);
    cols[i].push_back(j);
  };
  for (const auto& [i, j, s] : leaves) {
    add(i, j);
    add(i + s, j);
    add(i, j + s);
    add(i + s, j + s);
  }
  for (auto& [k, v] : rows) std::sort(v.begin(), v.end());
  for (auto& [k, v] : cols) std::sort(v.begin(), v.end());

  // Edges between consecutive nodes on leaf sides.
  std::vector<std::pair<int, int>> links;
  const auto side = [&](const std::vector<std::int64_t>& line, std::int64_t from, std::int64_t to,
                        const auto& key_of) {
    auto it = std::lower_bound(line.begin(), line.end(), from);
    for (; it != line.end() && std::next(it) != line.end() && *std::next(it) <= to; ++it) {
      const int a = ids.at(key_of(*it)), b = ids.at(key_of(*std::next(it)));
      links.emplace_back(std::min(a, b), std::max(a, b));
    }
  };
  for (const auto& [i, j, s] : leaves) {
    for (std::int64_t jj : {j, j + s}) {
      auto r = rows.find(jj);
      if (r != rows.end()) side(r->second, i, i + s, [&](std::int64_t v) { return v * stride + jj; });
    }
    for (std::int64_t ii : {i, i + s}) {
      auto c = cols.find(ii);
      if (c != cols.end()) side(c->second, j, j + s, [&](std::int64_t v) { return ii * stride + v; });
    }
  }
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());

  std::vector<double> cost(links.size(), kInf);
  parallel_for(static_cast<int>(links.size()), [&](int k) {
    const Event& p = nodes_[links[k].first];
    const Event& q = nodes_[links[k].second];
    const LineExits ex = line_exits(dom, p, q - p);
    if (ex.ahead > 1.0) cost[k] = link_cost(ex.back, ex.ahead);
  });
  adj_.assign(nodes_.size(), {});
  for (size_t k = 0; k < links.size(); ++k) {
    if (!std::isfinite(cost[k])) continue;
    adj_[links[k].first].push_back({links[k].second, cost[k]});
    adj_[links[k].second].push_back({links[k].first, cost[k]});
  }
}

// Event at doubled null-coordinate indices (2I, 2J), so cell centers stay integral.
Event MarkowitzField::at(std::int64_t i2, std::int64_t j2) const {
  const double unit = side_ / static_cast<double>(std::int64_t{1} << depth_);
  const double u = u0_ + 0.5 * static_cast<double>(i2) * unit;
  const double w = w0_ + 0.5 * static_cast<double>(j2) * unit;
  return Event{0.5 * (u + w), 0.5 * (u - w)};
}

int MarkowitzField::snap(const Event& x) const {
  int best = -1;
  double bd = kInf;
  for (int i = 0; i < node_count(); ++i) {
    const Vec d = nodes_[i] - x;
    const double v = dot(d, d);
    if (v < bd) {
      bd = v;
      best = i;
    }
  }
  if (best < 0) throw SolverError("MarkowitzField has no nodes");
  return best;
}

Event MarkowitzField::node(int id) const { return nodes_.at(id); }

std::vector<double> MarkowitzField::distances_from(int source) const {
  std::vector<double> dist(adj_.size(), kInf);
  using Key = std::pair<double, int>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;
  dist.at(source) = 0.0;
  pq.emplace(0.0, source);
  while (!pq.empty()) {
    const auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (const Edge& e : adj_[v])
      if (d + e.cost < dist[e.to]) {
        dist[e.to] = d + e.cost;
        pq.emplace(dist[e.to], e.to);
      }
  }
  return dist;
}

}  // namespace lorentz
