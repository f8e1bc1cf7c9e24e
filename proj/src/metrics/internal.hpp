#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lorentz/metrics.hpp"

namespace lorentz::detail {

struct Arc {
  int to;
  double cost;
  int via = -1;  // index into a corner table, -1 for a straight link
};

using Graph = std::vector<std::vector<Arc>>;

struct ShortestPaths {
  std::vector<double> dist;
  std::vector<int> hops;
  std::vector<int> prev;
  std::vector<int> prev_arc;
};

/// Dijkstra ordered by (cost, hops, id); stops once `target` is settled.
ShortestPaths dijkstra(const Graph& g, int source, int target = -1);
std::vector<int> trace(const ShortestPaths& sp, int target);

/// Cost of the link p -> p + dir given exit parameters along ±dir (in units of dir).
double link_cost(double past_param, double future_param);

/// Exit parameters of the line through p along ±dir.
struct LineExits {
  double back = kInf;
  double ahead = kInf;
};
LineExits line_exits(const Domain& dom, const Event& p, const Vec& dir);

/// Null lattice x + i su + j sw in 1+1 with y on a node.
struct NullLattice {
  Event x;
  Vec su, sw;
  int lo_i = 0, lo_j = 0, ni = 0, nj = 0;
  int yi = 0, yj = 0;
  std::vector<char> inside;
  int id(int i, int j) const { return (i - lo_i) * nj + (j - lo_j); }
  Event at(int i, int j) const { return x + static_cast<double>(i) * su + static_cast<double>(j) * sw; }
  int count() const { return ni * nj; }
  Event node(int id) const { return at(lo_i + id / nj, lo_j + id % nj); }
};

NullLattice build_lattice(const Domain& dom, const Event& x, const Event& y, const Mesh& mesh);

/// Segment weight for the lattice graph; nullopt drops the edge.
using LinkWeight = std::function<std::optional<double>(int from, int to, const Event& p,
                                                       const Vec& step, const LineExits& ex)>;

/// Edges along ±su and ±sw between inside nodes whose segment stays inside.
Graph lattice_graph(const Domain& dom, const NullLattice& lat, const LinkWeight& weight);

/// Unit spatial directions, prefix-nested in `count`.
std::vector<Vec> sphere_directions(int size, int count, double phase, const Vec& preferred);

/// Quasi-random nodes around x and y; x is node 0 and y node 1.
struct BridgeNodes {
  std::vector<Event> pts;
  double radius = 0.0;
};
BridgeNodes bridge_nodes(const Domain& dom, const Event& x, const Event& y, const Mesh& mesh);

/// Corners z with z - p and q - z lightlike.
std::vector<Event> bridge_corners(const Event& p, const Event& q, const std::vector<Vec>& dirs);

/// Plane through x and y containing the time axis.
Vec section_direction(const Event& x, const Event& y);

}  // namespace lorentz::detail
