#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lorentz/domains.hpp"

namespace lorentz {

/// Refinement parameters for chain graphs.
struct Mesh {
  int k = 64;             // lattice subdivisions of y - x along each null direction
  int margin = 16;        // extra lattice steps on each side
  int d = 16;             // sampled lightlike directions per bridge (n > 1)
  int node_budget = 400;  // quasi-random nodes (n > 1)
  int reach_budget = 0;   // budget that fixes the neighbor radius; 0 means node_budget
  std::uint64_t seed = 42;

  /// Doubles k, margin, d and the node budget; keeps the neighbor radius.
  Mesh refined() const;
  std::string str() const;
};

/// Acceptance slack: 5% relative or 0.05 absolute, whichever is larger.
double mesh_slack(double value);

enum class EstimateKind { upper, lower, exact };
std::string to_string(EstimateKind k);

struct LightlikeChain {
  std::vector<Event> vertices;
  std::vector<double> link_costs;
  double total = 0.0;
};

struct DistanceEstimate {
  double value = 0.0;
  EstimateKind kind = EstimateKind::upper;
  Mesh mesh;
  std::optional<LightlikeChain> chain;
  std::vector<Event> path;  // quasi-hyperbolic path or causal zigzag
  std::string witness;
  bool degenerate = false;  // a zero-cost link joins distinct nodes
};

/// F_Ω(v) = |v|/d(x, x_v^-) + |v|/d(x, x_v^+), infinite exits dropped.
double infinitesimal_markowitz(const Domain& dom, const Event& x, const Vec& v);

/// Cross-ratio cost of the lightlike segment [p, q] with the exits of its line.
double markowitz_edge_cost(const Domain& dom, const Event& p, const Event& q);

/// Recomputes every link cost from scratch; returns the largest deviation.
double chain_cost_deviation(const Domain& dom, const LightlikeChain& chain);

/// Dijkstra over lightlike chains: null lattice in 1+1, bridge graph plus planar section above.
DistanceEstimate markowitz_upper(const Domain& dom, const Event& x, const Event& y,
                                 const Mesh& mesh = {});

/// Best certified lower bound from projective witnesses and supporting functionals.
DistanceEstimate markowitz_lower(const Domain& dom, const Event& x, const Event& y);

struct QhGrid {
  double h = 0.05;
  std::optional<Box> box;  // default: sampling box grown to contain x, y
  bool lightlike_only = false;  // 1+1 only: null lattice edges
  int smoothing_sweeps = 40;
};

/// Quasi-hyperbolic distance with density 1/d_h(., ∂Ω).
DistanceEstimate quasi_hyperbolic_distance(const Domain& dom, const Event& x, const Event& y,
                                           const QhGrid& grid = {});

struct TimeFunction {
  std::string name;
  std::function<double(const Event&)> tau;
};

/// ln τ⁻ and ln(τ⁻/τ⁺); the domain must outlive the returned function.
TimeFunction log_cosmological_time(const Domain& dom);
TimeFunction log_time_ratio(const Domain& dom);

/// Exact for causally related pairs, zigzag Dijkstra otherwise.
DistanceEstimate null_distance(const Domain& dom, const TimeFunction& tau, const Event& x,
                               const Event& y, const Mesh& mesh = {});

/// Hilbert distance with the full-log convention (integral of G_Ω).
double hilbert_distance(const Domain& dom, const Event& x, const Event& y);

/// Plane through `origin` spanned by ∂t and a unit spatial vector, as a 1+1 domain.
class SectionDomain : public Domain {
 public:
  SectionDomain(const Domain& parent, const Event& origin, const Vec& spatial_unit);
  std::string name() const override { return parent_.name() + "/section"; }
  bool contains(const Event& x) const override { return parent_.contains(lift(x)); }
  /// Lower bound: distance to the parent's boundary.
  double boundary_distance(const Event& x) const override {
    return parent_.boundary_distance(lift(x));
  }
  DomainFlags flags() const override;
  Event center() const override;
  double scale() const override { return parent_.scale(); }
  Box sampling_box() const override;
  RayExit exit(const Event& x, const Vec& dir) const override;
  Event lift(const Event& x) const;
  Vec lift_vector(const Vec& v) const;
  /// Coordinates (t, s) of a parent event lying in the plane.
  Event project(const Event& x) const;

 private:
  const Domain& parent_;
  Event origin_;
  Vec e_;
};

/// All-pairs δ estimates in 1+1 on an adaptive null quadtree.
class MarkowitzField {
 public:
  struct Options {
    double kappa = 0.25;  // cell side <= kappa * boundary distance
    int max_depth = 20;
  };
  /// `region` is the area of interest, `floor` the smallest boundary distance to resolve.
  MarkowitzField(const Domain& dom, const Box& region, double floor, Options opt);
  MarkowitzField(const Domain& dom, const Box& region, double floor);

  int snap(const Event& x) const;
  Event node(int id) const;
  int node_count() const { return static_cast<int>(nodes_.size()); }
  std::vector<double> distances_from(int source) const;

 private:
  struct Edge {
    int to;
    double cost;
  };
  const Domain& dom_;
  Options opt_;
  double u0_ = 0, w0_ = 0, side_ = 1;
  int depth_ = 0;
  std::vector<Event> nodes_;
  std::vector<std::vector<Edge>> adj_;
  Event at(std::int64_t i2, std::int64_t j2) const;
};

}  // namespace lorentz
