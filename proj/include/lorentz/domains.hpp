#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lorentz/core.hpp"
#include "lorentz/numeric.hpp"

namespace lorentz {

/// Axis-aligned box; entries may be infinite.
struct Box {
  Vec lo;
  Vec hi;
  bool contains(const Vec& x) const;
  bool finite() const;
};

struct DomainFlags {
  bool convex = false;
  bool causally_convex = false;
  bool future_complete = false;
  bool bounded = false;
};

enum class TimeSign { past, future };

struct RayExit {
  Endpoint exit;
  double param = kInf;  // exit = x + param * dir
};

/// Spatial functions take an event and ignore its time slot.
using SpatialFn = std::function<double(const Vec&)>;

/// Ω = {(t,p) : p in base, lower(p) < t < upper(p)}.
struct GraphForm {
  SpatialFn lower;
  SpatialFn upper;
  double lipschitz_lower = 1.0;
  double lipschitz_upper = 1.0;
  Box base;
};

/// Function on Ω that is projective along every null line, valued in `range`.
struct ProjectiveWitness {
  std::string name;
  std::function<double(const Event&)> f;
  ProjectiveInterval range;
};

struct Singularity {
  Event point;
  bool unique = true;
};

class Domain {
 public:
  explicit Domain(int size);
  virtual ~Domain() = default;

  int size() const { return size_; }
  int space_dim() const { return size_ - 1; }

  virtual std::string name() const = 0;
  virtual bool contains(const Event& x) const = 0;
  /// Euclidean distance to the boundary; x must be inside.
  virtual double boundary_distance(const Event& x) const = 0;
  virtual DomainFlags flags() const = 0;
  virtual Event center() const = 0;
  virtual double scale() const = 0;
  /// Finite box for rejection sampling and plotting.
  virtual Box sampling_box() const = 0;

  /// First boundary crossing of x + s dir, s > 0. x must be inside.
  virtual RayExit exit(const Event& x, const Vec& dir) const;

  virtual std::optional<GraphForm> graph_form() const { return std::nullopt; }
  virtual std::optional<double> cosmological_time_closed(const Event&, TimeSign) const {
    return std::nullopt;
  }
  virtual std::optional<Singularity> initial_singularity_closed(const Event&, TimeSign) const {
    return std::nullopt;
  }
  /// Domain-specific projective functions (cone and diamond time ratios).
  virtual std::vector<ProjectiveWitness> projective_witnesses() const { return {}; }
  /// (inf, sup) of dot(phi, x) over Ω, for convex domains.
  virtual std::pair<double, double> support_interval(const Vec& phi) const;

 protected:
  /// Step along dir that cannot leave Ω.
  virtual double safe_step(const Event& x, const Vec& dir) const;
  RayExit generic_exit(const Event& x, const Vec& dir) const;
  void check_size(const Vec& x) const;

 private:
  int size_;
};

using DomainPtr = std::shared_ptr<const Domain>;

/// I+(a) (eps = 0) or the eps-cone {(1+eps)(t - t_a) > |p - p_a|}.
class ConeFuture : public Domain {
 public:
  explicit ConeFuture(const Event& apex, double eps = 0.0);
  std::string name() const override { return eps_ > 0 ? "EpsConeFuture" : "ConeFuture"; }
  bool contains(const Event& x) const override;
  double boundary_distance(const Event& x) const override;
  DomainFlags flags() const override { return {true, true, true, false}; }
  Event center() const override;
  double scale() const override { return 1.0; }
  Box sampling_box() const override;
  RayExit exit(const Event& x, const Vec& dir) const override;
  std::optional<GraphForm> graph_form() const override;
  std::optional<double> cosmological_time_closed(const Event& x, TimeSign s) const override;
  std::optional<Singularity> initial_singularity_closed(const Event& x, TimeSign s) const override;
  std::vector<ProjectiveWitness> projective_witnesses() const override;
  std::pair<double, double> support_interval(const Vec& phi) const override;
  const Event& apex() const { return apex_; }
  double eps() const { return eps_; }

 private:
  Event apex_;
  double eps_;
};

/// {x : -b(nu, x - origin) > 0} for a future timelike normal nu.
class HalfSpaceFuture : public Domain {
 public:
  HalfSpaceFuture(const Event& origin, const Vec& normal);
  explicit HalfSpaceFuture(int size);
  std::string name() const override { return "HalfSpaceFuture"; }
  bool contains(const Event& x) const override;
  double boundary_distance(const Event& x) const override;
  DomainFlags flags() const override { return {true, true, true, false}; }
  Event center() const override { return origin_ + normal_; }
  double scale() const override { return 1.0; }
  Box sampling_box() const override;
  RayExit exit(const Event& x, const Vec& dir) const override;
  std::optional<GraphForm> graph_form() const override;
  std::optional<double> cosmological_time_closed(const Event& x, TimeSign s) const override;
  std::optional<Singularity> initial_singularity_closed(const Event& x, TimeSign s) const override;
  std::vector<ProjectiveWitness> projective_witnesses() const override;
  std::pair<double, double> support_interval(const Vec& phi) const override;
  const Event& origin() const { return origin_; }
  const Vec& normal() const { return normal_; }
  /// Lorentzian height -b(nu, x - origin).
  double height(const Event& x) const;

 private:
  Event origin_;
  Vec normal_;  // unit: b(nu, nu) = -1
};

/// I+_eps(a) ∩ I-_eps(b); eps = 0 is the causal diamond.
class Diamond : public Domain {
 public:
  Diamond(const Event& a, const Event& b, double eps = 0.0);
  std::string name() const override { return eps_ > 0 ? "StableDiamond" : "Diamond"; }
  bool contains(const Event& x) const override;
  double boundary_distance(const Event& x) const override;
  DomainFlags flags() const override { return {true, true, false, true}; }
  Event center() const override { return 0.5 * (a_ + b_); }
  double scale() const override { return (b_ - a_).norm(); }
  Box sampling_box() const override;
  RayExit exit(const Event& x, const Vec& dir) const override;
  std::optional<GraphForm> graph_form() const override;
  std::optional<double> cosmological_time_closed(const Event& x, TimeSign s) const override;
  std::optional<Singularity> initial_singularity_closed(const Event& x, TimeSign s) const override;
  std::vector<ProjectiveWitness> projective_witnesses() const override;
  std::pair<double, double> support_interval(const Vec& phi) const override;
  const Event& a() const { return a_; }
  const Event& b() const { return b_; }
  double eps() const { return eps_; }
  /// The two spacelike corners in 1+1 (eps = 0 only).
  std::pair<Event, Event> side_corners() const;

 private:
  Event a_, b_;
  double eps_;
};

/// Complement of the closed past eps-cone of the origin: {(1+eps)t + |p| > 0}.
class StableConeComplement : public Domain {
 public:
  StableConeComplement(int size, double eps);
  std::string name() const override { return "StableConeComplement"; }
  bool contains(const Event& x) const override;
  double boundary_distance(const Event& x) const override;
  DomainFlags flags() const override { return {false, true, true, false}; }
  Event center() const override;
  double scale() const override { return 1.0; }
  Box sampling_box() const override;
  RayExit exit(const Event& x, const Vec& dir) const override;
  std::optional<GraphForm> graph_form() const override;
  std::optional<double> cosmological_time_closed(const Event& x, TimeSign s) const override;
  std::optional<Singularity> initial_singularity_closed(const Event& x, TimeSign s) const override;
  double eps() const { return eps_; }

 private:
  double eps_;
};

/// {|t| < h}.
class SpacelikeSlab : public Domain {
 public:
  SpacelikeSlab(int size, double h);
  std::string name() const override { return "SpacelikeSlab"; }
  bool contains(const Event& x) const override;
  double boundary_distance(const Event& x) const override;
  DomainFlags flags() const override { return {true, true, false, false}; }
  Event center() const override { return Vec(size()); }
  double scale() const override { return h_; }
  Box sampling_box() const override;
  RayExit exit(const Event& x, const Vec& dir) const override;
  std::optional<GraphForm> graph_form() const override;
  std::optional<double> cosmological_time_closed(const Event& x, TimeSign s) const override;
  std::optional<Singularity> initial_singularity_closed(const Event& x, TimeSign s) const override;
  std::vector<ProjectiveWitness> projective_witnesses() const override;
  std::pair<double, double> support_interval(const Vec& phi) const override;
  double h() const { return h_; }

 private:
  double h_;
};

/// {t > |(p_1..p_{n-l})|}; l = n is the half-space t > 0.
class Bonsante : public Domain {
 public:
  Bonsante(int size, int l);
  std::string name() const override { return "Bonsante"; }
  bool contains(const Event& x) const override;
  double boundary_distance(const Event& x) const override;
  DomainFlags flags() const override { return {true, true, true, false}; }
  Event center() const override { return time_axis(size()); }
  double scale() const override { return 1.0; }
  Box sampling_box() const override;
  RayExit exit(const Event& x, const Vec& dir) const override;
  std::optional<GraphForm> graph_form() const override;
  std::optional<double> cosmological_time_closed(const Event& x, TimeSign s) const override;
  std::optional<Singularity> initial_singularity_closed(const Event& x, TimeSign s) const override;
  std::pair<double, double> support_interval(const Vec& phi) const override;
  int l() const { return l_; }

 private:
  double radial(const Event& x) const;
  int l_;
};

class EuclideanBall : public Domain {
 public:
  EuclideanBall(const Event& c, double r);
  std::string name() const override { return "EuclideanBall"; }
  bool contains(const Event& x) const override;
  double boundary_distance(const Event& x) const override;
  DomainFlags flags() const override { return {true, false, false, true}; }
  Event center() const override { return c_; }
  double scale() const override { return r_; }
  Box sampling_box() const override;
  RayExit exit(const Event& x, const Vec& dir) const override;
  std::pair<double, double> support_interval(const Vec& phi) const override;

 private:
  Event c_;
  double r_;
};

/// Domain between two Lipschitz graphs over a box.
class GraphDomain : public Domain {
 public:
  struct Options {
    bool convex = false;
    std::string label = "GraphDomain";
    int audit_samples = 4000;
    std::uint64_t audit_seed = 7;
  };
  /// Audits Lipschitz bounds and lower < upper; throws DomainError on violation.
  GraphDomain(int size, GraphForm form, Options opt);
  GraphDomain(int size, GraphForm form);

  std::string name() const override { return opt_.label; }
  bool contains(const Event& x) const override;
  double boundary_distance(const Event& x) const override;
  DomainFlags flags() const override;
  Event center() const override;
  double scale() const override { return 1.0; }
  Box sampling_box() const override;
  RayExit exit(const Event& x, const Vec& dir) const override;
  std::optional<GraphForm> graph_form() const override { return form_; }
  std::pair<double, double> support_interval(const Vec& phi) const override;

 protected:
  double safe_step(const Event& x, const Vec& dir) const override;

 private:
  double graph_distance(const Event& x, const SpatialFn& f) const;
  GraphForm form_;
  Options opt_;
};

/// Multilinear interpolation of samples on a regular grid over a finite box.
SpatialFn grid_function(const Box& base, std::vector<int> shape, std::vector<double> values);

// ---- analysis ----

/// Validated wrapper around Domain::exit.
RayExit ray_exit(const Domain& dom, const Event& x, const Vec& dir);
/// Exit along +v (future) or -v (past).
RayExit ray_exit(const Domain& dom, const Event& x, const Vec& v, TimeSign s);

struct CausalStructure {
  bool causally_convex = false;
  bool future_complete = false;
  bool lightlike_line_free = false;
};

/// Sampled checks; a false is backed by a concrete counterexample.
CausalStructure causal_structure_checks(const Domain& dom, std::uint64_t seed = 1,
                                        int samples = 200);

struct CausalBoundary {
  GraphForm graphs;
  bool has_past = false;
  bool has_future = false;
};

CausalBoundary causal_boundary(const Domain& dom);

struct AcausalityReport {
  enum class Kind { stable, not_stable, every_epsilon };
  Kind kind = Kind::not_stable;
  double lipschitz = 0.0;
  double epsilon = 0.0;  // meaningful for Kind::stable
};

/// From samples (t, p) of a boundary graph: L = max |Δt|/|Δp|, eps = 1/L - 1.
AcausalityReport stable_acausality_epsilon(const std::vector<Event>& samples);

struct CosmologicalTime {
  double value = 0.0;
  Singularity singularity;
};

/// Closed form when available, otherwise multistart maximization over the causal boundary.
CosmologicalTime cosmological_time_full(const Domain& dom, const Event& x, TimeSign s);
double cosmological_time(const Domain& dom, const Event& x, TimeSign s);
Singularity initial_singularity(const Domain& dom, const Event& x, TimeSign s);
/// Always the graph maximizer, bypassing closed forms.
CosmologicalTime cosmological_time_generic(const Domain& dom, const Event& x, TimeSign s);

/// Rejection sample inside `box` ∩ Ω with boundary distance >= min_dist.
Event sample_interior(const Domain& dom, Rng& rng, const Box& box, double min_dist = 0.0,
                      int max_tries = 100000);

/// Image of a (stable) diamond under a conformal map.
Diamond transform_diamond(const Diamond& d, const ConformalMap& g);

}  // namespace lorentz
