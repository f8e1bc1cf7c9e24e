#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lorentz/metrics.hpp"

namespace lorentz {

/// Read-only distance estimator over events of one domain.
class DistanceEvaluator {
 public:
  virtual ~DistanceEvaluator() = default;
  virtual std::string name() const = 0;
  /// Points the estimator actually uses; snapping estimators move them.
  virtual std::vector<Event> prepare(const std::vector<Event>& pts) const { return pts; }
  virtual double distance(const Event& x, const Event& y) const = 0;
  /// Symmetric matrix over prepared points.
  virtual std::vector<std::vector<double>> matrix(const std::vector<Event>& pts) const;
};

class FunctionEvaluator : public DistanceEvaluator {
 public:
  FunctionEvaluator(std::string name, std::function<double(const Event&, const Event&)> f)
      : name_(std::move(name)), f_(std::move(f)) {}
  std::string name() const override { return name_; }
  double distance(const Event& x, const Event& y) const override { return f_(x, y); }

 private:
  std::string name_;
  std::function<double(const Event&, const Event&)> f_;
};

/// markowitz_upper per pair; `planar` restricts n > 1 queries to the section lattice.
class MarkowitzEvaluator : public DistanceEvaluator {
 public:
  MarkowitzEvaluator(const Domain& dom, Mesh mesh, bool planar = false)
      : dom_(dom), mesh_(mesh), planar_(planar) {}
  std::string name() const override { return planar_ ? "markowitz_section" : "markowitz_upper"; }
  double distance(const Event& x, const Event& y) const override;

 private:
  const Domain& dom_;
  Mesh mesh_;
  bool planar_;
};

/// Quadtree field in 1+1; points snap to nodes.
class FieldEvaluator : public DistanceEvaluator {
 public:
  explicit FieldEvaluator(std::shared_ptr<const MarkowitzField> field) : field_(std::move(field)) {}
  std::string name() const override { return "markowitz_field"; }
  std::vector<Event> prepare(const std::vector<Event>& pts) const override;
  double distance(const Event& x, const Event& y) const override;
  std::vector<std::vector<double>> matrix(const std::vector<Event>& pts) const override;

 private:
  std::shared_ptr<const MarkowitzField> field_;
};

double gromov_product(const DistanceEvaluator& d, const Event& x, const Event& y, const Event& w);

/// Largest minus second largest of the three pair sums, halved.
double four_point_defect(double xy, double xz, double xw, double yz, double yw, double zw);
double quadruple_defect(const DistanceEvaluator& d, const std::array<Event, 4>& q);

struct HyperbolicityReport {
  double delta_hat = 0.0;
  long long quadruples = 0;
  std::array<Event, 4> worst;
  std::vector<std::pair<double, double>> series;  // (scale, δ̂)
};

/// δ̂ over random quadruples drawn from a pool of points.
HyperbolicityReport four_point_delta(const DistanceEvaluator& d, const std::vector<Event>& pool,
                                     int quadruples = 2000, std::uint64_t seed = 42);

enum class GrowthVerdict { bounded, growing, inconclusive };
std::string to_string(GrowthVerdict v);
/// Last over first entry of a series.
double growth_ratio(const std::vector<std::pair<double, double>>& series);
GrowthVerdict classify_growth(const std::vector<std::pair<double, double>>& series);

/// R_s = {x in Ω : d_h(x,∂Ω) >= ρ0/s^p, |x - center|_∞ <= R0 s} with ρ0 = d0/rho_div, R0 = d0 r_mul.
struct ScaleFamily {
  Event center;
  double d0 = 1.0;
  double rho_div = 4.0;
  double r_mul = 1.0;
  double power = 1.0;
  Box region(double s) const;
  double floor(double s) const { return d0 / (rho_div * std::pow(s, power)); }
};

struct SamplerSpec {
  std::vector<double> scales{1, 2, 4, 8, 16};
  int quadruples = 2000;
  int pool = 48;
  std::uint64_t seed = 42;
  ScaleFamily family;
};

/// Pool for one scale: half uniform in R_s, half pushed along one or two null lines toward the boundary.
std::vector<Event> sample_scale(const Domain& dom, const ScaleFamily& fam, double s, int count, Rng& rng);

using EvaluatorFactory =
    std::function<std::unique_ptr<DistanceEvaluator>(const Box& region, double floor)>;

/// Quadtree field for 1+1 domains, section lattice above.
EvaluatorFactory default_evaluator_factory(const Domain& dom);

HyperbolicityReport hyperbolicity_series(const Domain& dom, const EvaluatorFactory& make,
                                         const SamplerSpec& spec);

struct CausalPath {
  std::vector<Event> vertices;
  std::vector<double> tau;  // time-function values at the vertices
};

/// Straight causal segment with vertices at equal increments of the time function.
CausalPath causal_quasigeodesic(const Domain& dom, const Event& from, const Event& to,
                                const TimeFunction& tau, int segments = 32);

struct QuasiGeodesicCheck {
  double worst_lower = kInf;  // min of d - (|Δt|/A - B)
  double worst_upper = kInf;  // min of (A|Δt| + B) - d
  int pairs = 0;
  bool ok() const { return worst_lower >= 0 && worst_upper >= 0; }
};

/// Samples vertex pairs and checks |Δt|/A - B <= d <= A|Δt| + B.
QuasiGeodesicCheck check_quasigeodesic(const DistanceEvaluator& d, const CausalPath& path, double a,
                                       double b, int pairs, std::uint64_t seed = 42);

struct QuasiGeodesicTriangle {
  std::array<std::vector<Event>, 3> sides;  // [x,y], [y,z], [z,x]
  double a = 2.0;
  double b = 0.0;
  Event x() const { return sides[0].front(); }
  Event y() const { return sides[1].front(); }
  Event z() const { return sides[2].front(); }
};

/// Densely sampled straight side.
std::vector<Event> sample_segment(const Event& p, const Event& q, int vertices = 33);

/// Max over side vertices of the distance to the union of the other sides.
double thin_triangle_defect(const DistanceEvaluator& d, const QuasiGeodesicTriangle& tri);

enum class WitnessKind { lightlike_boundary, broken_segment, flat_slice };

struct LightlikeRay {
  Event base;
  Vec direction;  // future lightlike
};

/// Searches the past boundary graph for a lightlike half-line.
std::optional<LightlikeRay> find_lightlike_boundary_ray(const Domain& dom);

/// k-th triangle of the escaping family; throws DomainError if the feature is absent.
QuasiGeodesicTriangle witness_family(const Domain& dom, WitnessKind kind, int k);

/// Zigzag of null segments from `from` to `to` with the given number of teeth.
std::vector<Event> zigzag_path(const Event& from, const Event& to, int teeth, int per_segment = 4);

/// One-sided Hausdorff defect sup_{v in first} d(v, second); both curves must be causal.
double causal_thinness(const DistanceEvaluator& d, const std::vector<Event>& first,
                       const std::vector<Event>& second);

}  // namespace lorentz
