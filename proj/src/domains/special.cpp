#include <algorithm>
#include <cmath>

#include "lorentz/domains.hpp"

namespace lorentz {

namespace {

// Real roots of A s^2 + B s + C = 0 in ascending order.
std::vector<double> quadratic_roots(double A, double B, double C) {
  double disc = B * B - 4.0 * A * C;
  if (disc < 0.0 && disc > -1e-12 * (B * B + std::abs(4.0 * A * C))) disc = 0.0;
  if (disc < 0.0) return {};
  const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
  std::vector<double> r;
  if (A != 0.0 && std::isfinite(q / A)) r.push_back(q / A);
  if (q != 0.0 && std::isfinite(C / q)) r.push_back(C / q);
  std::sort(r.begin(), r.end());
  return r;
}

// Open cone {sign * c (t - t_a) > |p_A - a_A|}, p_A the first `k` spatial coordinates.
struct Cone {
  Event apex;
  double c = 1.0;
  int sign = 1;
  int k = 0;

  double radial(const Vec& d) const {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += d[i] * d[i];
    return std::sqrt(s);
  }
  double gap(const Event& x) const {
    const Vec d = x - apex;
    return sign * c * d.t() - radial(d);
  }
  double distance(const Event& x) const { return gap(x) / std::sqrt(1.0 + c * c); }

  // Smallest s > 0 where x + s dir meets the sheet of the cone's boundary.
  double crossing(const Event& x, const Vec& dir) const {
    const Vec d = x - apex;
    double dp2 = 0, dd = 0, pp = 0;
    for (int i = 1; i <= k; ++i) {
      dp2 += dir[i] * dir[i];
      dd += d[i] * dir[i];
      pp += d[i] * d[i];
    }
    const double c2 = c * c;
    const double A = c2 * dir.t() * dir.t() - dp2;
    const double B = 2.0 * (c2 * d.t() * dir.t() - dd);
    const double C = c2 * d.t() * d.t() - pp;
    double best = kInf;
    for (double s : quadratic_roots(A, B, C)) {
      if (!(s > 0.0)) continue;
      const double ts = sign * (d.t() + s * dir.t());
      const double tol = 1e-12 * (std::abs(d.t()) + s * std::abs(dir.t()) + 1e-300);
      if (ts < -tol) continue;
      best = std::min(best, s);
    }
    return best;
  }
};

// Crossings beyond the horizon 1e6 (1 + |x| + scale) count as infinite.
RayExit exit_at(const Event& x, const Vec& dir, double s, double scale = 1.0) {
  const double horizon = 1e6 * (1.0 + x.norm() + scale) / dir.norm();
  if (!std::isfinite(s) || s > horizon) return RayExit{Endpoint::at_infinity(x.size()), kInf};
  return RayExit{Endpoint::at(x + s * dir), s};
}

Box box_around(const Event& c, double half_t, double half_p) {
  Box b{c, c};
  b.lo[0] -= half_t;
  b.hi[0] += half_t;
  for (int i = 1; i < c.size(); ++i) {
    b.lo[i] -= half_p;
    b.hi[i] += half_p;
  }
  return b;
}

void require_eps(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw DomainError("epsilon must be finite and >= 0");
}

// Support of a cone {c sign (t - t_a) > |p - p_a|} in direction phi.
std::pair<double, double> cone_support(const Event& apex, double c, int sign, const Vec& phi) {
  const double ft = phi.t() * sign;
  const double fp = phi.space_norm();
  const double at_apex = dot(phi, apex);
  const double tol = 1e-12 * (std::abs(phi.t()) + fp);
  if (ft - c * fp >= -tol) {
    return sign > 0 ? std::pair{at_apex, kInf} : std::pair{-kInf, at_apex};
  }
  if (-ft - c * fp >= -tol) {
    return sign > 0 ? std::pair{-kInf, at_apex} : std::pair{at_apex, kInf};
  }
  return {-kInf, kInf};
}

}  // namespace

// ---------------- Box / Domain ----------------

bool Box::contains(const Vec& x) const {
  for (int i = 0; i < x.size(); ++i)
    if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
  return true;
}

bool Box::finite() const {
  for (int i = 0; i < lo.size(); ++i)
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) return false;
  return true;
}

Domain::Domain(int size) : size_(size) {
  if (size < 2 || size > kMaxCoords) throw DimensionError("domain dimension out of range");
}

void Domain::check_size(const Vec& x) const {
  if (x.size() != size_) throw DimensionError("point dimension does not match domain");
}

std::pair<double, double> Domain::support_interval(const Vec&) const {
  throw DomainError(name() + ": support function needs a convex domain");
}

RayExit Domain::exit(const Event& x, const Vec& dir) const { return generic_exit(x, dir); }

// ---------------- ConeFuture ----------------

ConeFuture::ConeFuture(const Event& apex, double eps) : Domain(apex.size()), apex_(apex), eps_(eps) {
  require_eps(eps);
}

bool ConeFuture::contains(const Event& x) const {
  check_size(x);
  return Cone{apex_, 1 + eps_, 1, space_dim()}.gap(x) > 0;
}

double ConeFuture::boundary_distance(const Event& x) const {
  return Cone{apex_, 1 + eps_, 1, space_dim()}.distance(x);
}

Event ConeFuture::center() const { return apex_ + time_axis(size()); }

Box ConeFuture::sampling_box() const {
  Box b = box_around(apex_, 0.0, 2.0 * (1 + eps_));
  b.hi[0] += 2.0;
  return b;
}

RayExit ConeFuture::exit(const Event& x, const Vec& dir) const {
  return exit_at(x, dir, Cone{apex_, 1 + eps_, 1, space_dim()}.crossing(x, dir));
}

std::optional<GraphForm> ConeFuture::graph_form() const {
  const Event a = apex_;
  const double c = 1 + eps_;
  const int n = space_dim();
  GraphForm g;
  g.lower = [a, c, n](const Vec& p) {
    double s = 0;
    for (int i = 1; i <= n; ++i) s += (p[i] - a[i]) * (p[i] - a[i]);
    return a.t() + std::sqrt(s) / c;
  };
  g.upper = [](const Vec&) { return kInf; };
  g.lipschitz_lower = 1.0 / c;
  g.lipschitz_upper = 0.0;
  g.base = box_around(Vec(size()), 0.0, kInf);
  return g;
}

std::optional<double> ConeFuture::cosmological_time_closed(const Event& x, TimeSign s) const {
  if (s == TimeSign::future) return kInf;
  if (eps_ > 0) return std::nullopt;
  return time_separation(apex_, x);
}

std::optional<Singularity> ConeFuture::initial_singularity_closed(const Event&, TimeSign s) const {
  if (s == TimeSign::future || eps_ > 0) return std::nullopt;
  return Singularity{apex_, true};
}

std::vector<ProjectiveWitness> ConeFuture::projective_witnesses() const {
  if (eps_ > 0) return {};
  const Event a = apex_;
  return {{"T(a,.)^2", [a](const Event& x) { return -minkowski_form(x - a, x - a); },
           ProjectiveInterval{0.0, kInf}}};
}

std::pair<double, double> ConeFuture::support_interval(const Vec& phi) const {
  return cone_support(apex_, 1 + eps_, 1, phi);
}

// ---------------- HalfSpaceFuture ----------------

HalfSpaceFuture::HalfSpaceFuture(const Event& origin, const Vec& normal)
    : Domain(origin.size()), origin_(origin), normal_(normal) {
  require_same_dim(origin, normal);
  const double b = minkowski_form(normal, normal);
  if (!(b < 0.0) || !(normal.t() > 0.0)) {
    throw DomainError("HalfSpaceFuture normal must be future timelike");
  }
  normal_ = normal / std::sqrt(-b);
}

HalfSpaceFuture::HalfSpaceFuture(int size) : HalfSpaceFuture(Vec(size), time_axis(size)) {}

double HalfSpaceFuture::height(const Event& x) const { return -minkowski_form(normal_, x - origin_); }

bool HalfSpaceFuture::contains(const Event& x) const {
  check_size(x);
  return height(x) > 0;
}

double HalfSpaceFuture::boundary_distance(const Event& x) const {
  Vec jn = normal_;
  jn[0] = -jn[0];
  return height(x) / jn.norm();
}

Box HalfSpaceFuture::sampling_box() const {
  Box b = box_around(center(), 2.0, 2.0);
  b.hi[0] += 2.0;
  return b;
}

RayExit HalfSpaceFuture::exit(const Event& x, const Vec& dir) const {
  const double rate = minkowski_form(normal_, dir);
  if (!(rate > 0.0)) return exit_at(x, dir, kInf);
  return exit_at(x, dir, height(x) / rate);
}

std::optional<GraphForm> HalfSpaceFuture::graph_form() const {
  const Event o = origin_;
  const Vec nu = normal_;
  const int n = space_dim();
  GraphForm g;
  g.lower = [o, nu, n](const Vec& p) {
    double s = 0;
    for (int i = 1; i <= n; ++i) s += nu[i] * (p[i] - o[i]);
    return o.t() + s / nu.t();
  };
  g.upper = [](const Vec&) { return kInf; };
  g.lipschitz_lower = nu.space_norm() / nu.t();
  g.lipschitz_upper = 0.0;
  g.base = box_around(Vec(size()), 0.0, kInf);
  return g;
}

std::optional<double> HalfSpaceFuture::cosmological_time_closed(const Event& x, TimeSign s) const {
  if (s == TimeSign::future) return kInf;
  return height(x);
}

std::optional<Singularity> HalfSpaceFuture::initial_singularity_closed(const Event& x,
                                                                       TimeSign s) const {
  if (s == TimeSign::future) return std::nullopt;
  return Singularity{x - height(x) * normal_, true};
}

std::vector<ProjectiveWitness> HalfSpaceFuture::projective_witnesses() const {
  const HalfSpaceFuture self = *this;
  return {{"height", [self](const Event& x) { return self.height(x); },
           ProjectiveInterval{0.0, kInf}}};
}

std::pair<double, double> HalfSpaceFuture::support_interval(const Vec& phi) const {
  // Ω = {<m, x - o> > 0} with m = (nu_t, -nu_p).
  Vec m = normal_;
  for (int i = 1; i < size(); ++i) m[i] = -m[i];
  const double lam = dot(phi, m) / dot(m, m);
  const Vec resid = phi - lam * m;
  if (resid.norm() > 1e-12 * std::max(1.0, phi.norm()) || lam == 0.0) return {-kInf, kInf};
  const double at = dot(phi, origin_);
  return lam > 0 ? std::pair{at, kInf} : std::pair{-kInf, at};
}

// ---------------- Diamond ----------------

Diamond::Diamond(const Event& a, const Event& b, double eps)
    : Domain(a.size()), a_(a), b_(b), eps_(eps) {
  require_same_dim(a, b);
  require_eps(eps);
  const Vec d = b - a;
  if (!((1 + eps) * d.t() > d.space_norm())) {
    throw DomainError("diamond tips must be timelike related: " + a.str() + " " + b.str());
  }
}

bool Diamond::contains(const Event& x) const {
  check_size(x);
  const double c = 1 + eps_;
  return Cone{a_, c, 1, space_dim()}.gap(x) > 0 && Cone{b_, c, -1, space_dim()}.gap(x) > 0;
}

double Diamond::boundary_distance(const Event& x) const {
  const double c = 1 + eps_;
  return std::min(Cone{a_, c, 1, space_dim()}.distance(x), Cone{b_, c, -1, space_dim()}.distance(x));
}

Box Diamond::sampling_box() const {
  const double span = b_.t() - a_.t();
  Box box = box_around(center(), 0.5 * span, (1 + eps_) * span);
  return box;
}

RayExit Diamond::exit(const Event& x, const Vec& dir) const {
  const double c = 1 + eps_;
  const double s = std::min(Cone{a_, c, 1, space_dim()}.crossing(x, dir),
                            Cone{b_, c, -1, space_dim()}.crossing(x, dir));
  return exit_at(x, dir, s);
}

std::optional<GraphForm> Diamond::graph_form() const {
  const Event a = a_, b = b_;
  const double c = 1 + eps_;
  const int n = space_dim();
  auto radial = [n](const Vec& p, const Event& e) {
    double s = 0;
    for (int i = 1; i <= n; ++i) s += (p[i] - e[i]) * (p[i] - e[i]);
    return std::sqrt(s);
  };
  GraphForm g;
  g.lower = [a, c, radial](const Vec& p) { return a.t() + radial(p, a) / c; };
  g.upper = [b, c, radial](const Vec& p) { return b.t() - radial(p, b) / c; };
  g.lipschitz_lower = g.lipschitz_upper = 1.0 / c;
  Box box = sampling_box();
  g.base = box;
  return g;
}

std::optional<double> Diamond::cosmological_time_closed(const Event& x, TimeSign s) const {
  if (eps_ > 0) return std::nullopt;
  return s == TimeSign::past ? time_separation(a_, x) : time_separation(x, b_);
}

std::optional<Singularity> Diamond::initial_singularity_closed(const Event&, TimeSign s) const {
  if (eps_ > 0) return std::nullopt;
  return Singularity{s == TimeSign::past ? a_ : b_, true};
}

std::pair<Event, Event> Diamond::side_corners() const {
  if (size() != 2) throw DimensionError("side_corners is defined in 1+1 only");
  if (eps_ > 0) throw DomainError("side_corners needs eps = 0");
  const Vec d = b_ - a_;
  const double alpha = 0.5 * (d[0] + d[1]), beta = 0.5 * (d[0] - d[1]);
  return {a_ + Vec{alpha, alpha}, a_ + Vec{beta, -beta}};
}

std::vector<ProjectiveWitness> Diamond::projective_witnesses() const {
  if (eps_ > 0) return {};
  const Event a = a_, b = b_;
  std::vector<ProjectiveWitness> w;
  w.push_back({"T(a,.)^2/T(.,b)^2",
               [a, b](const Event& x) {
                 return minkowski_form(x - a, x - a) / minkowski_form(b - x, b - x);
               },
               ProjectiveInterval{0.0, kInf}});
  if (size() == 2) {
    const auto [e1, e2] = side_corners();
    w.push_back({"b(.-e1)/b(.-e2)",
                 [e1, e2](const Event& x) {
                   return minkowski_form(x - e1, x - e1) / minkowski_form(x - e2, x - e2);
                 },
                 ProjectiveInterval{0.0, kInf}});
  }
  return w;
}

std::pair<double, double> Diamond::support_interval(const Vec& phi) const {
  double lo = std::min(dot(phi, a_), dot(phi, b_));
  double hi = std::max(dot(phi, a_), dot(phi, b_));
  const Vec d = b_ - a_;
  if (eps_ == 0.0) {
    // Edge sphere: m + R e with e ranging over b-unit vectors orthogonal to u.
    const double tab = std::sqrt(-minkowski_form(d, d));
    const Vec u = d / tab;
    const Vec m = center();
    const double r = 0.5 * tab;
    std::vector<Vec> basis;
    for (int i = 1; i < size() && static_cast<int>(basis.size()) < space_dim(); ++i) {
      Vec v(size());
      v[i] = 1.0;
      v += minkowski_form(v, u) * u;
      for (const Vec& f : basis) v -= minkowski_form(v, f) * f;
      const double nv = minkowski_form(v, v);
      if (nv > 1e-12) basis.push_back(v / std::sqrt(nv));
    }
    double s = 0;
    for (const Vec& f : basis) s += dot(phi, f) * dot(phi, f);
    lo = std::min(lo, dot(phi, m) - r * std::sqrt(s));
    hi = std::max(hi, dot(phi, m) + r * std::sqrt(s));
    return {lo, hi};
  }
  if (d.space_norm() > 1e-12 * d.norm()) {
    throw DomainError("support function of a tilted stable diamond is not implemented");
  }
  const double tm = 0.5 * (a_.t() + b_.t());
  const double rad = (1 + eps_) * 0.5 * d.t();
  Vec m = center();
  const double s = phi.space_norm();
  lo = std::min(lo, phi.t() * tm + (dot(phi, m) - phi.t() * m.t()) - rad * s);
  hi = std::max(hi, phi.t() * tm + (dot(phi, m) - phi.t() * m.t()) + rad * s);
  return {lo, hi};
}

// ---------------- StableConeComplement ----------------

StableConeComplement::StableConeComplement(int size, double eps) : Domain(size), eps_(eps) {
  require_eps(eps);
  if (!(eps > 0)) throw DomainError("StableConeComplement needs eps > 0");
}

bool StableConeComplement::contains(const Event& x) const {
  check_size(x);
  return (1 + eps_) * x.t() + x.space_norm() > 0;
}

double StableConeComplement::boundary_distance(const Event& x) const {
  // Distance to the wedge |q| <= -(1+eps) s in the (t, |p|) plane.
  const double c = 1 + eps_;
  const double t = x.t(), r = x.space_norm();
  const double k = std::sqrt(1 + c * c);
  if (-t + c * r <= 0.0) return std::hypot(t, r);
  return (c * t + r) / k;
}

Event StableConeComplement::center() const { return time_axis(size()); }

Box StableConeComplement::sampling_box() const { return box_around(Vec(size()), 2.0, 2.0); }

RayExit StableConeComplement::exit(const Event& x, const Vec& dir) const {
  check_size(x);
  return exit_at(x, dir, Cone{Vec(size()), 1 + eps_, -1, space_dim()}.crossing(x, dir));
}

std::optional<GraphForm> StableConeComplement::graph_form() const {
  const double c = 1 + eps_;
  GraphForm g;
  g.lower = [c](const Vec& p) { return -p.space_norm() / c; };
  g.upper = [](const Vec&) { return kInf; };
  g.lipschitz_lower = 1.0 / c;
  g.lipschitz_upper = 0.0;
  g.base = box_around(Vec(size()), 0.0, kInf);
  return g;
}

std::optional<double> StableConeComplement::cosmological_time_closed(const Event& x,
                                                                    TimeSign s) const {
  if (s == TimeSign::future) return kInf;
  const double c = 1 + eps_;
  return (c * x.t() + x.space_norm()) / std::sqrt(c * c - 1);
}

std::optional<Singularity> StableConeComplement::initial_singularity_closed(const Event& x,
                                                                           TimeSign s) const {
  if (s == TimeSign::future) return std::nullopt;
  const double c = 1 + eps_;
  const double r = x.space_norm();
  Event y(size());
  if (r == 0.0) {
    const double k = x.t() / (c * c - 1);
    y[0] = -k;
    y[1] = c * k;
    return Singularity{y, false};
  }
  const double lam = (x.t() + c * r) / ((c * c - 1) * r);
  y[0] = -lam * r;
  for (int i = 1; i < size(); ++i) y[i] = lam * c * x[i];
  return Singularity{y, true};
}

// ---------------- SpacelikeSlab ----------------

SpacelikeSlab::SpacelikeSlab(int size, double h) : Domain(size), h_(h) {
  if (!(h > 0) || !std::isfinite(h)) throw DomainError("slab half-width must be positive");
}

bool SpacelikeSlab::contains(const Event& x) const {
  check_size(x);
  return std::abs(x.t()) < h_;
}

double SpacelikeSlab::boundary_distance(const Event& x) const { return h_ - std::abs(x.t()); }

Box SpacelikeSlab::sampling_box() const { return box_around(Vec(size()), h_, 4.0 * h_); }

RayExit SpacelikeSlab::exit(const Event& x, const Vec& dir) const {
  if (dir.t() > 0) return exit_at(x, dir, (h_ - x.t()) / dir.t());
  if (dir.t() < 0) return exit_at(x, dir, (-h_ - x.t()) / dir.t());
  return exit_at(x, dir, kInf);
}

std::optional<GraphForm> SpacelikeSlab::graph_form() const {
  const double h = h_;
  GraphForm g;
  g.lower = [h](const Vec&) { return -h; };
  g.upper = [h](const Vec&) { return h; };
  g.lipschitz_lower = g.lipschitz_upper = 0.0;
  g.base = box_around(Vec(size()), 0.0, kInf);
  return g;
}

std::optional<double> SpacelikeSlab::cosmological_time_closed(const Event& x, TimeSign s) const {
  return s == TimeSign::past ? x.t() + h_ : h_ - x.t();
}

std::optional<Singularity> SpacelikeSlab::initial_singularity_closed(const Event& x,
                                                                    TimeSign s) const {
  Event y = x;
  y[0] = s == TimeSign::past ? -h_ : h_;
  return Singularity{y, true};
}

std::vector<ProjectiveWitness> SpacelikeSlab::projective_witnesses() const {
  return {{"t", [](const Event& x) { return x.t(); }, ProjectiveInterval{-h_, h_}}};
}

std::pair<double, double> SpacelikeSlab::support_interval(const Vec& phi) const {
  if (phi.space_norm() > 1e-12 * phi.norm()) return {-kInf, kInf};
  return {-std::abs(phi.t()) * h_, std::abs(phi.t()) * h_};
}

// ---------------- Bonsante ----------------

Bonsante::Bonsante(int size, int l) : Domain(size), l_(l) {
  if (l < 0 || l > size - 1) throw DomainError("Bonsante needs 0 <= l <= n");
}

double Bonsante::radial(const Event& x) const {
  double s = 0;
  for (int i = 1; i <= space_dim() - l_; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

bool Bonsante::contains(const Event& x) const {
  check_size(x);
  return x.t() > radial(x);
}

double Bonsante::boundary_distance(const Event& x) const {
  if (l_ == space_dim()) return x.t();
  return (x.t() - radial(x)) / std::sqrt(2.0);
}

Box Bonsante::sampling_box() const {
  Box b = box_around(Vec(size()), 0.0, 2.0);
  b.hi[0] = 3.0;
  return b;
}

RayExit Bonsante::exit(const Event& x, const Vec& dir) const {
  check_size(x);
  return exit_at(x, dir, Cone{Vec(size()), 1.0, 1, space_dim() - l_}.crossing(x, dir));
}

std::optional<GraphForm> Bonsante::graph_form() const {
  const Bonsante self = *this;
  GraphForm g;
  g.lower = [self](const Vec& p) { return self.radial(p); };
  g.upper = [](const Vec&) { return kInf; };
  g.lipschitz_lower = l_ == space_dim() ? 0.0 : 1.0;
  g.lipschitz_upper = 0.0;
  g.base = box_around(Vec(size()), 0.0, kInf);
  return g;
}

std::optional<double> Bonsante::cosmological_time_closed(const Event& x, TimeSign s) const {
  if (s == TimeSign::future) return kInf;
  const double r = radial(x);
  return std::sqrt((x.t() - r) * (x.t() + r));
}

std::optional<Singularity> Bonsante::initial_singularity_closed(const Event& x, TimeSign s) const {
  if (s == TimeSign::future) return std::nullopt;
  Event y = x;
  y[0] = 0.0;
  for (int i = 1; i <= space_dim() - l_; ++i) y[i] = 0.0;
  return Singularity{y, true};
}

std::pair<double, double> Bonsante::support_interval(const Vec& phi) const {
  for (int i = space_dim() - l_ + 1; i < size(); ++i)
    if (std::abs(phi[i]) > 1e-12 * phi.norm()) return {-kInf, kInf};
  return cone_support(Vec(size()), 1.0, 1, phi);
}

// ---------------- EuclideanBall ----------------

EuclideanBall::EuclideanBall(const Event& c, double r) : Domain(c.size()), c_(c), r_(r) {
  if (!(r > 0) || !std::isfinite(r)) throw DomainError("ball radius must be positive");
}

bool EuclideanBall::contains(const Event& x) const {
  check_size(x);
  return (x - c_).norm() < r_;
}

double EuclideanBall::boundary_distance(const Event& x) const { return r_ - (x - c_).norm(); }

Box EuclideanBall::sampling_box() const { return box_around(c_, r_, r_); }

RayExit EuclideanBall::exit(const Event& x, const Vec& dir) const {
  const Vec d = x - c_;
  const auto roots = quadratic_roots(dot(dir, dir), 2 * dot(d, dir), dot(d, d) - r_ * r_);
  double best = kInf;
  for (double s : roots)
    if (s > 0) best = std::min(best, s);
  return exit_at(x, dir, best);
}

std::pair<double, double> EuclideanBall::support_interval(const Vec& phi) const {
  return {dot(phi, c_) - r_ * phi.norm(), dot(phi, c_) + r_ * phi.norm()};
}

// ---------------- conformal images ----------------

Diamond transform_diamond(const Diamond& d, const ConformalMap& g) {
  if (d.eps() > 0) {
    const bool keeps_axis = g.kind() == ConformalMap::Kind::similarity &&
                            std::abs(std::abs(g.linear()(0, 0)) - 1.0) < 1e-12;
    if (!keeps_axis) throw DomainError("stable diamonds are only preserved by axis-fixing maps");
  }
  const Event ga = g.apply(d.a()), gb = g.apply(d.b());
  if (gb.t() > ga.t()) return Diamond(ga, gb, d.eps());
  return Diamond(gb, ga, d.eps());
}

}  // namespace lorentz
