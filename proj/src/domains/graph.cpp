#include <algorithm>
#include <cmath>

#include "lorentz/domains.hpp"

namespace lorentz {

namespace {

constexpr double kAuditWindow = 4.0;

double clamp_window(double v) { return std::clamp(v, -kAuditWindow, kAuditWindow); }

}  // namespace

SpatialFn grid_function(const Box& base, std::vector<int> shape, std::vector<double> values) {
  const int n = base.lo.size() - 1;
  if (static_cast<int>(shape.size()) != n) throw DomainError("grid shape does not match dimension");
  if (!base.finite()) throw DomainError("grid samples need a finite base box");
  size_t total = 1;
  for (int s : shape) {
    if (s < 2) throw DomainError("grid needs at least 2 samples per axis");
    total *= s;
  }
  if (values.size() != total) throw DomainError("grid value count does not match shape");
  return [base, shape, values, n](const Vec& p) {
    // Multilinear interpolation, clamped at the box faces.
    int idx0[kMaxCoords];
    double frac[kMaxCoords];
    for (int k = 0; k < n; ++k) {
      const double lo = base.lo[k + 1], hi = base.hi[k + 1];
      const double u = std::clamp((p[k + 1] - lo) / (hi - lo), 0.0, 1.0) * (shape[k] - 1);
      int i = std::min(static_cast<int>(u), shape[k] - 2);
      idx0[k] = i;
      frac[k] = u - i;
    }
    double acc = 0.0;
    for (int corner = 0; corner < (1 << n); ++corner) {
      double w = 1.0;
      size_t flat = 0;
      for (int k = 0; k < n; ++k) {
        const int bit = (corner >> k) & 1;
        w *= bit ? frac[k] : 1.0 - frac[k];
        flat = flat * shape[k] + idx0[k] + bit;
      }
      if (w != 0.0) acc += w * values[flat];
    }
    return acc;
  };
}

GraphDomain::GraphDomain(int size, GraphForm form) : GraphDomain(size, std::move(form), Options{}) {}

GraphDomain::GraphDomain(int size, GraphForm form, Options opt)
    : Domain(size), form_(std::move(form)), opt_(std::move(opt)) {
  if (!form_.lower || !form_.upper) throw DomainError("graph domain needs both boundary functions");
  if (form_.base.lo.size() != size || form_.base.hi.size() != size) {
    throw DimensionError("graph base box dimension mismatch");
  }
  if (form_.lipschitz_lower < 0 || form_.lipschitz_upper < 0) {
    throw DomainError("Lipschitz bounds must be non-negative");
  }
  // Audit on random pairs inside the (windowed) base box.
  Rng rng(opt_.audit_seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int n = space_dim();
  auto sample = [&] {
    Vec p(size);
    for (int k = 1; k <= n; ++k) {
      const double lo = clamp_window(form_.base.lo[k]), hi = clamp_window(form_.base.hi[k]);
      p[k] = lo + (hi - lo) * u01(rng);
    }
    return p;
  };
  for (int i = 0; i < opt_.audit_samples; ++i) {
    const Vec p = sample();
    Vec q = (i % 2) ? sample() : p;
    if (i % 2 == 0) {
      for (int k = 1; k <= n; ++k) q[k] += 1e-3 * (u01(rng) - 0.5);
      for (int k = 1; k <= n; ++k) q[k] = std::clamp(q[k], form_.base.lo[k], form_.base.hi[k]);
    }
    const double dp = (q - p).space_norm();
    const double fl = form_.lower(p), fu = form_.upper(p);
    if (std::isnan(fl) || std::isnan(fu)) throw DomainError("graph function returned NaN");
    if (!(fl < fu)) {
      throw DomainError("graph domain is empty above " + p.str() + ": lower >= upper");
    }
    if (dp == 0.0) continue;
    const auto check = [&](const SpatialFn& f, double lip, const char* which) {
      const double a = f(p), b = f(q);
      if (!std::isfinite(a) && !std::isfinite(b)) return;
      if (std::isfinite(a) != std::isfinite(b)) {
        throw DomainError(std::string("graph ") + which + " mixes finite and infinite values");
      }
      if (std::abs(a - b) > (lip + 1e-9) * dp + 1e-12) {
        throw DomainError(std::string("graph ") + which + " violates its Lipschitz bound near " +
                          p.str());
      }
    };
    check(form_.lower, form_.lipschitz_lower, "lower");
    check(form_.upper, form_.lipschitz_upper, "upper");
  }
}

bool GraphDomain::contains(const Event& x) const {
  check_size(x);
  for (int k = 1; k < size(); ++k)
    if (!(x[k] > form_.base.lo[k] && x[k] < form_.base.hi[k])) return false;
  return form_.lower(x) < x.t() && x.t() < form_.upper(x);
}

DomainFlags GraphDomain::flags() const {
  bool whole_base = true;
  for (int k = 1; k < size(); ++k)
    if (std::isfinite(form_.base.lo[k]) || std::isfinite(form_.base.hi[k])) whole_base = false;
  const Event c = center();
  const bool no_future = !std::isfinite(form_.upper(c));
  const bool no_past = !std::isfinite(form_.lower(c));
  DomainFlags f;
  f.convex = opt_.convex;
  f.causally_convex = whole_base && form_.lipschitz_lower <= 1.0 && form_.lipschitz_upper <= 1.0;
  f.future_complete = whole_base && no_future && form_.lipschitz_lower <= 1.0;
  f.bounded = form_.base.finite() && !no_future && !no_past;
  return f;
}

Event GraphDomain::center() const {
  Event c(size());
  for (int k = 1; k < size(); ++k) {
    const double lo = form_.base.lo[k], hi = form_.base.hi[k];
    c[k] = std::isfinite(lo) && std::isfinite(hi) ? 0.5 * (lo + hi)
           : std::isfinite(lo)                    ? lo + 1.0
           : std::isfinite(hi)                    ? hi - 1.0
                                                  : 0.0;
  }
  const double fl = form_.lower(c), fu = form_.upper(c);
  c[0] = std::isfinite(fl) && std::isfinite(fu) ? 0.5 * (fl + fu)
         : std::isfinite(fl)                    ? fl + 1.0
         : std::isfinite(fu)                    ? fu - 1.0
                                                : 0.0;
  return c;
}

Box GraphDomain::sampling_box() const {
  Box b{Vec(size()), Vec(size())};
  for (int k = 1; k < size(); ++k) {
    b.lo[k] = clamp_window(form_.base.lo[k]);
    b.hi[k] = clamp_window(form_.base.hi[k]);
  }
  double tlo = kInf, thi = -kInf;
  Rng rng(opt_.audit_seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 512; ++i) {
    Vec p(size());
    for (int k = 1; k < size(); ++k) p[k] = b.lo[k] + (b.hi[k] - b.lo[k]) * u01(rng);
    const double fl = form_.lower(p), fu = form_.upper(p);
    if (std::isfinite(fl)) tlo = std::min(tlo, fl), thi = std::max(thi, fl);
    if (std::isfinite(fu)) tlo = std::min(tlo, fu), thi = std::max(thi, fu);
  }
  if (!std::isfinite(tlo)) tlo = -kAuditWindow, thi = kAuditWindow;
  b.lo[0] = tlo - (std::isfinite(form_.lower(center())) ? 0.0 : kAuditWindow);
  b.hi[0] = thi + (std::isfinite(form_.upper(center())) ? 0.0 : kAuditWindow);
  return b;
}

double GraphDomain::graph_distance(const Event& x, const SpatialFn& f) const {
  const int n = space_dim();
  const double gap = std::abs(x.t() - f(x));
  if (!std::isfinite(gap)) return kInf;
  const auto lift = [&](const std::vector<double>& q) {
    Vec y = x;
    for (int k = 0; k < n; ++k) y[k + 1] = std::clamp(q[k], form_.base.lo[k + 1], form_.base.hi[k + 1]);
    y[0] = f(y);
    return y;
  };
  const auto obj = [&](const std::vector<double>& q) {
    const Vec d = lift(q) - x;
    return dot(d, d);
  };
  double best = gap * gap;
  std::vector<double> q0(n);
  for (int k = 0; k < n; ++k) q0[k] = x[k + 1];
  for (int s = 0; s <= 2 * n; ++s) {
    std::vector<double> q = q0;
    if (s > 0) q[(s - 1) / 2] += ((s % 2) ? 0.5 : -0.5) * gap;
    const auto r = nelder_mead(obj, q, 0.25 * gap + 1e-12, 1e-10 * (gap + 1e-12), 1000);
    best = std::min(best, r.value);
  }
  return std::sqrt(best);
}

double GraphDomain::boundary_distance(const Event& x) const {
  double d = std::min(graph_distance(x, form_.lower), graph_distance(x, form_.upper));
  for (int k = 1; k < size(); ++k) d = std::min({d, x[k] - form_.base.lo[k], form_.base.hi[k] - x[k]});
  return d;
}

double GraphDomain::safe_step(const Event& x, const Vec& dir) const {
  // Lipschitz bounds on t - lower and upper - t along the ray.
  const double dp = dir.space_norm();
  double step = kInf;
  const double gl = x.t() - form_.lower(x);
  const double rate_l = form_.lipschitz_lower * dp - dir.t();
  if (std::isfinite(gl) && rate_l > 0) step = std::min(step, gl / rate_l);
  const double gu = form_.upper(x) - x.t();
  const double rate_u = form_.lipschitz_upper * dp + dir.t();
  if (std::isfinite(gu) && rate_u > 0) step = std::min(step, gu / rate_u);
  for (int k = 1; k < size(); ++k) {
    if (dir[k] > 0 && std::isfinite(form_.base.hi[k])) step = std::min(step, (form_.base.hi[k] - x[k]) / dir[k]);
    if (dir[k] < 0 && std::isfinite(form_.base.lo[k])) step = std::min(step, (form_.base.lo[k] - x[k]) / dir[k]);
  }
  return std::max(step, 0.0);
}

RayExit GraphDomain::exit(const Event& x, const Vec& dir) const { return generic_exit(x, dir); }

std::pair<double, double> GraphDomain::support_interval(const Vec&) const {
  if (!opt_.convex) throw DomainError(name() + ": support function needs a convex domain");
  return {-kInf, kInf};
}

}  // namespace lorentz
