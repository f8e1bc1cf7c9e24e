#include <algorithm>
#include <cmath>

#include "lorentz/domains.hpp"

namespace lorentz {

namespace {

Vec random_unit_space(int size, Rng& rng) {
  std::normal_distribution<double> g;
  Vec w(size);
  double n2 = 0;
  while (n2 < 1e-12) {
    n2 = 0;
    for (int i = 1; i < size; ++i) {
      w[i] = g(rng);
      n2 += w[i] * w[i];
    }
  }
  return w / std::sqrt(n2);
}

// Null directions (1, ±e_i) followed by random ones.
std::vector<Vec> null_directions(int size, Rng& rng, int random_count) {
  std::vector<Vec> out;
  for (int i = 1; i < size; ++i)
    for (double s : {1.0, -1.0}) {
      Vec v(size);
      v[0] = 1.0;
      v[i] = s;
      out.push_back(v);
    }
  for (int k = 0; k < random_count; ++k) {
    Vec v = random_unit_space(size, rng);
    v[0] = 1.0;
    out.push_back(v);
  }
  return out;
}

// b-orthonormal basis of the complement of a unit timelike u.
std::vector<Vec> orthonormal_complement(const Vec& u) {
  std::vector<Vec> basis;
  const int size = u.size();
  for (int i = 1; i < size && static_cast<int>(basis.size()) < size - 1; ++i) {
    Vec v(size);
    v[i] = 1.0;
    v += minkowski_form(v, u) * u;
    for (const Vec& f : basis) v -= minkowski_form(v, f) * f;
    const double nv = minkowski_form(v, v);
    if (nv > 1e-12) basis.push_back(v / std::sqrt(nv));
  }
  return basis;
}

}  // namespace

double Domain::safe_step(const Event& x, const Vec& dir) const {
  return boundary_distance(x) / dir.norm();
}

RayExit Domain::generic_exit(const Event& x, const Vec& dir) const {
  const double dn = dir.norm();
  const double horizon = 1e6 * (1.0 + x.norm() + scale()) / dn;
  const auto inside = [&](double s) { return contains(x + s * dir); };
  double lo = 0.0, hi = kInf;
  double step = safe_step(x, dir);
  for (int it = 0; it < 400; ++it) {
    if (!std::isfinite(step)) return RayExit{Endpoint::at_infinity(size()), kInf};
    if (step <= 1e-13 * (lo + 1e-300)) break;
    const double s = lo + step;
    if (s > horizon) return RayExit{Endpoint::at_infinity(size()), kInf};
    if (!inside(s)) {
      hi = s;
      break;
    }
    lo = s;
    step = safe_step(x + lo * dir, dir);
  }
  if (!std::isfinite(hi)) {
    // Gallop for an outside point.
    double g = std::max(step, 1e-12 * (1.0 + lo));
    while (true) {
      const double s = lo + g;
      if (s > horizon) return RayExit{Endpoint::at_infinity(size()), kInf};
      if (!inside(s)) {
        hi = s;
        break;
      }
      if (flags().convex) lo = s;
      g *= 2.0;
    }
  }
  while (hi - lo > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (inside(mid) ? lo : hi) = mid;
  }
  return RayExit{Endpoint::at(x + hi * dir), hi};
}

RayExit ray_exit(const Domain& dom, const Event& x, const Vec& dir) {
  require_same_dim(x, dir);
  if (x.size() != dom.size()) throw DimensionError("ray_exit: dimension mismatch");
  if (dir.norm() == 0.0) throw DomainError("ray_exit: zero direction");
  if (!dom.contains(x)) throw DomainError("ray_exit: point outside " + dom.name() + ": " + x.str());
  return dom.exit(x, dir);
}

RayExit ray_exit(const Domain& dom, const Event& x, const Vec& v, TimeSign s) {
  return ray_exit(dom, x, s == TimeSign::future ? v : -v);
}

CausalStructure causal_structure_checks(const Domain& dom, std::uint64_t seed, int samples) {
  Rng rng(seed);
  const Box box = dom.sampling_box();
  const int size = dom.size();
  CausalStructure cs{true, true, true};
  std::vector<Event> pts;
  for (int i = 0; i < samples; ++i) pts.push_back(sample_interior(dom, rng, box));

  // Causal convexity: for causally related pairs, the edge sphere of J(x,y) must be inside.
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (const Event& x : pts) {
    if (!cs.causally_convex) break;
    for (int k = 0; k < 4 && cs.causally_convex; ++k) {
      Vec v = random_unit_space(size, rng) * u01(rng);
      v[0] = 1.0;
      const RayExit ex = dom.exit(x, v);
      const double reach = std::isfinite(ex.param) ? ex.param : 4.0 * dom.scale();
      const Event y = x + (0.999 * reach * u01(rng)) * v;
      if (!dom.contains(y) || !causally_precedes(x, y)) continue;
      const Vec d = y - x;
      const double bd = minkowski_form(d, d);
      if (!(bd < 0)) continue;
      const double tau = std::sqrt(-bd);
      const Vec uhat = d / tau;
      const Event m = 0.5 * (x + y);
      for (const Vec& f : orthonormal_complement(uhat)) {
        for (double s : {0.999, -0.999, 0.5, -0.5}) {
          if (!dom.contains(m + (0.5 * tau * s) * f)) {
            cs.causally_convex = false;
            break;
          }
        }
        if (!cs.causally_convex) break;
      }
    }
  }

  const auto dirs_for = [&](int random_count) { return null_directions(size, rng, random_count); };
  for (const Event& x : pts) {
    if (!cs.future_complete) break;
    for (const Vec& l : dirs_for(6)) {
      if (std::isfinite(dom.exit(x, l).param)) {
        cs.future_complete = false;
        break;
      }
      Vec tl = l;
      tl[0] = 1.5;
      if (std::isfinite(dom.exit(x, tl).param)) {
        cs.future_complete = false;
        break;
      }
    }
  }
  for (const Event& x : pts) {
    if (!cs.lightlike_line_free) break;
    for (const Vec& l : dirs_for(6)) {
      if (!std::isfinite(dom.exit(x, l).param) && !std::isfinite(dom.exit(x, -l).param)) {
        cs.lightlike_line_free = false;
        break;
      }
    }
  }
  return cs;
}

CausalBoundary causal_boundary(const Domain& dom) {
  auto form = dom.graph_form();
  if (!form) throw DomainError(dom.name() + " is not given as a domain between two graphs");
  CausalBoundary cb;
  const Event c = dom.center();
  cb.has_past = std::isfinite(form->lower(c));
  cb.has_future = std::isfinite(form->upper(c));
  cb.graphs = std::move(*form);
  return cb;
}

AcausalityReport stable_acausality_epsilon(const std::vector<Event>& samples) {
  if (samples.size() < 2) throw DomainError("stable_acausality_epsilon needs at least 2 samples");
  double lmax = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    for (size_t j = i + 1; j < samples.size(); ++j) {
      require_same_dim(samples[i], samples[j]);
      const Vec d = samples[j] - samples[i];
      const double dp = d.space_norm(), dt = std::abs(d.t());
      if (dp == 0.0) {
        if (dt > 0.0) lmax = kInf;
        continue;
      }
      lmax = std::max(lmax, dt / dp);
    }
  }
  AcausalityReport r;
  r.lipschitz = lmax;
  if (lmax == 0.0) {
    r.kind = AcausalityReport::Kind::every_epsilon;
    r.epsilon = kInf;
  } else if (lmax >= 1.0 - 1e-9) {
    r.kind = AcausalityReport::Kind::not_stable;
  } else {
    r.kind = AcausalityReport::Kind::stable;
    r.epsilon = 1.0 / lmax - 1.0;
  }
  return r;
}

CosmologicalTime cosmological_time_generic(const Domain& dom, const Event& x, TimeSign sign) {
  if (!dom.contains(x)) throw DomainError("cosmological_time: point outside " + dom.name());
  const CausalBoundary cb = causal_boundary(dom);
  const bool past = sign == TimeSign::past;
  if ((past && !cb.has_past) || (!past && !cb.has_future)) {
    return {kInf, Singularity{Event(dom.size()), false}};
  }
  const SpatialFn& f = past ? cb.graphs.lower : cb.graphs.upper;
  const double lip = past ? cb.graphs.lipschitz_lower : cb.graphs.lipschitz_upper;
  const Box& base = cb.graphs.base;
  const int n = dom.space_dim();
  const double g0 = past ? x.t() - f(x) : f(x) - x.t();
  const double radius = lip < 1.0 ? g0 / (1.0 - lip) : 4.0 * (g0 + dom.scale());

  const auto lift = [&](const std::vector<double>& q) {
    Event y = x;
    for (int i = 0; i < n; ++i) y[i + 1] = std::clamp(q[i], base.lo[i + 1], base.hi[i + 1]);
    y[0] = f(y);
    return y;
  };
  const auto objective = [&](const std::vector<double>& q) {
    const Event y = lift(q);
    if (!std::isfinite(y.t())) return 1e300;
    const double dt = past ? x.t() - y.t() : y.t() - x.t();
    const Vec d = y - x;
    const double dp2 = d.space_norm() * d.space_norm();
    if (dt < 0) return dt * dt + dp2;
    return -(dt * dt - dp2);
  };

  struct Run {
    std::vector<double> q;
    double value;
  };
  std::vector<Run> runs;
  constexpr int kSeeds = 32;
  for (int i = 0; i < kSeeds; ++i) {
    std::vector<double> q(n);
    for (int k = 0; k < n; ++k) q[k] = x[k + 1];
    if (i > 0) {
      const double rho = halton(i, 2);
      std::vector<double> w(n);
      if (n == 1) {
        w[0] = i % 2 ? 1.0 : -1.0;
      } else {
        double nn = 0;
        for (int k = 0; k < n; ++k) {
          // Box-Muller on Halton coordinates.
          const double u1 = std::max(halton(i, nth_prime(2 * k + 1)), 1e-12);
          const double u2 = halton(i, nth_prime(2 * k + 2));
          w[k] = std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2);
          nn += w[k] * w[k];
        }
        for (double& v : w) v /= std::sqrt(nn);
      }
      for (int k = 0; k < n; ++k) q[k] += radius * rho * w[k];
    }
    auto res = nelder_mead(objective, q, 0.25 * std::min(radius, 4.0 * g0 + 1e-12),
                           1e-11 * (radius + g0), 4000);
    runs.push_back({res.x, res.value});
  }
  const auto best = std::min_element(runs.begin(), runs.end(),
                                     [](const Run& a, const Run& b) { return a.value < b.value; });
  if (!(best->value < 0)) throw SolverError("cosmological_time: no feasible boundary point found");
  CosmologicalTime ct;
  ct.value = std::sqrt(-best->value);
  ct.singularity.point = lift(best->q);
  ct.singularity.unique = true;
  const Event ybest = ct.singularity.point;
  for (const Run& r : runs) {
    if (r.value <= best->value + 1e-8 * std::abs(best->value) &&
        (lift(r.q) - ybest).norm() > 1e-4 * (radius + g0)) {
      ct.singularity.unique = false;
    }
  }
  return ct;
}

CosmologicalTime cosmological_time_full(const Domain& dom, const Event& x, TimeSign s) {
  if (x.size() != dom.size()) throw DimensionError("cosmological_time: dimension mismatch");
  if (!dom.contains(x)) throw DomainError("cosmological_time: point outside " + dom.name());
  if (s == TimeSign::future && dom.flags().future_complete) {
    return {kInf, Singularity{Event(dom.size()), false}};
  }
  if (auto v = dom.cosmological_time_closed(x, s)) {
    CosmologicalTime ct;
    ct.value = *v;
    if (auto sing = dom.initial_singularity_closed(x, s)) ct.singularity = *sing;
    else if (std::isfinite(*v)) ct.singularity = cosmological_time_generic(dom, x, s).singularity;
    return ct;
  }
  return cosmological_time_generic(dom, x, s);
}

double cosmological_time(const Domain& dom, const Event& x, TimeSign s) {
  return cosmological_time_full(dom, x, s).value;
}

Singularity initial_singularity(const Domain& dom, const Event& x, TimeSign s) {
  const CosmologicalTime ct = cosmological_time_full(dom, x, s);
  if (!std::isfinite(ct.value)) throw DomainError("initial_singularity: cosmological time is infinite");
  return ct.singularity;
}

Event sample_interior(const Domain& dom, Rng& rng, const Box& box, double min_dist, int max_tries) {
  if (!box.finite()) throw DomainError("sample_interior needs a finite box");
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Event x(dom.size());
  for (int k = 0; k < max_tries; ++k) {
    for (int i = 0; i < dom.size(); ++i) x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * u01(rng);
    if (!dom.contains(x)) continue;
    if (min_dist > 0 && dom.boundary_distance(x) < min_dist) continue;
    return x;
  }
  throw SolverError("sample_interior: no admissible point in " + dom.name());
}

}  // namespace lorentz
