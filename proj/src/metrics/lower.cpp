#include <algorithm>
#include <cmath>

#include "internal.hpp"

namespace lorentz {

namespace {

// ρ of the image interval of Ω under x -> <phi, x>; 0 when the image is the whole line.
double functional_score(const Domain& dom, const Vec& phi, const Event& x, const Event& y) {
  if (phi.norm() < 1e-12) return 0.0;
  const Vec f = phi / phi.norm();
  try {
    const auto [lo, hi] = dom.support_interval(f);
    if (!std::isfinite(lo) && !std::isfinite(hi)) return 0.0;
    const ProjectiveInterval j{lo, hi};
    const double fx = dot(f, x), fy = dot(f, y);
    if (!j.contains(fx) || !j.contains(fy)) return 0.0;
    return rho_interval(j, fx, fy);
  } catch (const LorentzError&) {
    return 0.0;
  }
}

}  // namespace

DistanceEstimate markowitz_lower(const Domain& dom, const Event& x, const Event& y) {
  if (!dom.contains(x) || !dom.contains(y)) throw DomainError("markowitz_lower: point outside Ω");
  DistanceEstimate est;
  est.kind = EstimateKind::lower;
  if (x == y) return est;

  for (const ProjectiveWitness& w : dom.projective_witnesses()) {
    const double fx = w.f(x), fy = w.f(y);
    if (!w.range.contains(fx) || !w.range.contains(fy)) continue;
    const double v = rho_interval(w.range, fx, fy);
    if (v > est.value) {
      est.value = v;
      est.witness = w.name;
    }
  }
  if (!dom.flags().convex) return est;

  const int size = dom.size();
  std::vector<Vec> cands;
  for (int i = 0; i < size; ++i)
    for (double s : {1.0, -1.0}) {
      Vec v(size);
      v[i] = s;
      cands.push_back(v);
    }
  cands.push_back(y - x);
  cands.push_back(x - y);
  Vec best_phi = cands.front();
  double best = 0.0;
  for (const Vec& c : cands) {
    const double v = functional_score(dom, c, x, y);
    if (v > best) {
      best = v;
      best_phi = c / c.norm();
    }
  }
  const auto objective = [&](const std::vector<double>& p) {
    return -functional_score(dom, Vec::from(p), x, y);
  };
  const MinimizeResult r = nelder_mead(objective, best_phi.to_vector(), 0.2, 1e-10, 400);
  Vec phi = best_phi;
  if (-r.value > best) {
    best = -r.value;
    phi = Vec::from(r.x);
  }
  if (best > est.value) {
    est.value = best;
    est.witness = "functional " + (phi / phi.norm()).str();
  }
  return est;
}

}  // namespace lorentz
