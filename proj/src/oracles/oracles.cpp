#include "lorentz/oracles.hpp"

#include <cmath>

namespace lorentz {

double delta_cone_future(const Event& a, const Event& x, const Event& y) {
  const ConeFuture c(a);
  if (!c.contains(x) || !c.contains(y)) throw DomainError("delta_cone_future: point outside I+(a)");
  if (!causally_related(x, y)) throw CausalityError("delta_cone_future: pair not causally related");
  return 2.0 * std::abs(std::log(time_separation(a, y) / time_separation(a, x)));
}

double delta_halfspace(const HalfSpaceFuture& h, const Event& x, const Event& y) {
  if (!h.contains(x) || !h.contains(y)) throw DomainError("delta_halfspace: point outside the half-space");
  if (!causally_related(x, y)) throw CausalityError("delta_halfspace: pair not causally related");
  return std::abs(std::log(h.height(y) / h.height(x)));
}

double delta_diamond_2d(const Event& a, const Event& b, const Event& x, const Event& y) {
  if (a.size() != 2) throw DimensionError("delta_diamond_2d is defined in R^{1,1}");
  const Diamond d(a, b);
  if (!d.contains(x) || !d.contains(y)) throw DomainError("delta_diamond_2d: point outside the diamond");
  if (x == y) return 0.0;
  const auto q = [](const Vec& v) { return minkowski_form(v, v); };
  if (causally_related(x, y)) {
    const auto tau = [&](const Event& p) { return q(p - a) / q(b - p); };
    return std::abs(std::log(tau(y)) - std::log(tau(x)));
  }
  const auto [e1, e2] = d.side_corners();
  return std::abs(std::log((q(x - e1) * q(y - e2)) / (q(y - e1) * q(x - e2))));
}

double cosmo_time_closed(const Domain& dom, const Event& x) {
  if (!dom.contains(x)) throw DomainError("cosmo_time_closed: point outside " + dom.name());
  const auto v = dom.cosmological_time_closed(x, TimeSign::past);
  if (!v) throw DomainError("cosmo_time_closed: no closed form for " + dom.name());
  return *v;
}

std::optional<ExactFormula> exact_formula(const Domain& dom) {
  if (const auto* c = dynamic_cast<const ConeFuture*>(&dom); c && c->eps() == 0.0) {
    const Event a = c->apex();
    return ExactFormula{"ConeFuture", [](const Event& x, const Event& y) { return causally_related(x, y); },
                        [a](const Event& x, const Event& y) { return delta_cone_future(a, x, y); }};
  }
  if (const auto* h = dynamic_cast<const HalfSpaceFuture*>(&dom)) {
    const HalfSpaceFuture hs = *h;
    return ExactFormula{"HalfSpaceFuture",
                        [](const Event& x, const Event& y) { return causally_related(x, y); },
                        [hs](const Event& x, const Event& y) { return delta_halfspace(hs, x, y); }};
  }
  if (const auto* d = dynamic_cast<const Diamond*>(&dom); d && d->eps() == 0.0 && d->size() == 2) {
    const Event a = d->a(), b = d->b();
    return ExactFormula{"Diamond", [](const Event&, const Event&) { return true; },
                        [a, b](const Event& x, const Event& y) { return delta_diamond_2d(a, b, x, y); }};
  }
  return std::nullopt;
}

}  // namespace lorentz
