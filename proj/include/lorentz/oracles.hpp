#pragma once

#include <functional>
#include <string>

#include "lorentz/domains.hpp"

namespace lorentz {

/// 2|ln(T(a,y)/T(a,x))| on I+(a) for causally related x, y.
double delta_cone_future(const Event& a, const Event& x, const Event& y);

/// |ln(h(y)/h(x))| with h the Lorentzian height over the hyperplane, for causal pairs.
double delta_halfspace(const HalfSpaceFuture& h, const Event& x, const Event& y);

/// Markowitz distance of the diamond I(a,b) in R^{1,1}, any pair.
double delta_diamond_2d(const Event& a, const Event& b, const Event& x, const Event& y);

/// Closed-form past cosmological time; throws when the variant has none.
double cosmo_time_closed(const Domain& dom, const Event& x);

struct ExactFormula {
  std::string variant;
  std::function<bool(const Event&, const Event&)> applicable;
  std::function<double(const Event&, const Event&)> evaluate;
};

/// Closed form attached to `dom`, if its variant has one.
std::optional<ExactFormula> exact_formula(const Domain& dom);

}  // namespace lorentz
