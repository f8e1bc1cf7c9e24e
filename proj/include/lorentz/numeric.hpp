#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace lorentz {

using Rng = std::mt19937_64;

/// Radical inverse of `index` in `base`, optionally shifted mod 1.
double halton(std::uint64_t index, int base, double shift = 0.0);
int nth_prime(int k);

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead simplex minimization (GSL nmsimplex2).
MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           std::vector<double> start, double step, double size_tol = 1e-10,
                           int max_iter = 2000);

/// Worker count: LORENTZ_METRICS_THREADS if set, else hardware concurrency.
int worker_count();

/// Calls body(i) for i in [0, n). Results must be written to per-index slots.
void parallel_for(int n, const std::function<void(int)>& body);

/// Composite Simpson rule with `panels` (even) subintervals.
double simpson(const std::function<double(double)>& f, double a, double b, int panels);

}  // namespace lorentz
