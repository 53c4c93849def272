#pragma once

#include <cstddef>
#include <functional>

namespace vexp {

struct LuxemburgSearch {
  double tol = 1e-10;            ///< accepted |modular(lambda) - 1|
  std::size_t max_steps = 200;   ///< step cap
  double lo = 1e-12;             ///< initial bracket, widened geometrically
  double hi = 1e12;
  std::size_t max_expansions = 40;
};

/// Finds lambda > 0 with modular(lambda) = 1 for a continuous map that is
/// strictly decreasing in lambda (as lambda -> rho(u / lambda) is for u != 0).
/// The search keeps a bracket on log(lambda) and shrinks it by regula falsi
/// steps on log(modular), falling back to bisection whenever a step does not
/// halve the bracket. A value of +inf from `modular` counts as "above 1" so
/// saturated evaluations stay usable.
double luxemburg_root(const std::function<double(double)>& modular,
                      const LuxemburgSearch& search = {});

/// exp(p log|v|) with |0|^p = 0; returns +inf instead of overflowing.
double pow_abs(double v, double p) noexcept;

}  // namespace vexp
