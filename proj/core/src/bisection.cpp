#include "vexp/bisection.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vexp/errors.hpp"

namespace vexp {

double pow_abs(double v, double p) noexcept {
  const double a = std::fabs(v);
  if (a == 0.0) return 0.0;
  const double e = p * std::log(a);
  if (e > 709.0) return std::numeric_limits<double>::infinity();
  return std::exp(e);
}

double luxemburg_root(const std::function<double(double)>& modular, const LuxemburgSearch& search) {
  if (!(search.tol > 0.0)) throw InvalidArgument("luxemburg_root: tol must be positive");
  double lo = search.lo;
  double hi = search.hi;
  double f_lo = modular(lo);
  double f_hi = modular(hi);

  std::size_t grow = 0;
  while (f_lo < 1.0) {
    if (++grow > search.max_expansions) {
      throw BracketError("luxemburg_root: modular stays below 1 down to lambda=" +
                         std::to_string(lo));
    }
    hi = lo;
    f_hi = f_lo;
    lo *= 1e-6;
    f_lo = modular(lo);
  }
  grow = 0;
  while (f_hi > 1.0) {
    if (++grow > search.max_expansions) {
      throw BracketError("luxemburg_root: modular stays above 1 up to lambda=" +
                         std::to_string(hi));
    }
    lo = hi;
    f_lo = f_hi;
    hi *= 1e6;
    f_hi = modular(hi);
  }
  if (std::isnan(f_lo) || std::isnan(f_hi)) throw BracketError("luxemburg_root: NaN modular");
  if (std::fabs(f_lo - 1.0) <= search.tol) return lo;
  if (std::fabs(f_hi - 1.0) <= search.tol) return hi;

  // Bracketed regula falsi (Illinois variant) on (log lambda, log modular),
  // which is close to linear; a plain bisection step is taken whenever an
  // end value is infinite or the bracket fails to halve.
  double a = std::log(lo);
  double b = std::log(hi);
  double fa = std::log(f_lo);
  double fb = std::log(f_hi);
  double best = hi;
  double best_gap = std::fabs(f_hi - 1.0);
  int side = 0;
  bool bisect = false;
  for (std::size_t step = 0; step < search.max_steps; ++step) {
    double c = 0.5 * (a + b);
    const double width = b - a;
    if (!bisect && std::isfinite(fa) && std::isfinite(fb) && fa > fb) {
      const double t = b - fb * (b - a) / (fb - fa);
      if (t > a && t < b) c = t;
    }
    const double mid = std::exp(c);
    const double f = modular(mid);
    if (std::isnan(f)) throw BracketError("luxemburg_root: NaN modular");
    const double gap = std::fabs(f - 1.0);
    if (gap < best_gap) {
      best = mid;
      best_gap = gap;
    }
    if (gap <= search.tol) return mid;
    const double fc = std::log(f);
    if (f > 1.0) {
      a = c;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    } else {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    }
    bisect = (b - a) > 0.5 * width;
    if (std::nextafter(std::exp(a), std::exp(b)) >= std::exp(b)) break;
  }
  return best;
}

}  // namespace vexp
