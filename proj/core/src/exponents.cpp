#include "vexp/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vexp/errors.hpp"

namespace vexp {

namespace {

void check_domain(double a, double b) {
  if (!(a < b)) throw InvalidArgument("exponent field: need a < b");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

ScalarExponentField::ScalarExponentField(std::string name, Function f, double a, double b,
                                         double declared_inf, double declared_sup)
    : name_(std::move(name)), f_(std::move(f)), a_(a), b_(b), inf_(declared_inf),
      sup_(declared_sup) {
  check_domain(a, b);
  if (!f_) throw InvalidArgument("exponent field '" + name_ + "': empty function");
  if (!(declared_inf <= declared_sup)) {
    throw InvalidArgument("exponent field '" + name_ + "': declared_inf > declared_sup");
  }
}

ScalarExponentField ScalarExponentField::constant(double value, double a, double b) {
  return ScalarExponentField("constant(" + fmt(value) + ")", [value](double) { return value; }, a,
                             b, value, value);
}

ScalarExponentField ScalarExponentField::affine(double c0, double c1, double a, double b) {
  const double fa = c0 + c1 * a;
  const double fb = c0 + c1 * b;
  return ScalarExponentField("affine(" + fmt(c0) + "," + fmt(c1) + ")",
                             [c0, c1](double x) { return c0 + c1 * x; }, a, b, std::min(fa, fb),
                             std::max(fa, fb));
}

ScalarExponentField ScalarExponentField::sampled(std::string name, Function f, double a, double b,
                                                 std::size_t samples) {
  check_domain(a, b);
  samples = std::max<std::size_t>(samples, 2);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = i + 1 == samples
                         ? b
                         : a + (b - a) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double v = f(x);
    if (!std::isfinite(v)) {
      throw InvalidExponent("exponent field '" + name + "' is not finite at x=" + fmt(x));
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return ScalarExponentField(std::move(name), std::move(f), a, b, lo, hi);
}

std::vector<double> ScalarExponentField::sample(const Grid1D& grid) const {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f_(grid.node(i));
  return out;
}

SymmetricExponentField::SymmetricExponentField(std::string name, Function f, double a, double b,
                                               double declared_inf, double declared_sup)
    : name_(std::move(name)), f_(std::move(f)), a_(a), b_(b), inf_(declared_inf),
      sup_(declared_sup) {
  check_domain(a, b);
  if (!f_) throw InvalidArgument("exponent field '" + name_ + "': empty function");
  if (!(declared_inf <= declared_sup)) {
    throw InvalidArgument("exponent field '" + name_ + "': declared_inf > declared_sup");
  }
}

SymmetricExponentField SymmetricExponentField::constant(double value, double a, double b) {
  return SymmetricExponentField("constant(" + fmt(value) + ")",
                                [value](double, double) { return value; }, a, b, value, value);
}

SymmetricExponentField SymmetricExponentField::sampled(std::string name, Function f, double a,
                                                       double b, std::size_t samples_per_axis) {
  check_domain(a, b);
  const std::size_t n = std::max<std::size_t>(samples_per_axis, 2);
  auto at = [&](std::size_t i) {
    return i + 1 == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double x = at(i);
      const double y = at(j);
      const double v = 0.5 * (f(x, y) + f(y, x));
      if (!std::isfinite(v)) {
        throw InvalidExponent("exponent field '" + name + "' is not finite at (" + fmt(x) + ", " +
                              fmt(y) + ")");
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return SymmetricExponentField(std::move(name), std::move(f), a, b, lo, hi);
}

ScalarExponentField SymmetricExponentField::diagonal() const {
  Function f = f_;
  return ScalarExponentField::sampled(
      name_ + "|diag", [f](double x) { return f(x, x); }, a_, b_);
}

double critical_exponent(double p_diag, double s_diag, int dimension) {
  const double n = static_cast<double>(dimension);
  const double denom = n - p_diag * s_diag;
  if (!(denom > 0.0)) {
    throw InvalidExponent("critical exponent: N - p s = " + fmt(denom) + " is not positive");
  }
  return n * p_diag / denom;
}

double critical_exponent(const ExponentBundle& bundle, double x) {
  return critical_exponent(bundle.p(x, x), bundle.s(x, x), bundle.dimension);
}

double sigma_alpha(double alpha_x, int dimension) {
  const double n = static_cast<double>(dimension);
  if (!(alpha_x > 0.0 && alpha_x < n)) {
    throw InvalidExponent("sigma_alpha: alpha = " + fmt(alpha_x) + " outside (0, N)");
  }
  return 2.0 * n / (2.0 * n - alpha_x);
}

double sigma_alpha(const ScalarExponentField& alpha, double x, int dimension) {
  return sigma_alpha(alpha(x), dimension);
}

ScalarExponentField critical_exponent_field(const ExponentBundle& bundle) {
  const auto p = bundle.p;
  const auto s = bundle.s;
  const int n = bundle.dimension;
  return ScalarExponentField::sampled(
      "p_s*", [p, s, n](double x) { return critical_exponent(p(x, x), s(x, x), n); }, bundle.a(),
      bundle.b());
}

ScalarExponentField hls_upper_field(const ExponentBundle& bundle) {
  const auto p = bundle.p;
  const auto s = bundle.s;
  const int n = bundle.dimension;
  const double factor = 1.0 - bundle.alpha.declared_sup() / (2.0 * n);
  return ScalarExponentField::sampled(
      "hls_upper",
      [p, s, n, factor](double x) { return factor * critical_exponent(p(x, x), s(x, x), n); },
      bundle.a(), bundle.b());
}

ScalarExponentField hls_lower_field(const ExponentBundle& bundle) {
  const auto p = bundle.p;
  const double factor = 1.0 - bundle.alpha.declared_inf() / (2.0 * bundle.dimension);
  return ScalarExponentField::sampled(
      "hls_lower", [p, factor](double x) { return factor * p(x, x); }, bundle.a(), bundle.b());
}

ScalarExponentField band_fraction_field(const ExponentBundle& bundle, double theta) {
  const auto p = bundle.p;
  const auto s = bundle.s;
  const int n = bundle.dimension;
  const double lower = 1.0 - bundle.alpha.declared_inf() / (2.0 * n);
  const double upper = 1.0 - bundle.alpha.declared_sup() / (2.0 * n);
  return ScalarExponentField::sampled(
      "band_fraction(" + fmt(theta) + ")",
      [=](double x) {
        const double pd = p(x, x);
        const double lo = lower * pd;
        const double hi = upper * critical_exponent(pd, s(x, x), n);
        return (1.0 - theta) * lo + theta * hi;
      },
      bundle.a(), bundle.b());
}

double check_hls_identity(const ScalarExponentField& alpha, int dimension,
                          const std::vector<std::pair<double, double>>& pairs,
                          const std::function<double(double)>& sigma) {
  const double n = static_cast<double>(dimension);
  auto sig = [&](double x) { return sigma ? sigma(x) : sigma_alpha(alpha(x), dimension); };
  double worst = 0.0;
  for (const auto& [x, y] : pairs) {
    const double lhs = 1.0 / sig(x) + (alpha(x) + alpha(y)) / (2.0 * n) + 1.0 / sig(y);
    worst = std::max(worst, std::fabs(lhs - 2.0));
  }
  return worst;
}

RRangeReport validate_r_range(const ExponentBundle& bundle, const Grid1D& grid) {
  const double n = static_cast<double>(bundle.dimension);
  const double lower = 1.0 - bundle.alpha.declared_inf() / (2.0 * n);
  const double upper = 1.0 - bundle.alpha.declared_sup() / (2.0 * n);
  RRangeReport report;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    const double pd = bundle.p(x, x);
    const double lo = lower * pd;
    const double hi = upper * critical_exponent(pd, bundle.s(x, x), bundle.dimension);
    const double r = bundle.r(x);
    const double slack_lo = 1e-12 * std::fabs(lo);
    const double slack_hi = 1e-12 * std::fabs(hi);
    double violation = 0.0;
    if (r < lo - slack_lo) violation = lo - r;
    if (r > hi + slack_hi) violation = r - hi;
    if (!std::isfinite(r)) violation = std::numeric_limits<double>::infinity();
    if (violation > 0.0) {
      report.ok = false;
      if (violation > report.worst_violation) {
        report.worst_violation = violation;
        report.worst_node = i;
        report.worst_x = x;
      }
    }
  }
  return report;
}

double log_holder_constant(const ScalarExponentField& f, const Grid1D& grid) {
  const auto v = f.sample(grid);
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const double d = grid.node(j) - grid.node(i);
      if (d >= 0.5) break;
      best = std::max(best, std::fabs(v[i] - v[j]) * std::log(1.0 / d));
    }
  }
  return best;
}

double log_holder_constant(const SymmetricExponentField& f, const Grid1D& grid,
                           std::size_t max_axis_nodes) {
  // Sub-sample the node set with a fixed stride.
  const std::size_t m = grid.size();
  const std::size_t stride = std::max<std::size_t>(1, (m - 1 + max_axis_nodes - 2) /
                                                          std::max<std::size_t>(1, max_axis_nodes - 1));
  std::vector<double> xs;
  for (std::size_t i = 0; i < m; i += stride) xs.push_back(grid.node(i));
  if (xs.back() != grid.node(m - 1)) xs.push_back(grid.node(m - 1));

  struct Point {
    double x, y, v;
  };
  std::vector<Point> pts;
  pts.reserve(xs.size() * xs.size());
  for (double x : xs) {
    for (double y : xs) pts.push_back({x, y, f(x, y)});
  }
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
      if (d >= 0.5 || d == 0.0) continue;
      best = std::max(best, std::fabs(pts[i].v - pts[j].v) * std::log(1.0 / d));
    }
  }
  return best;
}

TouchingRateReport check_touching_rate(const ScalarExponentField& r,
                                       const ScalarExponentField& critical, double x0,
                                       double beta, double C0, double eta,
                                       const std::vector<double>& rho_samples) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw InvalidArgument("touching rate: eta must lie in (0, 1) so that log(rho) < 0");
  }
  if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("touching rate: beta must lie in (0, 1]");
  if (!(C0 > 0.0)) throw InvalidArgument("touching rate: C0 must be positive");
  TouchingRateReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (double rho : rho_samples) {
    if (!(rho > 0.0 && rho < eta)) {
      throw InvalidArgument("touching rate: rho sample " + fmt(rho) + " outside (0, eta)");
    }
    double r_max = -std::numeric_limits<double>::infinity();
    double c_min = std::numeric_limits<double>::infinity();
    for (double x : {x0 - rho, x0 + rho}) {
      if (x < r.a() || x > r.b()) continue;
      r_max = std::max(r_max, r(x));
      c_min = std::min(c_min, critical(x));
    }
    if (!std::isfinite(r_max)) continue;
    const double margin = c_min - C0 / std::pow(-std::log(rho), beta) - r_max;
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.worst_rho = rho;
    }
    // Equality is admitted up to rounding.
    if (margin < -1e-12 * std::max(1.0, c_min)) report.holds = false;
  }
  return report;
}

TouchingRateReport check_tr_condition(const ExponentBundle& bundle, double x0, double beta,
                                      double C0, double eta,
                                      const std::vector<double>& rho_samples) {
  return check_touching_rate(bundle.r, hls_upper_field(bundle), x0, beta, C0, eta, rho_samples);
}

std::vector<double> log_spaced(double rho_min, double rho_max, std::size_t count) {
  if (!(rho_min > 0.0 && rho_min <= rho_max) || count == 0) {
    throw InvalidArgument("log_spaced: need 0 < rho_min <= rho_max and count > 0");
  }
  std::vector<double> out(count);
  const double l0 = std::log(rho_min);
  const double l1 = std::log(rho_max);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = std::exp(l0 + t * (l1 - l0));
  }
  return out;
}

std::vector<NamedCheck> validate_bundle(const ExponentBundle& bundle, const Grid1D& grid) {
  std::vector<NamedCheck> checks;
  const std::size_t m = grid.size();
  const double n = static_cast<double>(bundle.dimension);

  double p_lo = std::numeric_limits<double>::infinity(), p_hi = -p_lo;
  double s_lo = p_lo, s_hi = -p_lo;
  bool finite = true;
  bool symmetric = true;
  bool p_declared = true, s_declared = true;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = grid.node(i);
    for (std::size_t j = 0; j < m; ++j) {
      const double y = grid.node(j);
      const double pv = bundle.p(x, y);
      const double sv = bundle.s(x, y);
      finite = finite && std::isfinite(pv) && std::isfinite(sv);
      if (j > i) symmetric = symmetric && pv == bundle.p(y, x) && sv == bundle.s(y, x);
      p_lo = std::min(p_lo, pv);
      p_hi = std::max(p_hi, pv);
      s_lo = std::min(s_lo, sv);
      s_hi = std::max(s_hi, sv);
      const double tp = 1e-12 * std::max(1.0, std::fabs(pv));
      const double ts = 1e-12 * std::max(1.0, std::fabs(sv));
      p_declared = p_declared && pv >= bundle.p.declared_inf() - tp &&
                   pv <= bundle.p.declared_sup() + tp;
      s_declared = s_declared && sv >= bundle.s.declared_inf() - ts &&
                   sv <= bundle.s.declared_sup() + ts;
    }
  }
  const auto alpha = bundle.alpha.sample(grid);
  const auto r = bundle.r.sample(grid);
  const auto [a_lo_it, a_hi_it] = std::minmax_element(alpha.begin(), alpha.end());
  const double a_lo = *a_lo_it, a_hi = *a_hi_it;
  bool alpha_declared = true, r_declared = true;
  for (std::size_t i = 0; i < m; ++i) {
    finite = finite && std::isfinite(alpha[i]) && std::isfinite(r[i]);
    const double ta = 1e-12 * std::max(1.0, std::fabs(alpha[i]));
    const double tr = 1e-12 * std::max(1.0, std::fabs(r[i]));
    alpha_declared = alpha_declared && alpha[i] >= bundle.alpha.declared_inf() - ta &&
                     alpha[i] <= bundle.alpha.declared_sup() + ta;
    r_declared = r_declared && r[i] >= bundle.r.declared_inf() - tr &&
                 r[i] <= bundle.r.declared_sup() + tr;
  }

  checks.push_back({"finite", finite, "all exponent samples finite"});
  checks.push_back({"symmetry", symmetric, "p(x,y) == p(y,x) and s(x,y) == s(y,x) on node pairs"});
  checks.push_back({"declared_bounds",
                    p_declared && s_declared && alpha_declared && r_declared,
                    "node samples inside the declared [inf, sup] of p, s, alpha, r"});
  checks.push_back({"s_range", s_lo > 0.0 && s_hi < 1.0,
                    "0 < s^- = " + fmt(s_lo) + " <= s^+ = " + fmt(s_hi) + " < 1"});
  checks.push_back({"p_range", p_lo > 1.0 && p_hi < n / s_hi,
                    "1 < p^- = " + fmt(p_lo) + " <= p^+ = " + fmt(p_hi) + " < N/s^+ = " +
                        fmt(n / s_hi)});
  checks.push_back({"alpha_range", a_lo > 0.0 && a_hi < n,
                    "0 < alpha^- = " + fmt(a_lo) + " <= alpha^+ = " + fmt(a_hi) + " < N"});

  // Sampled diagonal local-minimum property (hypothesis of the critical
  // continuous embedding). A finite sample cannot certify it; reported only.
  bool diag_min = true;
  const std::size_t reach = std::min<std::size_t>(3, m - 1);
  for (std::size_t i = 0; i < m && diag_min; ++i) {
    const double x = grid.node(i);
    const double p0 = bundle.p(x, x);
    const double s0 = bundle.s(x, x);
    for (std::size_t di = 0; di <= 2 * reach && diag_min; ++di) {
      for (std::size_t dj = 0; dj <= 2 * reach; ++dj) {
        const auto ii = static_cast<std::ptrdiff_t>(i + di) - static_cast<std::ptrdiff_t>(reach);
        const auto jj = static_cast<std::ptrdiff_t>(i + dj) - static_cast<std::ptrdiff_t>(reach);
        if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(m) ||
            jj >= static_cast<std::ptrdiff_t>(m)) {
          continue;
        }
        const double u = grid.node(static_cast<std::size_t>(ii));
        const double v = grid.node(static_cast<std::size_t>(jj));
        if (bundle.p(u, v) < p0 - 1e-14 || bundle.s(u, v) < s0 - 1e-14) {
          diag_min = false;
          break;
        }
      }
    }
  }
  checks.push_back({"diagonal_local_minimum", diag_min,
                    "diagonal points are sampled local minima of p and s", false});
  return checks;
}

}  // namespace vexp
