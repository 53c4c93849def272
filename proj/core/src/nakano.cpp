#include "vexp/nakano.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vexp/errors.hpp"

namespace vexp {

namespace {

void check_sizes(const Grid1D& grid, std::span<const double> u, std::span<const double> q) {
  if (u.size() != grid.size() || q.size() != grid.size()) {
    throw InvalidArgument("modular: value/exponent count does not match the grid");
  }
}

/// Saturating sum used inside the bisection: +inf instead of an error.
double modular_saturating(const Grid1D& grid, std::span<const double> log_abs,
                          std::span<const double> q, double log_lambda) {
  double sum = 0.0;
  for (std::size_t i = 0; i < log_abs.size(); ++i) {
    if (log_abs[i] == -std::numeric_limits<double>::infinity()) continue;
    const double e = q[i] * (log_abs[i] - log_lambda);
    if (e > 709.0) return std::numeric_limits<double>::infinity();
    sum += grid.weight(i) * std::exp(e);
  }
  return sum;
}

std::vector<double> check_exponent_above_one(const ScalarExponentField& p, const Grid1D& grid,
                                             const char* who) {
  auto v = p.sample(grid);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 1.0)) {
      throw InvalidExponent(std::string(who) + ": exponent " + std::to_string(v[i]) +
                            " <= 1 at node " + std::to_string(i));
    }
  }
  return v;
}

Clause sign_clause(double norm, double modular, double slack_tol) {
  const double a = norm - 1.0;
  const double b = modular - 1.0;
  Clause c{"sign", true, true, 0.0};
  if ((a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0) || (a == 0.0 && b == 0.0)) {
    c.slack = std::min(std::fabs(a), std::fabs(b));
  } else {
    c.slack = -std::max(std::fabs(a), std::fabs(b));
  }
  c.pass = c.slack >= -slack_tol;
  return c;
}

/// lower <= value <= upper, margin relative to max(value, tiny).
Clause sandwich(std::string name, bool applicable, double lower, double value, double upper,
                double slack_tol) {
  Clause c{std::move(name), applicable, true, 0.0};
  if (!applicable) return c;
  const double scale = std::max(std::fabs(value), std::numeric_limits<double>::min());
  c.slack = std::min(value - lower, upper - value) / scale;
  c.pass = c.slack >= -slack_tol;
  return c;
}

}  // namespace

double modular_nodes(const Grid1D& grid, std::span<const double> u, std::span<const double> q,
                     double lambda) {
  check_sizes(grid, u, q);
  if (!(lambda > 0.0)) throw InvalidArgument("modular: lambda must be positive");
  const double log_lambda = std::log(lambda);
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::fabs(u[i]);
    if (a == 0.0) continue;
    const double e = q[i] * (std::log(a) - log_lambda);
    if (!(e <= 709.0)) {
      throw OutOfRange("modular: |u/lambda|^q overflows at node " + std::to_string(i), i);
    }
    sum += grid.weight(i) * std::exp(e);
  }
  if (!std::isfinite(sum)) throw OutOfRange("modular: sum overflows", u.size() - 1);
  return sum;
}

double luxemburg_nodes(const Grid1D& grid, std::span<const double> u, std::span<const double> q,
                       const LuxemburgSearch& search) {
  check_sizes(grid, u, q);
  std::vector<double> log_abs(u.size());
  bool zero = true;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::fabs(u[i]);
    log_abs[i] = a == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(a);
    // Zero-weight nodes never contribute.
    if (a != 0.0 && grid.weight(i) > 0.0) zero = false;
  }
  if (zero) return 0.0;
  return luxemburg_root(
      [&](double lambda) { return modular_saturating(grid, log_abs, q, std::log(lambda)); },
      search);
}

ModularValue modular_lp(const GridFunction& u, const ScalarExponentField& p, double lambda) {
  const auto q = check_exponent_above_one(p, u.grid(), "modular_lp");
  const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
  return {modular_nodes(u.grid(), u.values(), q, lambda), *lo, *hi};
}

double luxemburg_norm(const GridFunction& u, const ScalarExponentField& p, double tol) {
  const auto q = check_exponent_above_one(p, u.grid(), "luxemburg_norm");
  LuxemburgSearch search;
  search.tol = tol;
  return luxemburg_nodes(u.grid(), u.values(), q, search);
}

ScalarExponentField conjugate_exponent(const ScalarExponentField& p) {
  if (!(p.declared_inf() > 1.0)) {
    throw InvalidExponent("conjugate_exponent: p^- = " + std::to_string(p.declared_inf()) +
                          " <= 1");
  }
  const auto f = p.function();
  const double lo = p.declared_sup() / (p.declared_sup() - 1.0);
  const double hi = p.declared_inf() / (p.declared_inf() - 1.0);
  return ScalarExponentField(p.name() + "'", [f](double x) {
    const double v = f(x);
    return v / (v - 1.0);
  }, p.a(), p.b(), lo, hi);
}

ScalarExponentField conjugate_exponent(const ScalarExponentField& p, const Grid1D& grid) {
  check_exponent_above_one(p, grid, "conjugate_exponent");
  return conjugate_exponent(p);
}

bool NormModularReport::all_pass() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.pass; });
}

NormModularReport check_norm_modular(const GridFunction& u, const ScalarExponentField& p,
                                     double tol, double slack) {
  const auto q = check_exponent_above_one(p, u.grid(), "check_norm_modular");
  NormModularReport r;
  const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
  r.p_inf = *lo;
  r.p_sup = *hi;
  LuxemburgSearch search;
  search.tol = tol;
  r.norm = luxemburg_nodes(u.grid(), u.values(), q, search);
  r.modular = modular_nodes(u.grid(), u.values(), q);
  r.clauses.push_back(sign_clause(r.norm, r.modular, slack));
  r.clauses.push_back(sandwich("norm>=1", r.norm >= 1.0, std::pow(r.norm, r.p_inf), r.modular,
                               std::pow(r.norm, r.p_sup), slack));
  r.clauses.push_back(sandwich("norm<=1", r.norm <= 1.0, std::pow(r.norm, r.p_sup), r.modular,
                               std::pow(r.norm, r.p_inf), slack));
  return r;
}

HolderPairing holder_pairing(const GridFunction& u, const GridFunction& v,
                             const ScalarExponentField& p, double tol) {
  if (!(u.grid() == v.grid())) throw InvalidArgument("holder_pairing: grids differ");
  const auto& grid = u.grid();
  const auto q = check_exponent_above_one(p, grid, "holder_pairing");
  std::vector<double> qc(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) qc[i] = q[i] / (q[i] - 1.0);
  const double p_inf = *std::min_element(q.begin(), q.end());
  const double pc_inf = *std::min_element(qc.begin(), qc.end());

  LuxemburgSearch search;
  search.tol = tol;
  HolderPairing h;
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) s += grid.weight(i) * u[i] * v[i];
  h.lhs = std::fabs(s);
  h.norm_u = luxemburg_nodes(grid, u.values(), q, search);
  h.norm_v = luxemburg_nodes(grid, v.values(), qc, search);
  h.rhs_sharp = (1.0 / p_inf + 1.0 / pc_inf) * h.norm_u * h.norm_v;
  h.rhs_factor2 = 2.0 * h.norm_u * h.norm_v;
  return h;
}

bool PowerNormReport::all_pass() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.pass; });
}

PowerNormReport power_norm_relation(const GridFunction& u, const ScalarExponentField& p,
                                    const ScalarExponentField& q, double tol, double slack) {
  const auto& grid = u.grid();
  const auto pv = p.sample(grid);
  const auto qv = q.sample(grid);
  std::vector<double> pq(pv.size());
  std::vector<double> powered(pv.size());
  for (std::size_t i = 0; i < pv.size(); ++i) {
    if (!(qv[i] > 0.0)) {
      throw InvalidExponent("power_norm_relation: q <= 0 at node " + std::to_string(i));
    }
    pq[i] = pv[i] * qv[i];
    if (!(pq[i] > 1.0) || !(pv[i] > 1.0)) {
      throw InvalidExponent("power_norm_relation: p q or p <= 1 at node " + std::to_string(i));
    }
    powered[i] = pow_abs(u[i], qv[i]);
  }
  LuxemburgSearch search;
  search.tol = tol;
  PowerNormReport r;
  const auto [lo, hi] = std::minmax_element(qv.begin(), qv.end());
  r.q_inf = *lo;
  r.q_sup = *hi;
  r.norm_pq = luxemburg_nodes(grid, u.values(), pq, search);
  r.norm_power = luxemburg_nodes(grid, powered, pv, search);
  r.clauses.push_back(sandwich("norm_pq>=1", r.norm_pq >= 1.0, std::pow(r.norm_pq, r.q_inf),
                               r.norm_power, std::pow(r.norm_pq, r.q_sup), slack));
  r.clauses.push_back(sandwich("norm_pq<=1", r.norm_pq <= 1.0, std::pow(r.norm_pq, r.q_sup),
                               r.norm_power, std::pow(r.norm_pq, r.q_inf), slack));
  return r;
}

}  // namespace vexp
