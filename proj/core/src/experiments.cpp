#include "vexp/experiments.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "vexp/bisection.hpp"
#include "vexp/errors.hpp"

namespace vexp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_abs(double v) { return v == 0.0 ? kNegInf : std::log(std::fabs(v)); }

/// Calls fn(y, weight) for a Gauss-Legendre rule on [lo, hi] split into
/// panels whose length grows geometrically with the distance from `centre`.
template <class Fn>
void geometric_panels(double centre, double lo, double hi, Fn&& fn) {
  using Rule = boost::math::quadrature::gauss<double, 10>;
  if (!(hi > lo)) return;
  auto panel = [&](double p0, double p1) {
    const double mid = 0.5 * (p0 + p1);
    const double half = 0.5 * (p1 - p0);
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] == 0.0) {
        fn(mid, half * w[k]);
      } else {
        fn(mid - half * x[k], half * w[k]);
        fn(mid + half * x[k], half * w[k]);
      }
    }
  };
  if (lo >= centre) {
    double d = lo - centre;
    double start = lo;
    while (start < hi) {
      d *= 2.0;
      const double end = std::min(hi, centre + d);
      panel(start, end);
      start = end;
    }
  } else {
    double d = centre - hi;
    double end = hi;
    while (end > lo) {
      d *= 2.0;
      const double start = std::max(lo, centre - d);
      panel(start, end);
      end = start;
    }
  }
}

}  // namespace

double bump_profile(double t) noexcept {
  const double a = std::fabs(t);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  const double u = (a - 0.5) / 0.5;
  return 1.0 - (3.0 * u * u - 2.0 * u * u * u);
}

ConcentrationFamily::ConcentrationFamily(double x0, std::vector<int> scales,
                                         const Grid1D& reference)
    : x0_(x0), scales_(std::move(scales)),
      profile_(GridFunction::sample(reference, [x0](double x) { return bump_profile(x - x0); })) {
  if (scales_.empty()) throw InvalidArgument("ConcentrationFamily: no scales");
  for (std::size_t k = 0; k < scales_.size(); ++k) {
    if (scales_[k] < 1) throw InvalidArgument("ConcentrationFamily: scales must be >= 1");
    if (k > 0 && scales_[k] <= scales_[k - 1]) {
      throw InvalidArgument("ConcentrationFamily: scales must be increasing");
    }
  }
}

SupportedFunction concentration_member(const ConcentrationFamily& family, int n,
                                       const ExponentBundle& bundle) {
  if (n < 1) throw InvalidArgument("concentration_member: n must be >= 1");
  const double x0 = family.x0();
  const double r = 1.0 / n;
  const double slack = 1e-12 * (bundle.b() - bundle.a());
  if (x0 - r < bundle.a() - slack || x0 + r > bundle.b() + slack) {
    throw InvalidArgument("concentration_member: support of phi_" + std::to_string(n) +
                          " leaves the domain");
  }
  const auto p = bundle.p;
  const auto s = bundle.s;
  const double dim = bundle.dimension;
  const double nn = n;
  SupportedFunction f;
  f.label = "phi_" + std::to_string(n);
  f.lo = std::max(bundle.a(), x0 - r);
  f.hi = std::min(bundle.b(), x0 + r);
  f.f = [p, s, dim, nn, x0](double x) {
    const double shape = bump_profile(nn * (x - x0));
    if (shape == 0.0) return 0.0;
    const double pd = p(x, x);
    return std::pow(nn, (dim - pd * s(x, x)) / pd) * shape;
  };
  return f;
}

GridFunction concentration_sequence(const ConcentrationFamily& family, int n,
                                    const ExponentBundle& bundle, const Grid1D& grid) {
  const auto m = concentration_member(family, n, bundle);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = m.f(grid.node(i));
  const bool zb = v.front() == 0.0 && v.back() == 0.0;
  return GridFunction(grid, std::move(v), zb);
}

ScalarExponentField q_field_builder(const ScalarExponentField& p_s_star, double x0, double C0,
                                    double beta, double floor) {
  if (!(C0 > 0.0)) throw InvalidArgument("q_field_builder: C0 must be positive");
  if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("q_field_builder: beta must lie in (0, 1]");
  if (!(floor < p_s_star.declared_inf())) {
    throw InvalidExponent("q_field_builder: floor " + std::to_string(floor) +
                          " is not below inf p_s^* = " + std::to_string(p_s_star.declared_inf()));
  }
  const auto ps = p_s_star.function();
  auto q = [ps, x0, C0, beta, floor](double x) {
    const double d = std::fabs(x - x0);
    if (d == 0.0) return ps(x);
    if (d >= 1.0) return floor;
    return std::max(floor, ps(x) - C0 / std::pow(-std::log(d), beta));
  };
  std::string name = "touch(x0=" + std::to_string(x0) + ",C0=" + std::to_string(C0) +
                     ",beta=" + std::to_string(beta) + ")";
  return ScalarExponentField::sampled(std::move(name), q, p_s_star.a(), p_s_star.b());
}

double lq_modular_local(const SupportedFunction& f, const ScalarExponentField& q, double lo,
                        double hi, std::size_t nodes) {
  const double L = std::max(lo, f.lo);
  const double R = std::min(hi, f.hi);
  if (!(R > L)) return 0.0;
  nodes = std::max<std::size_t>(nodes, 3);
  const double h = (R - L) / static_cast<double>(nodes - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double x = i + 1 == nodes ? R : L + h * static_cast<double>(i);
    const double w = (i == 0 || i + 1 == nodes) ? 0.5 * h : h;
    sum += w * pow_abs(f.f(x), q(x));
  }
  return sum;
}

LocalSobolevModular::LocalSobolevModular(const SupportedFunction& f, const ExponentBundle& bundle,
                                         std::size_t window_nodes) {
  if (!(f.hi > f.lo)) throw InvalidArgument("LocalSobolevModular: empty support");
  const double a = bundle.a();
  const double b = bundle.b();
  const double centre = 0.5 * (f.lo + f.hi);
  const double half = 0.5 * (f.hi - f.lo);
  const double wlo = std::max(a, centre - 2.0 * half);
  const double whi = std::min(b, centre + 2.0 * half);
  const Grid1D window(wlo, whi, std::max<std::size_t>(window_nodes, 3));
  const double dim = bundle.dimension;
  const std::size_t m = window.size();

  std::vector<double> v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = f.f(window.node(i));

  for (std::size_t i = 0; i < m; ++i) {
    const double xi = window.node(i);
    for (std::size_t j = i + 1; j < m; ++j) {
      const double d = v[i] - v[j];
      if (d == 0.0) continue;
      const double xj = window.node(j);
      const double p = bundle.p(xi, xj);
      const double s = bundle.s(xi, xj);
      const double c =
          2.0 * window.weight(i) * window.weight(j) * std::exp(-(dim + s * p) * std::log(xj - xi));
      gagliardo_terms_.push_back({c, log_abs(d), p});
    }
  }
  // Pairs with one point outside the window; f vanishes there.
  for (std::size_t i = 0; i < m; ++i) {
    if (v[i] == 0.0) continue;
    const double xi = window.node(i);
    auto add = [&](double y, double gw) {
      const double p = bundle.p(xi, y);
      const double s = bundle.s(xi, y);
      const double c = 2.0 * window.weight(i) * gw * std::exp(-(dim + s * p) * std::log(std::fabs(y - xi)));
      gagliardo_terms_.push_back({c, log_abs(v[i]), p});
    };
    geometric_panels(centre, a, wlo, add);
    geometric_panels(centre, whi, b, add);
    lp_terms_.push_back({window.weight(i), log_abs(v[i]), bundle.p(xi, xi)});
  }
}

double LocalSobolevModular::sum(const std::vector<Term>& terms, double log_lambda) {
  double s = 0.0;
  for (const auto& t : terms) {
    const double e = t.exponent * (t.log_base - log_lambda);
    if (e > 709.0) return std::numeric_limits<double>::infinity();
    s += t.coeff * std::exp(e);
  }
  return s;
}

double LocalSobolevModular::gagliardo(double lambda) const {
  return sum(gagliardo_terms_, std::log(lambda));
}

double LocalSobolevModular::lp(double lambda) const { return sum(lp_terms_, std::log(lambda)); }

double LocalSobolevModular::norm(double tol) const {
  if (gagliardo_terms_.empty() && lp_terms_.empty()) return 0.0;
  LuxemburgSearch search;
  search.tol = tol;
  return luxemburg_root([this](double lambda) { return total(lambda); }, search);
}

TailTable tail_vanishing_probe(const ExponentBundle& bundle, const ScalarExponentField& q,
                               double x0, double rho_bound, const std::vector<double>& eps_list,
                               const std::vector<SupportedFunction>& members) {
  TailTable table;
  std::vector<const SupportedFunction*> accepted;
  for (const auto& m : members) {
    const double norm = LocalSobolevModular(m, bundle).norm();
    if (norm <= rho_bound) {
      accepted.push_back(&m);
    } else {
      table.rejected.push_back(m.label);
    }
  }
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw InvalidArgument("tail_vanishing_probe: eps must be positive");
    TailRow row{eps, 0.0, {}};
    for (const auto* m : accepted) {
      const double v = lq_modular_local(*m, q, x0 - eps, x0 + eps);
      if (v > row.value || row.argmax.empty()) {
        row.value = std::max(row.value, v);
        row.argmax = m->label;
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<SupportedFunction> random_bump_members(double x0, double spread, double a, double b,
                                                   std::size_t count, std::uint64_t seed) {
  if (!(a < b)) throw InvalidArgument("random_bump_members: need a < b");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<SupportedFunction> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double width = 0.02 + 0.28 * unit(rng);
    double c = x0 + spread * (2.0 * unit(rng) - 1.0);
    const double r = std::min(width, 0.5 * (b - a));
    c = std::clamp(c, a + r, b - r);
    const double amp = 0.2 + 1.3 * unit(rng);
    SupportedFunction f;
    f.label = "bump_" + std::to_string(k);
    f.lo = c - r;
    f.hi = c + r;
    f.f = [c, r, amp](double x) { return amp * bump_profile((x - c) / r); };
    out.push_back(std::move(f));
  }
  return out;
}

AnnulusTable annulus_rate_check(const ExponentBundle& bundle, const ScalarExponentField& q,
                                double x0, double eps, int n_max, double beta,
                                const Grid1D& grid) {
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidArgument("annulus_rate_check: eps must lie in (0, 1/2)");
  if (n_max < 1) throw InvalidArgument("annulus_rate_check: n_max must be >= 1");
  const auto ps = critical_exponent_field(bundle);
  AnnulusTable table;
  for (int n = 1; n <= n_max; ++n) {
    const double r_out = std::pow(eps, n);
    const double r_in = std::pow(eps, n + 1);
    std::vector<double> points;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double d = std::fabs(grid.node(i) - x0);
      if (d > r_in && d < r_out) points.push_back(grid.node(i));
    }
    if (points.empty()) {
      throw RefineGrid("annulus_rate_check: annulus " + std::to_string(n) + " (" +
                       std::to_string(r_in) + ", " + std::to_string(r_out) +
                       ") contains no grid node");
    }
    for (double r : {r_in, r_out}) {
      for (double x : {x0 - r, x0 + r}) {
        if (x >= grid.a() && x <= grid.b()) points.push_back(x);
      }
    }
    double ps_min = std::numeric_limits<double>::infinity();
    double q_max = -std::numeric_limits<double>::infinity();
    for (double x : points) {
      ps_min = std::min(ps_min, ps(x));
      q_max = std::max(q_max, q(x));
    }
    AnnulusRow row;
    row.n = n;
    row.gap = ps_min - q_max;
    row.ratio = row.gap * std::pow(-std::log(r_in), beta);
    table.rows.push_back(row);
  }
  table.fitted_C = table.rows.front().ratio;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (auto& row : table.rows) {
    row.bound = table.fitted_C / std::pow(-std::log(std::pow(eps, row.n + 1)), beta);
    lo = std::min(lo, row.ratio);
    hi = std::max(hi, row.ratio);
  }
  table.spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return table;
}

double noncompact_bound(int dimension, double p_inf, double s_inf, double C0) {
  const double n = dimension;
  const double ball = std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
  const double shell = ball * (std::pow(0.5, n) - std::pow(0.25, n));
  return std::exp(-(n - p_inf * s_inf) / p_inf * 2.0 * C0) * shell;
}

HypothesisReport check_noncompact_hypothesis(const ScalarExponentField& q,
                                             const ScalarExponentField& p_s_star, double x0,
                                             double C0, const std::vector<double>& rho_samples) {
  HypothesisReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (double rho : rho_samples) {
    if (!(rho > 0.0 && rho < 1.0)) {
      throw InvalidArgument("check_noncompact_hypothesis: rho must lie in (0, 1)");
    }
    for (double x : {x0 - rho, x0 + rho}) {
      if (x < q.a() || x > q.b()) continue;
      const double target = p_s_star(x) - C0 / (-std::log(rho));
      const double margin = q(x) - target;
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_rho = rho;
      }
      if (margin < -1e-12 * std::max(1.0, std::fabs(target))) rep.holds = false;
    }
  }
  return rep;
}

CompactnessReport compactness_verdict(const ExponentBundle& bundle, const ScalarExponentField& q,
                                      const ConcentrationFamily& family, double C0) {
  CompactnessReport rep;
  rep.bound = noncompact_bound(bundle.dimension, bundle.p.declared_inf(), bundle.s.declared_inf(),
                               C0);
  for (int n : family.scales()) {
    const auto member = concentration_member(family, n, bundle);
    rep.rows.push_back({n, lq_modular_local(member, q, bundle.a(), bundle.b()), rep.bound});
  }
  bool monotone = true;
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    monotone = monotone && rep.rows[k].modular <= rep.rows[k - 1].modular;
  }
  const double first = rep.rows.front().modular;
  const double last = rep.rows.back().modular;
  const int median = family.scales()[family.scales().size() / 2];
  bool persists = true;
  for (const auto& row : rep.rows) {
    if (row.n >= median) persists = persists && row.modular >= 0.5 * rep.bound;
  }
  if (rep.rows.size() >= 2 && monotone && last < 0.1 * first) {
    rep.verdict = kMassEscapes;
  } else if (persists) {
    rep.verdict = kConcentrationPersists;
  } else {
    rep.verdict = kInconclusive;
  }
  return rep;
}

ScalingReport concentration_scaling(const ExponentBundle& bundle,
                                    const ConcentrationFamily& family) {
  ScalingReport rep;
  const auto p_diag = bundle.p.diagonal();
  for (int n : family.scales()) {
    const auto member = concentration_member(family, n, bundle);
    rep.scales.push_back(n);
    rep.lp_modular.push_back(lq_modular_local(member, p_diag, bundle.a(), bundle.b()));
    rep.sobolev_modular.push_back(LocalSobolevModular(member, bundle).total());
  }
  const std::size_t k = rep.scales.size();
  if (k >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const double x = std::log(static_cast<double>(rep.scales[i]));
      const double y = std::log(rep.lp_modular[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    rep.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  }
  for (std::size_t i = 1; i < k; ++i) {
    rep.increments.push_back(std::fabs(rep.sobolev_modular[i] - rep.sobolev_modular[i - 1]) /
                             rep.sobolev_modular[i]);
  }
  return rep;
}

}  // namespace vexp
