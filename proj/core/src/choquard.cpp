#include "vexp/choquard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vexp/errors.hpp"
#include "vexp/nakano.hpp"
#include "vexp/parallel.hpp"

namespace vexp {

ChoquardEnergy::ChoquardEnergy(const Grid1D& grid, const ExponentBundle& bundle)
    : bundle_(bundle), pairs_(grid, bundle), r_(bundle.r.sample(grid)),
      alpha_(bundle.alpha.sample(grid)) {
  const std::size_t m = grid.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (!(r_[i] > 1.0)) throw InvalidExponent("choquard: r <= 1 at node " + std::to_string(i));
  }
  coulomb_.resize(m * (m - 1) / 2);
  for_each_row(m, [&](std::size_t i) {
    std::size_t k = pairs_.row_begin(i);
    for (std::size_t j = i + 1; j < m; ++j, ++k) {
      const double d = grid.node(j) - grid.node(i);
      coulomb_[k] =
          grid.weight(i) * grid.weight(j) * std::exp(-0.5 * (alpha_[i] + alpha_[j]) * std::log(d));
    }
  });
}

void ChoquardEnergy::check(std::span<const double> u) const {
  if (u.size() != pairs_.size()) throw InvalidArgument("choquard: value count does not match grid");
}

double ChoquardEnergy::K(std::span<const double> u) const { return terms(u).choquard_energy; }

EnergyReport ChoquardEnergy::terms(std::span<const double> u) const {
  check(u);
  const std::size_t m = pairs_.size();
  const auto p = pairs_.p();
  const auto L = pairs_.kernel();
  const auto pd = pairs_.p_diag();
  std::vector<double> P(m), half_inv_r(m);
  for (std::size_t i = 0; i < m; ++i) {
    P[i] = pow_abs(u[i], r_[i]);
    half_inv_r[i] = 0.5 / r_[i];
  }
  std::vector<double> gag(m, 0.0), chq(m, 0.0);
  for_each_row(m, [&](std::size_t i) {
    std::size_t k = pairs_.row_begin(i);
    double g = 0.0;
    double c = 0.0;
    const double ui = u[i];
    for (std::size_t j = i + 1; j < m; ++j, ++k) {
      const double d = std::fabs(ui - u[j]);
      if (d != 0.0) g += L[k] * std::exp(p[k] * std::log(d)) / p[k];
      c += coulomb_[k] * P[j] * (half_inv_r[i] + half_inv_r[j]);
    }
    gag[i] = 2.0 * g;
    chq[i] = c * P[i];
  });
  EnergyReport rep;
  for (std::size_t i = 0; i < m; ++i) {
    rep.gagliardo_energy += gag[i];
    rep.choquard_energy += chq[i];
    rep.lp_energy += pairs_.grid().weight(i) * pow_abs(u[i], pd[i]) / pd[i];
  }
  rep.total = rep.gagliardo_energy + rep.lp_energy - rep.choquard_energy;
  return rep;
}

EnergyReport ChoquardEnergy::report(std::span<const double> u) const {
  EnergyReport rep = terms(u);
  rep.gradient_sup_norm = residual(u);
  return rep;
}

std::vector<double> ChoquardEnergy::gradient(std::span<const double> u) const {
  check(u);
  const std::size_t m = pairs_.size();
  const auto p = pairs_.p();
  const auto L = pairs_.kernel();
  const auto pd = pairs_.p_diag();
  const auto& grid = pairs_.grid();
  std::vector<double> P(m), Q(m);
  for (std::size_t i = 0; i < m; ++i) {
    P[i] = pow_abs(u[i], r_[i]);
    Q[i] = P[i] * 0.5 / r_[i];
  }
  std::vector<double> out(m, 0.0);
  for_each_row(m, [&](std::size_t i) {
    if (i == 0 || i + 1 == m) return;
    double g = 0.0;
    double gp = 0.0;
    double gq = 0.0;
    const double ui = u[i];
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const std::size_t k = pairs_.index(i, j);
      g += L[k] * signed_power(ui - u[j], p[k]);
      gp += coulomb_[k] * P[j];
      gq += coulomb_[k] * Q[j];
    }
    const double dP = r_[i] * signed_power(ui, r_[i]);
    out[i] = 2.0 * g + grid.weight(i) * signed_power(ui, pd[i]) - dP * (gp * 0.5 / r_[i] + gq);
  });
  return out;
}

double ChoquardEnergy::directional_derivative(std::span<const double> u,
                                              std::span<const double> v_in) const {
  check(u);
  check(v_in);
  const std::size_t m = pairs_.size();
  std::vector<double> v(v_in.begin(), v_in.end());
  v.front() = v.back() = 0.0;
  const auto p = pairs_.p();
  const auto L = pairs_.kernel();
  const auto pd = pairs_.p_diag();
  std::vector<double> P(m), dPv(m), half_inv_r(m);
  for (std::size_t i = 0; i < m; ++i) {
    P[i] = pow_abs(u[i], r_[i]);
    dPv[i] = r_[i] * signed_power(u[i], r_[i]) * v[i];
    half_inv_r[i] = 0.5 / r_[i];
  }
  std::vector<double> rows(m, 0.0);
  for_each_row(m, [&](std::size_t i) {
    std::size_t k = pairs_.row_begin(i);
    double g = 0.0;
    double c = 0.0;
    for (std::size_t j = i + 1; j < m; ++j, ++k) {
      g += L[k] * signed_power(u[i] - u[j], p[k]) * (v[i] - v[j]);
      c += coulomb_[k] * (dPv[i] * P[j] + P[i] * dPv[j]) * (half_inv_r[i] + half_inv_r[j]);
    }
    rows[i] = 2.0 * g - c + pairs_.grid().weight(i) * signed_power(u[i], pd[i]) * v[i];
  });
  double sum = 0.0;
  for (double r : rows) sum += r;
  return sum;
}

double ChoquardEnergy::K_derivative(std::span<const double> u, std::span<const double> v) const {
  check(u);
  check(v);
  const std::size_t m = pairs_.size();
  std::vector<double> P(m), dPv(m), half_inv_r(m);
  for (std::size_t i = 0; i < m; ++i) {
    P[i] = pow_abs(u[i], r_[i]);
    dPv[i] = r_[i] * signed_power(u[i], r_[i]) * v[i];
    half_inv_r[i] = 0.5 / r_[i];
  }
  std::vector<double> rows(m, 0.0);
  for_each_row(m, [&](std::size_t i) {
    std::size_t k = pairs_.row_begin(i);
    double c = 0.0;
    for (std::size_t j = i + 1; j < m; ++j, ++k) {
      c += coulomb_[k] * (dPv[i] * P[j] + P[i] * dPv[j]) * (half_inv_r[i] + half_inv_r[j]);
    }
    rows[i] = c;
  });
  double sum = 0.0;
  for (double r : rows) sum += r;
  return sum;
}

double ChoquardEnergy::residual(std::span<const double> u) const {
  const auto g = gradient(u);
  double sup = 0.0;
  for (double v : g) sup = std::max(sup, std::fabs(v));
  return sup;
}

HlsBound ChoquardEnergy::hls_bound(std::span<const double> u) const {
  check(u);
  const std::size_t m = pairs_.size();
  std::vector<double> P(m);
  for (std::size_t i = 0; i < m; ++i) P[i] = pow_abs(u[i], r_[i]);
  std::vector<double> rows(m, 0.0);
  for_each_row(m, [&](std::size_t i) {
    std::size_t k = pairs_.row_begin(i);
    double c = 0.0;
    for (std::size_t j = i + 1; j < m; ++j, ++k) c += coulomb_[k] * P[j];
    rows[i] = 2.0 * c * P[i];
  });
  HlsBound h;
  for (double r : rows) h.lhs += r;

  double sig_lo = std::numeric_limits<double>::infinity(), sig_hi = 0.0;
  for (double a : alpha_) {
    const double sg = sigma_alpha(a, bundle_.dimension);
    sig_lo = std::min(sig_lo, sg);
    sig_hi = std::max(sig_hi, sg);
  }
  const auto [r_lo, r_hi] = std::minmax_element(r_.begin(), r_.end());
  std::vector<double> e_lo(m), e_hi(m);
  for (std::size_t i = 0; i < m; ++i) {
    e_lo[i] = r_[i] * sig_lo;
    e_hi[i] = r_[i] * sig_hi;
  }
  const double n_lo = luxemburg_nodes(pairs_.grid(), u, e_lo);
  const double n_hi = luxemburg_nodes(pairs_.grid(), u, e_hi);
  h.rhs = std::max({std::pow(n_lo, 2.0 * *r_hi), std::pow(n_lo, 2.0 * *r_lo),
                    std::pow(n_hi, 2.0 * *r_hi), std::pow(n_hi, 2.0 * *r_lo)});
  h.ratio = h.rhs > 0.0 ? h.lhs / h.rhs : 0.0;
  return h;
}

double choquard_K(const GridFunction& u, const ExponentBundle& bundle) {
  return ChoquardEnergy(u.grid(), bundle).K(u.values());
}

double choquard_K_derivative(const GridFunction& u, const GridFunction& v,
                             const ExponentBundle& bundle) {
  if (!(u.grid() == v.grid())) throw InvalidArgument("choquard_K_derivative: grids differ");
  return ChoquardEnergy(u.grid(), bundle).K_derivative(u.values(), v.values());
}

HlsBound hls_bound_check(const GridFunction& u, const ExponentBundle& bundle) {
  return ChoquardEnergy(u.grid(), bundle).hls_bound(u.values());
}

EnergyReport energy_I(const GridFunction& u, const ExponentBundle& bundle) {
  return ChoquardEnergy(u.grid(), bundle).report(u.values());
}

GridFunction energy_gradient(const GridFunction& u, const ExponentBundle& bundle) {
  return GridFunction(u.grid(), ChoquardEnergy(u.grid(), bundle).gradient(u.values()), true);
}

double residual(const GridFunction& u, const ExponentBundle& bundle) {
  return ChoquardEnergy(u.grid(), bundle).residual(u.values());
}

}  // namespace vexp
