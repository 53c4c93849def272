#include "vexp/sobolev.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vexp/errors.hpp"
#include "vexp/parallel.hpp"

namespace vexp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_grid(const GridFunction& u, const PairTable& table) {
  if (!(u.grid() == table.grid())) throw InvalidArgument("sobolev: function and table grids differ");
}

/// log|u_i - u_j| per packed pair, -inf for equal values.
std::vector<double> log_differences(const GridFunction& u, const PairTable& table) {
  const std::size_t m = table.size();
  std::vector<double> out(m * (m - 1) / 2);
  for_each_row(m, [&](std::size_t i) {
    std::size_t k = table.row_begin(i);
    for (std::size_t j = i + 1; j < m; ++j, ++k) {
      const double d = std::fabs(u[i] - u[j]);
      out[k] = d == 0.0 ? kNegInf : std::log(d);
    }
  });
  return out;
}

std::vector<double> log_values(const GridFunction& u) {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::fabs(u[i]);
    out[i] = a == 0.0 ? kNegInf : std::log(a);
  }
  return out;
}

/// Gagliardo sum at log(lambda); +inf once any term saturates.
double gagliardo_at(const PairTable& table, std::span<const double> log_d, double log_lambda) {
  const std::size_t m = table.size();
  const auto p = table.p();
  const auto kernel = table.kernel();
  std::vector<double> rows(m, 0.0);
  for_each_row(m, [&](std::size_t i) {
    std::size_t k = table.row_begin(i);
    double acc = 0.0;
    for (std::size_t j = i + 1; j < m; ++j, ++k) {
      if (log_d[k] == kNegInf) continue;
      const double e = p[k] * (log_d[k] - log_lambda);
      if (e > 709.0) {
        acc = std::numeric_limits<double>::infinity();
        break;
      }
      acc += kernel[k] * std::exp(e);
    }
    rows[i] = 2.0 * acc;
  });
  double sum = 0.0;
  for (double r : rows) sum += r;
  return sum;
}

double lp_at(const PairTable& table, std::span<const double> log_u, double log_lambda) {
  const auto pd = table.p_diag();
  double sum = 0.0;
  for (std::size_t i = 0; i < log_u.size(); ++i) {
    if (log_u[i] == kNegInf) continue;
    const double e = pd[i] * (log_u[i] - log_lambda);
    if (e > 709.0) return std::numeric_limits<double>::infinity();
    sum += table.grid().weight(i) * std::exp(e);
  }
  return sum;
}

double norm_search(const std::function<double(double)>& modular, double tol) {
  LuxemburgSearch search;
  search.tol = tol;
  return luxemburg_root(modular, search);
}

}  // namespace

PairTable::PairTable(const Grid1D& grid, const ExponentBundle& bundle)
    : grid_(grid), m_(grid.size()) {
  const double n = static_cast<double>(bundle.dimension);
  p_.resize(m_ * (m_ - 1) / 2);
  kernel_.resize(p_.size());
  p_diag_.resize(m_);
  s_diag_.resize(m_);
  for (std::size_t i = 0; i < m_; ++i) {
    const double x = grid.node(i);
    p_diag_[i] = bundle.p(x, x);
    s_diag_[i] = bundle.s(x, x);
  }
  for_each_row(m_, [&](std::size_t i) {
    const double xi = grid.node(i);
    std::size_t k = row_begin(i);
    for (std::size_t j = i + 1; j < m_; ++j, ++k) {
      const double xj = grid.node(j);
      const double pij = bundle.p(xi, xj);
      const double sij = bundle.s(xi, xj);
      p_[k] = pij;
      kernel_[k] = grid.weight(i) * grid.weight(j) * std::exp(-(n + sij * pij) * std::log(xj - xi));
    }
  });
}

SobolevModular gagliardo_modular(const GridFunction& u, const PairTable& table, double lambda) {
  check_grid(u, table);
  if (!(lambda > 0.0)) throw InvalidArgument("gagliardo_modular: lambda must be positive");
  const double ll = std::log(lambda);
  SobolevModular r;
  r.gagliardo_term = gagliardo_at(table, log_differences(u, table), ll);
  r.lp_term = lp_at(table, log_values(u), ll);
  if (!std::isfinite(r.gagliardo_term) || !std::isfinite(r.lp_term)) {
    std::size_t node = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (std::fabs(u[i]) > std::fabs(u[node])) node = i;
    }
    throw OutOfRange("gagliardo_modular: overflow (largest |u| at node " + std::to_string(node) +
                         ")",
                     node);
  }
  r.total = r.gagliardo_term + r.lp_term;
  return r;
}

SobolevModular gagliardo_modular(const GridFunction& u, const ExponentBundle& bundle,
                                 double lambda) {
  return gagliardo_modular(u, PairTable(u.grid(), bundle), lambda);
}

double sobolev_norm(const GridFunction& u, const PairTable& table, double tol) {
  check_grid(u, table);
  const auto log_d = log_differences(u, table);
  const auto log_u = log_values(u);
  bool zero = true;
  for (double v : log_u) zero = zero && v == kNegInf;
  if (zero) return 0.0;
  return norm_search(
      [&](double lambda) {
        const double ll = std::log(lambda);
        return gagliardo_at(table, log_d, ll) + lp_at(table, log_u, ll);
      },
      tol);
}

double sobolev_norm(const GridFunction& u, const ExponentBundle& bundle, double tol) {
  return sobolev_norm(u, PairTable(u.grid(), bundle), tol);
}

double seminorm(const GridFunction& u, const PairTable& table, double tol) {
  check_grid(u, table);
  const auto log_d = log_differences(u, table);
  bool constant = true;
  for (double v : log_d) constant = constant && v == kNegInf;
  if (constant) return 0.0;
  return norm_search([&](double lambda) { return gagliardo_at(table, log_d, std::log(lambda)); },
                     tol);
}

double seminorm(const GridFunction& u, const ExponentBundle& bundle, double tol) {
  return seminorm(u, PairTable(u.grid(), bundle), tol);
}

GridFunction flap_apply(const GridFunction& u, const PairTable& table) {
  check_grid(u, table);
  const std::size_t m = table.size();
  const auto p = table.p();
  const auto kernel = table.kernel();
  const auto& grid = table.grid();
  std::vector<double> out(m, 0.0);
  for_each_row(m, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const std::size_t k = table.index(i, j);
      acc += kernel[k] * signed_power(u[i] - u[j], p[k]);
    }
    out[i] = acc / grid.weight(i);
  });
  return GridFunction(grid, std::move(out), false);
}

GridFunction flap_apply(const GridFunction& u, const ExponentBundle& bundle) {
  return flap_apply(u, PairTable(u.grid(), bundle));
}

}  // namespace vexp
