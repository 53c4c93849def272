#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vexp/bisection.hpp"
#include "vexp/exponents.hpp"
#include "vexp/grid.hpp"

namespace vexp {

/// Per-pair data of the Gagliardo sum, packed over i < j:
///   p_ij  and  K_ij = w_i w_j |x_i - x_j|^{-(N + s_ij p_ij)}.
/// Built once per (grid, bundle) and reused by every energy evaluation.
class PairTable {
 public:
  PairTable(const Grid1D& grid, const ExponentBundle& bundle);

  const Grid1D& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return m_; }
  /// Packed position of the pair (i, j), i != j, in either order.
  std::size_t index(std::size_t i, std::size_t j) const noexcept {
    if (i > j) std::swap(i, j);
    return i * (2 * m_ - i - 1) / 2 + (j - i - 1);
  }
  /// Position of (i, i + 1); row i occupies [row_begin(i), row_begin(i) + m - i - 1).
  std::size_t row_begin(std::size_t i) const noexcept { return i * (2 * m_ - i - 1) / 2; }

  std::span<const double> p() const noexcept { return p_; }
  std::span<const double> kernel() const noexcept { return kernel_; }
  std::span<const double> p_diag() const noexcept { return p_diag_; }
  std::span<const double> s_diag() const noexcept { return s_diag_; }

 private:
  Grid1D grid_;
  std::size_t m_;
  std::vector<double> p_;
  std::vector<double> kernel_;
  std::vector<double> p_diag_;
  std::vector<double> s_diag_;
};

struct SobolevModular {
  double gagliardo_term = 0.0;
  double lp_term = 0.0;
  double total = 0.0;
};

/// Gagliardo double sum over i != j of |u_i - u_j|^p / (lambda^p |x_i-x_j|^{N+sp})
/// plus the trapezoid sum of |u / lambda|^{p(x,x)}.
SobolevModular gagliardo_modular(const GridFunction& u, const PairTable& table,
                                 double lambda = 1.0);
SobolevModular gagliardo_modular(const GridFunction& u, const ExponentBundle& bundle,
                                 double lambda = 1.0);

/// Luxemburg norm of the full modular; 0 for u = 0.
double sobolev_norm(const GridFunction& u, const PairTable& table, double tol = 1e-10);
double sobolev_norm(const GridFunction& u, const ExponentBundle& bundle, double tol = 1e-10);

/// Luxemburg norm of the Gagliardo term alone; 0 for constant u.
double seminorm(const GridFunction& u, const PairTable& table, double tol = 1e-10);
double seminorm(const GridFunction& u, const ExponentBundle& bundle, double tol = 1e-10);

/// Discrete principal value of the variable-order fractional p-Laplacian:
///   (L u)_i = sum_{j != i} w_j |u_i - u_j|^{p-2} (u_i - u_j) / |x_i - x_j|^{N+sp}.
GridFunction flap_apply(const GridFunction& u, const PairTable& table);
GridFunction flap_apply(const GridFunction& u, const ExponentBundle& bundle);

/// |d|^{p-2} d with the value 0 at d = 0 for every p.
inline double signed_power(double d, double p) noexcept {
  if (d == 0.0) return 0.0;
  const double m = pow_abs(d, p - 1.0);
  return d > 0.0 ? m : -m;
}

}  // namespace vexp
