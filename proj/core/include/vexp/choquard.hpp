#pragma once

#include <span>
#include <vector>

#include "vexp/exponents.hpp"
#include "vexp/grid.hpp"
#include "vexp/sobolev.hpp"

namespace vexp {

struct EnergyReport {
  double gagliardo_energy = 0.0;  ///< sum_{i != j} of |u_i-u_j|^p / (p |x_i-x_j|^{N+sp}) w_i w_j
  double lp_energy = 0.0;         ///< sum_i w_i |u_i|^{p(x,x)} / p(x,x)
  double choquard_energy = 0.0;   ///< K[u]
  double total = 0.0;             ///< gagliardo + lp - choquard
  double gradient_sup_norm = 0.0;
};

struct HlsBound {
  double lhs = 0.0;    ///< double sum of |u(x)|^r |u(y)|^r / |x-y|^{(alpha(x)+alpha(y))/2}
  double rhs = 0.0;    ///< max of the four norm powers (constant 1)
  double ratio = 0.0;  ///< lhs / rhs, 0 when both vanish
};

/// Discrete energy
///   I[u] = sum_{i!=j} L_ij |u_i-u_j|^{p_ij} / p_ij + sum_i w_i |u_i|^{p_ii} / p_ii - K[u],
///   K[u] = sum_{i!=j} G_ij |u_i|^{r_i} |u_j|^{r_j} / (2 r_i),
/// with L_ij = w_i w_j |x_i-x_j|^{-(N+s_ij p_ij)} and
/// G_ij = w_i w_j |x_i-x_j|^{-(alpha_i+alpha_j)/2}. The gradient is the exact
/// derivative of these sums with respect to the interior nodal values.
class ChoquardEnergy {
 public:
  ChoquardEnergy(const Grid1D& grid, const ExponentBundle& bundle);

  const Grid1D& grid() const noexcept { return pairs_.grid(); }
  const PairTable& pairs() const noexcept { return pairs_; }
  const ExponentBundle& bundle() const noexcept { return bundle_; }
  std::span<const double> r() const noexcept { return r_; }
  std::span<const double> alpha() const noexcept { return alpha_; }

  double K(std::span<const double> u) const;
  /// Exact directional derivative of K at u along v.
  double K_derivative(std::span<const double> u, std::span<const double> v) const;

  /// The three terms and I; gradient_sup_norm is left at 0.
  EnergyReport terms(std::span<const double> u) const;
  double energy(std::span<const double> u) const { return terms(u).total; }
  /// Full report including the gradient sup norm.
  EnergyReport report(std::span<const double> u) const;

  /// dI/du_k for interior k; entries 0 and M-1 are 0.
  std::vector<double> gradient(std::span<const double> u) const;
  /// sum_k dI/du_k v_k over interior k.
  double directional_derivative(std::span<const double> u, std::span<const double> v) const;
  double residual(std::span<const double> u) const;

  HlsBound hls_bound(std::span<const double> u) const;

 private:
  void check(std::span<const double> u) const;

  ExponentBundle bundle_;
  PairTable pairs_;
  std::vector<double> r_;
  std::vector<double> alpha_;
  std::vector<double> coulomb_;  ///< packed G_ij
};

double choquard_K(const GridFunction& u, const ExponentBundle& bundle);
double choquard_K_derivative(const GridFunction& u, const GridFunction& v,
                             const ExponentBundle& bundle);
HlsBound hls_bound_check(const GridFunction& u, const ExponentBundle& bundle);
EnergyReport energy_I(const GridFunction& u, const ExponentBundle& bundle);
GridFunction energy_gradient(const GridFunction& u, const ExponentBundle& bundle);
double residual(const GridFunction& u, const ExponentBundle& bundle);

}  // namespace vexp
