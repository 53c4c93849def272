#pragma once

#include <span>
#include <string>
#include <vector>

#include "vexp/bisection.hpp"
#include "vexp/exponents.hpp"
#include "vexp/grid.hpp"

namespace vexp {

struct ModularValue {
  double value = 0.0;
  double exponent_inf = 0.0;  ///< min of the exponent over the nodes used
  double exponent_sup = 0.0;
};

/// sum_i w_i |u_i / lambda|^{q_i}. Throws OutOfRange naming the node when a
/// term overflows.
double modular_nodes(const Grid1D& grid, std::span<const double> u, std::span<const double> q,
                     double lambda = 1.0);
/// Luxemburg norm for node-wise exponents; 0 when u vanishes at every node.
double luxemburg_nodes(const Grid1D& grid, std::span<const double> u, std::span<const double> q,
                       const LuxemburgSearch& search = {});

/// Quadrature of |u / lambda|^{p(x)}. Requires p^- > 1.
ModularValue modular_lp(const GridFunction& u, const ScalarExponentField& p, double lambda = 1.0);
double luxemburg_norm(const GridFunction& u, const ScalarExponentField& p, double tol = 1e-10);

/// x -> p(x) / (p(x) - 1). Throws InvalidExponent when p^- <= 1.
ScalarExponentField conjugate_exponent(const ScalarExponentField& p);
/// Same, additionally checking p > 1 at every node of `grid`.
ScalarExponentField conjugate_exponent(const ScalarExponentField& p, const Grid1D& grid);

struct Clause {
  std::string name;
  bool applicable = false;
  bool pass = true;
  double slack = 0.0;  ///< smallest relative margin; negative when violated
};

/// Norm/modular relations for one u: sign agreement of |u|-1 and rho-1,
/// and the power sandwiches for |u| >= 1 and |u| <= 1.
struct NormModularReport {
  double norm = 0.0;
  double modular = 0.0;
  double p_inf = 0.0;
  double p_sup = 0.0;
  std::vector<Clause> clauses;
  bool all_pass() const;
};

NormModularReport check_norm_modular(const GridFunction& u, const ScalarExponentField& p,
                                     double tol = 1e-10, double slack = 1e-9);

struct HolderPairing {
  double lhs = 0.0;         ///< |integral of u v|
  double rhs_sharp = 0.0;   ///< (1/p^- + 1/(p')^-) |u|_p |v|_p'
  double rhs_factor2 = 0.0; ///< 2 |u|_p |v|_p'
  double norm_u = 0.0;
  double norm_v = 0.0;
};

HolderPairing holder_pairing(const GridFunction& u, const GridFunction& v,
                             const ScalarExponentField& p, double tol = 1e-10);

/// Compares |u|_{pq} with | |u|^q |_p.
struct PowerNormReport {
  double norm_pq = 0.0;
  double norm_power = 0.0;
  double q_inf = 0.0;
  double q_sup = 0.0;
  std::vector<Clause> clauses;
  bool all_pass() const;
};

PowerNormReport power_norm_relation(const GridFunction& u, const ScalarExponentField& p,
                                    const ScalarExponentField& q, double tol = 1e-10,
                                    double slack = 1e-9);

}  // namespace vexp
