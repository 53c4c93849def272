#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vexp/exponents.hpp"
#include "vexp/grid.hpp"

namespace vexp {

/// Plateau bump: 1 on |t| <= 1/2, 0 on |t| >= 1, C^1 cubic ramp in between.
double bump_profile(double t) noexcept;

/// A closed-form function vanishing outside [lo, hi].
struct SupportedFunction {
  std::string label;
  std::function<double(double)> f;
  double lo = 0.0;
  double hi = 0.0;
};

/// Rescaled bumps phi_n(x) = n^{(N - p(x)s(x)) / p(x)} phi(n (x - x0)),
/// with p(x) = p(x,x) and s(x) = s(x,x).
class ConcentrationFamily {
 public:
  ConcentrationFamily(double x0, std::vector<int> scales, const Grid1D& reference);

  double x0() const noexcept { return x0_; }
  const std::vector<int>& scales() const noexcept { return scales_; }
  /// phi(x - x0) sampled on the reference grid.
  const GridFunction& profile() const noexcept { return profile_; }

 private:
  double x0_;
  std::vector<int> scales_;
  GridFunction profile_;
};

/// Closed form of phi_n; throws InvalidArgument when B_{1/n}(x0) leaves [a, b].
SupportedFunction concentration_member(const ConcentrationFamily& family, int n,
                                       const ExponentBundle& bundle);
/// Nodal samples of phi_n on `grid`.
GridFunction concentration_sequence(const ConcentrationFamily& family, int n,
                                    const ExponentBundle& bundle, const Grid1D& grid);

/// q(x) = max(floor, p_s^*(x) - C0 / (-log|x - x0|)^beta) for 0 < |x - x0| < 1,
/// q(x0) = p_s^*(x0), floor elsewhere. The map is continuous and touches
/// p_s^* only at x0. Throws InvalidExponent when floor >= p_s^* somewhere.
ScalarExponentField q_field_builder(const ScalarExponentField& p_s_star, double x0, double C0,
                                    double beta, double floor);

/// Trapezoid sum of |f|^q over [lo, hi] intersected with the support of f.
double lq_modular_local(const SupportedFunction& f, const ScalarExponentField& q, double lo,
                        double hi, std::size_t nodes = 4001);

/// Sobolev modular of a compactly supported function on the domain of
/// `bundle`, resolved on a local window around its support. Pairs inside the
/// window use a uniform grid with the diagonal excluded; pairs with one point
/// outside the window are integrated exactly in the outer variable by
/// Gauss-Legendre panels.
class LocalSobolevModular {
 public:
  LocalSobolevModular(const SupportedFunction& f, const ExponentBundle& bundle,
                      std::size_t window_nodes = 801);

  double gagliardo(double lambda = 1.0) const;
  double lp(double lambda = 1.0) const;
  double total(double lambda = 1.0) const { return gagliardo(lambda) + lp(lambda); }
  double norm(double tol = 1e-10) const;

 private:
  struct Term {
    double coeff;
    double log_base;
    double exponent;
  };
  static double sum(const std::vector<Term>& terms, double log_lambda);

  std::vector<Term> gagliardo_terms_;
  std::vector<Term> lp_terms_;
};

struct TailRow {
  double eps = 0.0;
  double value = 0.0;  ///< max over accepted members of the integral over B_eps(x0)
  std::string argmax;
};

struct TailTable {
  std::vector<TailRow> rows;
  std::vector<std::string> rejected;  ///< members above the norm bound
};

/// For each eps, the largest integral of |v|^{q(x)} over B_eps(x0) among
/// members with Sobolev norm <= rho_bound.
TailTable tail_vanishing_probe(const ExponentBundle& bundle, const ScalarExponentField& q,
                               double x0, double rho_bound, const std::vector<double>& eps_list,
                               const std::vector<SupportedFunction>& members);

/// Random plateau bumps inside [a, b] centred within `spread` of x0.
std::vector<SupportedFunction> random_bump_members(double x0, double spread, double a, double b,
                                                   std::size_t count, std::uint64_t seed);

struct AnnulusRow {
  int n = 0;
  double gap = 0.0;    ///< min p_s^* - max q over the annulus eps^{n+1} <= |x - x0| <= eps^n
  double bound = 0.0;  ///< C / (-log eps^{n+1})^beta, C fitted at n = 1
  double ratio = 0.0;  ///< gap (-log eps^{n+1})^beta
};

struct AnnulusTable {
  std::vector<AnnulusRow> rows;
  double fitted_C = 0.0;
  double spread = 0.0;  ///< max ratio / min ratio
};

/// Extremizes over the grid nodes inside each annulus and its two boundary
/// radii. Throws RefineGrid when an annulus holds no node.
AnnulusTable annulus_rate_check(const ExponentBundle& bundle, const ScalarExponentField& q,
                                double x0, double eps, int n_max, double beta,
                                const Grid1D& grid);

/// exp(-(N - p^- s^-) / p^- * 2 C0) * |B_{1/2} \ B_{1/4}|, which is 1/2 in 1-D.
double noncompact_bound(int dimension, double p_inf, double s_inf, double C0);

struct HypothesisReport {
  bool holds = true;
  double worst_margin = 0.0;
  double worst_rho = 0.0;
};

/// q(x) >= p_s^*(x) - C0 / log(1/|x - x0|) at x0 +- rho for every sampled rho in (0, 1).
HypothesisReport check_noncompact_hypothesis(const ScalarExponentField& q,
                                             const ScalarExponentField& p_s_star, double x0,
                                             double C0, const std::vector<double>& rho_samples);

struct VerdictRow {
  int n = 0;
  double modular = 0.0;
  double bound = 0.0;
};

struct CompactnessReport {
  std::vector<VerdictRow> rows;
  double bound = 0.0;
  std::string verdict;  ///< "mass escapes", "concentration persists" or "inconclusive"
};

inline constexpr const char* kMassEscapes = "mass escapes";
inline constexpr const char* kConcentrationPersists = "concentration persists";
inline constexpr const char* kInconclusive = "inconclusive";

/// L^{q(x)} modular of phi_n across the family scales. "mass escapes" when
/// the modulars are nonincreasing and the last is below 10% of the first;
/// "concentration persists" when every modular at n >= the median scale is at
/// least half the non-compactness bound for C0; otherwise "inconclusive".
CompactnessReport compactness_verdict(const ExponentBundle& bundle, const ScalarExponentField& q,
                                      const ConcentrationFamily& family, double C0);

struct ScalingReport {
  std::vector<int> scales;
  std::vector<double> lp_modular;
  std::vector<double> sobolev_modular;
  double slope = 0.0;                ///< least-squares slope of log lp_modular vs log n
  std::vector<double> increments;    ///< |S_k - S_{k-1}| / S_k for the Sobolev sequence
};

/// For constant p, s (taken from the diagonal at x0).
ScalingReport concentration_scaling(const ExponentBundle& bundle,
                                    const ConcentrationFamily& family);

}  // namespace vexp
