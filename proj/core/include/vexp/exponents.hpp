#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "vexp/grid.hpp"

namespace vexp {

/// A continuous exponent x -> value on the closed interval [a, b].
///
/// The declared bounds play the role of inf/sup of the field. Catalog
/// constructors with a closed form set them exactly; `sampled` takes the
/// extremes over a dense uniform sample, which is an empirical bound.
class ScalarExponentField {
 public:
  using Function = std::function<double(double)>;

  ScalarExponentField(std::string name, Function f, double a, double b, double declared_inf,
                      double declared_sup);

  static ScalarExponentField constant(double value, double a, double b);
  static ScalarExponentField affine(double c0, double c1, double a, double b);
  static ScalarExponentField sampled(std::string name, Function f, double a, double b,
                                     std::size_t samples = 4801);

  double operator()(double x) const { return f_(x); }
  const std::string& name() const noexcept { return name_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double declared_inf() const noexcept { return inf_; }
  double declared_sup() const noexcept { return sup_; }

  std::vector<double> sample(const Grid1D& grid) const;
  const Function& function() const noexcept { return f_; }

 private:
  std::string name_;
  Function f_;
  double a_;
  double b_;
  double inf_;
  double sup_;
};

/// A symmetric exponent (x, y) -> value on [a, b]^2. The stored function is
/// symmetrized on evaluation, (f(x,y) + f(y,x)) / 2, so eval(x,y) and
/// eval(y,x) agree bit for bit whatever f is.
class SymmetricExponentField {
 public:
  using Function = std::function<double(double, double)>;

  SymmetricExponentField(std::string name, Function f, double a, double b, double declared_inf,
                         double declared_sup);

  static SymmetricExponentField constant(double value, double a, double b);
  static SymmetricExponentField sampled(std::string name, Function f, double a, double b,
                                        std::size_t samples_per_axis = 241);

  double operator()(double x, double y) const { return 0.5 * (f_(x, y) + f_(y, x)); }
  const std::string& name() const noexcept { return name_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double declared_inf() const noexcept { return inf_; }
  double declared_sup() const noexcept { return sup_; }

  /// The trace x -> f(x, x) with bounds sampled on [a, b].
  ScalarExponentField diagonal() const;

 private:
  std::string name_;
  Function f_;
  double a_;
  double b_;
  double inf_;
  double sup_;
};

/// The exponents of the Choquard problem on one domain.
struct ExponentBundle {
  SymmetricExponentField p;
  SymmetricExponentField s;
  ScalarExponentField alpha;
  ScalarExponentField r;
  int dimension = 1;

  double a() const noexcept { return p.a(); }
  double b() const noexcept { return p.b(); }
};

/// N p / (N - p s); throws InvalidExponent when N - p s <= 0.
double critical_exponent(double p_diag, double s_diag, int dimension);
/// p_s^*(x) from the diagonal traces p(x,x), s(x,x).
double critical_exponent(const ExponentBundle& bundle, double x);

/// 2N / (2N - alpha(x)); alpha(x) must lie in (0, N).
double sigma_alpha(double alpha_x, int dimension);
double sigma_alpha(const ScalarExponentField& alpha, double x, int dimension);

/// p_s^* as a field, bounds sampled.
ScalarExponentField critical_exponent_field(const ExponentBundle& bundle);
/// Upper edge of the admissible r band: (1 - alpha^+/2N) p_s^*(x).
ScalarExponentField hls_upper_field(const ExponentBundle& bundle);
/// Lower edge of the admissible r band: (1 - alpha^-/2N) p(x,x).
ScalarExponentField hls_lower_field(const ExponentBundle& bundle);
/// (1 - theta) * lower + theta * upper; theta = 1/2 is the band midpoint.
/// Only p, s, alpha and the dimension of `bundle` are read.
ScalarExponentField band_fraction_field(const ExponentBundle& bundle, double theta);

/// Max over `pairs` of |1/sigma(x) + (alpha(x)+alpha(y))/2N + 1/sigma(y) - 2|.
/// `sigma` defaults to sigma_alpha; pass another map to probe a corrupted one.
double check_hls_identity(const ScalarExponentField& alpha, int dimension,
                          const std::vector<std::pair<double, double>>& pairs,
                          const std::function<double(double)>& sigma = {});

struct RRangeReport {
  bool ok = true;
  double worst_violation = 0.0;  ///< largest amount by which a bound is exceeded
  std::size_t worst_node = 0;
  double worst_x = 0.0;
};

/// Checks (1 - alpha^-/2N) p(x,x) <= r(x) <= (1 - alpha^+/2N) p_s^*(x) at every
/// node, with a relative slack of 1e-12 so that r placed exactly on an edge
/// passes.
RRangeReport validate_r_range(const ExponentBundle& bundle, const Grid1D& grid);

/// max |f(x)-f(y)| log(1/|x-y|) over distinct node pairs with |x-y| < 1/2.
/// An empirical lower bound for the log-Hoelder constant.
double log_holder_constant(const ScalarExponentField& f, const Grid1D& grid);
/// Same over pairs of points of a sub-sampled product grid (at most
/// `max_axis_nodes` per axis), distances measured in R^2.
double log_holder_constant(const SymmetricExponentField& f, const Grid1D& grid,
                           std::size_t max_axis_nodes = 33);

struct TouchingRateReport {
  bool holds = true;
  double worst_margin = 0.0;  ///< min over rho of (rhs - lhs); negative when violated
  double worst_rho = 0.0;
};

/// Touching-rate condition at x0: for every sampled rho in (0, eta),
///   max_{|x-x0|=rho} r(x) <= min_{|x-x0|=rho} critical(x) - C0 / (-log rho)^beta.
/// In one dimension the sphere is {x0 - rho, x0 + rho}; points outside the
/// field's domain are skipped. `critical` is (1 - alpha^+/2N) p_s^* for the
/// Choquard exponent r, or p_s^* itself for an embedding exponent q.
TouchingRateReport check_touching_rate(const ScalarExponentField& r,
                                       const ScalarExponentField& critical, double x0,
                                       double beta, double C0, double eta,
                                       const std::vector<double>& rho_samples);
/// The Choquard form: critical = hls_upper_field(bundle).
TouchingRateReport check_tr_condition(const ExponentBundle& bundle, double x0, double beta,
                                      double C0, double eta,
                                      const std::vector<double>& rho_samples);

/// `count` log-spaced radii in [rho_min, rho_max].
std::vector<double> log_spaced(double rho_min, double rho_max, std::size_t count);

struct NamedCheck {
  std::string name;
  bool pass = true;
  std::string detail;
  bool required = true;  ///< false for informational checks
};

/// Sampled admissibility of a bundle on a grid: declared bounds, symmetry,
/// 0 < s^- <= s^+ < 1, 1 < p^- <= p^+ < N/s^+, 0 < alpha^- <= alpha^+ < N,
/// finiteness, and the (sampled) diagonal local-minimum property.
std::vector<NamedCheck> validate_bundle(const ExponentBundle& bundle, const Grid1D& grid);

}  // namespace vexp
