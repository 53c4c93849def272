#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace vexp {

/// Uniform nodes x_i = a + i h, i = 0..M-1, on the closed interval [a, b].
class Grid1D {
 public:
  Grid1D(double a, double b, std::size_t nodes);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double spacing() const noexcept { return h_; }
  double length() const noexcept { return b_ - a_; }

  double node(std::size_t i) const { return nodes_[i]; }
  /// Composite trapezoid weight: h/2 at the endpoints, h elsewhere.
  double weight(std::size_t i) const { return weights_[i]; }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Index of the node closest to x (clamped to the grid).
  std::size_t nearest(double x) const;

  bool operator==(const Grid1D& other) const noexcept {
    return a_ == other.a_ && b_ == other.b_ && nodes_.size() == other.nodes_.size();
  }

 private:
  double a_;
  double b_;
  double h_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Nodal values on a Grid1D. With `zero_boundary` set the two end values are
/// exactly 0, the discrete stand-in for membership in W_0.
class GridFunction {
 public:
  GridFunction(Grid1D grid, std::vector<double> values, bool zero_boundary = false);

  static GridFunction zeros(const Grid1D& grid, bool zero_boundary = false);
  /// Samples f at the nodes; with zero_boundary the ends are set to 0.
  static GridFunction sample(const Grid1D& grid, const std::function<double(double)>& f,
                             bool zero_boundary = false);

  const Grid1D& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  bool zero_boundary() const noexcept { return zero_boundary_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  GridFunction scaled(double c) const;

  /// CSV with header `x,value`, one row per node in ascending order,
  /// numbers printed with 17 significant digits.
  void write_csv(std::ostream& out) const;
  /// Reads the `x,value` format and checks that the x column matches `grid`.
  static GridFunction read_csv(std::istream& in, const Grid1D& grid, bool zero_boundary = false);

 private:
  Grid1D grid_;
  std::vector<double> values_;
  bool zero_boundary_;
};

/// Composite trapezoid sum  sum_i w_i f_i.
double integrate(const Grid1D& grid, std::span<const double> f);
double integrate(const GridFunction& f);
/// Node-wise integrand f(x_i, i).
double integrate(const Grid1D& grid, const std::function<double(double, std::size_t)>& f);

/// sum_{i,j} w_i w_j F(x_i, x_j). With `exclude_diagonal` the i == j terms
/// are skipped, which is the discrete principal value used for singular
/// kernels. Throws NonFiniteValue naming the first offending pair.
double double_integrate(const Grid1D& grid, const std::function<double(double, double)>& F,
                        bool exclude_diagonal);

}  // namespace vexp
