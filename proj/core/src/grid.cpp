#include "vexp/grid.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "vexp/errors.hpp"
#include "vexp/parallel.hpp"

namespace vexp {

Grid1D::Grid1D(double a, double b, std::size_t nodes) : a_(a), b_(b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgument("Grid1D: need finite a < b");
  }
  if (nodes < 3) throw InvalidArgument("Grid1D: need at least 3 nodes");
  h_ = (b - a) / static_cast<double>(nodes - 1);
  nodes_.resize(nodes);
  weights_.assign(nodes, h_);
  for (std::size_t i = 0; i < nodes; ++i) nodes_[i] = a + static_cast<double>(i) * h_;
  nodes_.back() = b;
  weights_.front() = weights_.back() = 0.5 * h_;
}

std::size_t Grid1D::nearest(double x) const {
  const double t = std::round((x - a_) / h_);
  if (t <= 0.0) return 0;
  const auto i = static_cast<std::size_t>(t);
  return i >= size() ? size() - 1 : i;
}

GridFunction::GridFunction(Grid1D grid, std::vector<double> values, bool zero_boundary)
    : grid_(std::move(grid)), values_(std::move(values)), zero_boundary_(zero_boundary) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("GridFunction: " + std::to_string(values_.size()) +
                          " values for a grid of " + std::to_string(grid_.size()) + " nodes");
  }
  if (zero_boundary_ && (values_.front() != 0.0 || values_.back() != 0.0)) {
    throw InvalidArgument("GridFunction: zero_boundary set but end values are not 0");
  }
}

GridFunction GridFunction::zeros(const Grid1D& grid, bool zero_boundary) {
  return GridFunction(grid, std::vector<double>(grid.size(), 0.0), zero_boundary);
}

GridFunction GridFunction::sample(const Grid1D& grid, const std::function<double(double)>& f,
                                  bool zero_boundary) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.node(i));
  if (zero_boundary) v.front() = v.back() = 0.0;
  return GridFunction(grid, std::move(v), zero_boundary);
}

GridFunction GridFunction::scaled(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  if (zero_boundary_) v.front() = v.back() = 0.0;
  return GridFunction(grid_, std::move(v), zero_boundary_);
}

void GridFunction::write_csv(std::ostream& out) const {
  out << "x,value\n";
  std::ostringstream line;
  line << std::setprecision(17);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    line.str({});
    line << grid_.node(i) << ',' << values_[i] << '\n';
    out << line.str();
  }
}

GridFunction GridFunction::read_csv(std::istream& in, const Grid1D& grid, bool zero_boundary) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,value") throw InvalidArgument("CSV: expected header 'x,value', got '" + line + "'");

  std::vector<double> values;
  const double tol = 1e-9 * grid.length();
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw InvalidArgument("CSV: row " + std::to_string(row + 1) + " has no comma");
    }
    double x = 0.0;
    double v = 0.0;
    try {
      std::size_t used = 0;
      x = std::stod(line.substr(0, comma), &used);
      v = std::stod(line.substr(comma + 1), &used);
    } catch (const std::exception&) {
      throw InvalidArgument("CSV: malformed number in row " + std::to_string(row + 1));
    }
    if (row >= grid.size()) throw InvalidArgument("CSV: more rows than grid nodes");
    if (std::fabs(x - grid.node(row)) > tol) {
      throw InvalidArgument("CSV: row " + std::to_string(row + 1) + " has x=" + std::to_string(x) +
                            " but grid node is " + std::to_string(grid.node(row)));
    }
    values.push_back(v);
    ++row;
  }
  if (values.size() != grid.size()) {
    throw InvalidArgument("CSV: " + std::to_string(values.size()) + " rows for a grid of " +
                          std::to_string(grid.size()) + " nodes");
  }
  if (zero_boundary) values.front() = values.back() = 0.0;
  return GridFunction(grid, std::move(values), zero_boundary);
}

double integrate(const Grid1D& grid, std::span<const double> f) {
  if (f.size() != grid.size()) throw InvalidArgument("integrate: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += grid.weight(i) * f[i];
  return sum;
}

double integrate(const GridFunction& f) { return integrate(f.grid(), f.values()); }

double integrate(const Grid1D& grid, const std::function<double(double, std::size_t)>& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weight(i) * f(grid.node(i), i);
  return sum;
}

double double_integrate(const Grid1D& grid, const std::function<double(double, double)>& F,
                        bool exclude_diagonal) {
  const std::size_t m = grid.size();
  std::vector<double> rows(m, 0.0);
  constexpr auto npos = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> bad(m, npos);
  // Pairs are visited as (i, j) and (j, i) together so antisymmetric
  // integrands cancel exactly.
  for_each_row(m, [&](std::size_t i) {
    const double xi = grid.node(i);
    double acc = 0.0;
    if (!exclude_diagonal) {
      const double v = F(xi, xi);
      if (!std::isfinite(v)) {
        bad[i] = i;
        return;
      }
      acc += grid.weight(i) * v;
    }
    for (std::size_t j = i + 1; j < m; ++j) {
      const double xj = grid.node(j);
      const double fij = F(xi, xj);
      const double fji = F(xj, xi);
      if (!std::isfinite(fij) || !std::isfinite(fji)) {
        bad[i] = j;
        return;
      }
      acc += grid.weight(j) * (fij + fji);
    }
    rows[i] = grid.weight(i) * acc;
  });
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (bad[i] != npos) {
      throw NonFiniteValue("double_integrate: non-finite integrand at pair (" + std::to_string(i) +
                               ", " + std::to_string(bad[i]) + ")",
                           i, bad[i]);
    }
    sum += rows[i];
  }
  return sum;
}

}  // namespace vexp
