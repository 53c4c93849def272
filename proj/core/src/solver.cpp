#include "vexp/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "vexp/errors.hpp"
#include "vexp/parallel.hpp"
#include "vexp/sobolev.hpp"

namespace vexp {

namespace {

double sup_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Cholesky factor of 2 (diag(row sums of L) - L) + diag(w) on the interior
/// nodes: the Hessian of the quadratic (p = 2) part of the energy.
class Preconditioner {
 public:
  explicit Preconditioner(const PairTable& table) : m_(table.size()) {
    const std::size_t n = m_ - 2;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    const auto L = table.kernel();
    std::vector<double> rowsum(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      std::size_t k = table.row_begin(i);
      for (std::size_t j = i + 1; j < m_; ++j, ++k) {
        rowsum[i] += L[k];
        rowsum[j] += L[k];
        if (i >= 1 && j + 1 < m_) {
          const auto a = static_cast<Eigen::Index>(i - 1);
          const auto b = static_cast<Eigen::Index>(j - 1);
          A(a, b) = A(b, a) = -2.0 * L[k];
        }
      }
    }
    for (std::size_t i = 1; i + 1 < m_; ++i) {
      const auto a = static_cast<Eigen::Index>(i - 1);
      A(a, a) = 2.0 * rowsum[i] + table.grid().weight(i);
    }
    llt_.compute(A);
    if (llt_.info() != Eigen::Success) throw Error("preconditioner: Cholesky factorization failed");
  }

  std::vector<double> solve(std::span<const double> g) const {
    const auto n = static_cast<Eigen::Index>(m_ - 2);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) rhs(i) = g[static_cast<std::size_t>(i) + 1];
    const Eigen::VectorXd z = llt_.solve(rhs);
    std::vector<double> out(m_, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i) + 1] = z(i);
    return out;
  }

 private:
  std::size_t m_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

std::vector<double> lerp(std::span<const double> a, std::span<const double> b, double t) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

struct SegmentMax {
  double tau = 0.0;
  std::vector<double> point;
  double energy = 0.0;
};

/// Maximizes I along a + tau (b - a), tau in [0, 1], by locating a sign change
/// of the directional derivative (regula falsi with bisection fallback).
SegmentMax refine_segment(const ChoquardEnergy& E, std::span<const double> a,
                          std::span<const double> b, double ea, double eb) {
  std::vector<double> dir(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) dir[i] = b[i] - a[i];
  auto slope = [&](double t) { return E.directional_derivative(lerp(a, b, t), dir); };
  double lo = 0.0, hi = 1.0;
  double f_lo = slope(lo);
  double f_hi = slope(hi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    // No interior critical point of the restriction; keep the better end.
    if (ea >= eb) return {0.0, std::vector<double>(a.begin(), a.end()), ea};
    return {1.0, std::vector<double>(b.begin(), b.end()), eb};
  }
  int side = 0;
  bool bisect = false;
  double t = 0.5;
  for (int step = 0; step < 80; ++step) {
    const double width = hi - lo;
    t = 0.5 * (lo + hi);
    if (!bisect) {
      const double s = hi - f_hi * (hi - lo) / (f_hi - f_lo);
      if (s > lo && s < hi) t = s;
    }
    const double f = slope(t);
    if (f == 0.0) break;
    if (f > 0.0) {
      lo = t;
      f_lo = f;
      if (side == 1) f_hi *= 0.5;
      side = 1;
    } else {
      hi = t;
      f_hi = f;
      if (side == -1) f_lo *= 0.5;
      side = -1;
    }
    bisect = (hi - lo) > 0.5 * width;
    if (hi - lo < 1e-13) break;
  }
  auto point = lerp(a, b, t);
  const double e = E.energy(point);
  return {t, std::move(point), e};
}

}  // namespace

void MountainPassConfig::validate() const {
  if (path_points < 8) throw InvalidArgument("mountain pass: path_points must be >= 8");
  if (!(descent_tol > 0.0)) throw InvalidArgument("mountain pass: descent_tol must be positive");
  if (max_outer_iters == 0 || max_descent_iters == 0 || max_backtracks == 0) {
    throw InvalidArgument("mountain pass: iteration caps must be positive");
  }
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) {
    throw InvalidArgument("mountain pass: armijo_c must lie in (0, 1)");
  }
  if (!(backtrack > 0.0 && backtrack < 1.0)) {
    throw InvalidArgument("mountain pass: backtrack must lie in (0, 1)");
  }
  if (!(initial_step > 0.0)) throw InvalidArgument("mountain pass: initial_step must be positive");
  if (!(rho > 0.0)) throw InvalidArgument("mountain pass: rho must be positive");
  if (ring_samples < 16) throw InvalidArgument("mountain pass: ring_samples must be >= 16");
}

GridFunction default_direction(const Grid1D& grid) {
  return GridFunction::sample(
      grid,
      [&](double x) { return std::sin(std::numbers::pi * (x - grid.a()) / grid.length()); }, true);
}

MpGeometry verify_mp_geometry(const ChoquardEnergy& energy, double rho, std::size_t samples,
                              std::uint64_t seed) {
  if (!(rho > 0.0)) throw InvalidArgument("verify_mp_geometry: rho must be positive");
  if (samples < 16) throw InvalidArgument("verify_mp_geometry: need at least 16 samples");
  const auto& grid = energy.grid();
  const std::size_t m = grid.size();
  constexpr int kModes = 8;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  MpGeometry g;
  g.rho = rho;
  g.samples = samples;
  g.d_hat = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    double c[kModes];
    for (int k = 0; k < kModes; ++k) c[k] = normal(rng) / (k + 1);
    std::vector<double> u(m, 0.0);
    for (std::size_t i = 1; i + 1 < m; ++i) {
      const double t = std::numbers::pi * (grid.node(i) - grid.a()) / grid.length();
      for (int k = 0; k < kModes; ++k) u[i] += c[k] * std::sin((k + 1) * t);
    }
    GridFunction f(grid, std::move(u), true);
    const double norm = sobolev_norm(f, energy.pairs());
    if (norm == 0.0) continue;
    const auto scaled = f.scaled(rho / norm);
    g.d_hat = std::min(g.d_hat, energy.energy(scaled.values()));
  }
  g.pass = g.d_hat > 0.0 && std::isfinite(g.d_hat);
  return g;
}

MpGeometry verify_mp_geometry(const ExponentBundle& bundle, const Grid1D& grid, double rho,
                              std::size_t samples, std::uint64_t seed) {
  return verify_mp_geometry(ChoquardEnergy(grid, bundle), rho, samples, seed);
}

ValleyPoint find_valley_point(const ChoquardEnergy& energy, const GridFunction& direction) {
  if (!(direction.grid() == energy.grid())) {
    throw InvalidArgument("find_valley_point: direction lives on another grid");
  }
  if (direction[0] != 0.0 || direction[direction.size() - 1] != 0.0) {
    throw InvalidArgument("find_valley_point: direction must vanish at the boundary");
  }
  if (sup_norm(direction.values()) == 0.0) {
    throw InvalidArgument("find_valley_point: direction is zero");
  }
  double t = 1.0;
  for (int k = 0; k <= 40; ++k, t *= 2.0) {
    auto v = direction.scaled(t);
    const double e = energy.energy(v.values());
    if (e < 0.0) return {t, std::move(v), e};
  }
  throw ValleyNotFound(
      "find_valley_point: I[t u] stays >= 0 up to t = 2^40; the Choquard growth 2 r^- does not "
      "dominate p^+");
}

ValleyPoint find_valley_point(const ExponentBundle& bundle, const GridFunction& direction) {
  return find_valley_point(ChoquardEnergy(direction.grid(), bundle), direction);
}

SolveReport mountain_pass_solve(const ChoquardEnergy& E, const MountainPassConfig& config) {
  config.validate();
  const auto& grid = E.grid();
  const std::size_t m = grid.size();

  SolveReport report{GridFunction::zeros(grid, true), 0.0, 0.0, 0, false, {}, {}, 0.0, 0.0};
  report.mp_ring = config.ring ? *config.ring
                               : verify_mp_geometry(E, config.rho, config.ring_samples, config.seed);
  if (!report.mp_ring.pass) {
    throw InvalidArgument("mountain pass: ring check failed (d_hat = " +
                          std::to_string(report.mp_ring.d_hat) + ")");
  }

  std::vector<std::vector<double>> path;
  if (config.initial_path) {
    const auto& init = *config.initial_path;
    if (init.size() < 3) throw InvalidArgument("mountain pass: initial path needs 3+ vertices");
    for (const auto& f : init) {
      if (!(f.grid() == grid)) throw InvalidArgument("mountain pass: initial path grid mismatch");
      path.emplace_back(f.values().begin(), f.values().end());
      path.back().front() = path.back().back() = 0.0;
    }
    if (sup_norm(path.front()) != 0.0) {
      throw InvalidArgument("mountain pass: initial path must start at 0");
    }
    if (!(E.energy(path.back()) < 0.0)) {
      throw InvalidArgument("mountain pass: initial path must end at negative energy");
    }
  } else {
    const GridFunction dir =
        config.initial_direction ? *config.initial_direction : default_direction(grid);
    const auto valley = find_valley_point(E, dir);
    report.valley_t = valley.t;
    const std::size_t K = config.path_points;
    for (std::size_t k = 0; k <= K; ++k) {
      path.push_back(lerp(std::vector<double>(m, 0.0), valley.v.values(),
                          static_cast<double>(k) / static_cast<double>(K)));
    }
  }
  const std::size_t last = path.size() - 1;

  std::vector<double> energies(path.size());
  for (std::size_t k = 0; k <= last; ++k) energies[k] = E.energy(path[k]);

  const Preconditioner prec(E.pairs());
  std::vector<double> best_point = path[0];
  double best_residual = std::numeric_limits<double>::infinity();

  for (std::size_t it = 0; it < config.max_outer_iters; ++it) {
    const std::size_t k = static_cast<std::size_t>(
        std::max_element(energies.begin() + 1, energies.begin() + static_cast<long>(last)) -
        energies.begin());
    std::vector<double> w = path[k];
    double ew = energies[k];
    // The max vertex itself may already be critical; the segment search below
    // can step off it by a rounding-level energy gain.
    if (const double res_k = E.residual(path[k]); res_k <= config.descent_tol) {
      report.iters = it + 1;
      report.history.push_back({ew, res_k, 0.0});
      report.converged = true;
      best_point = w;
      break;
    }
    if (k >= 1) {
      auto s = refine_segment(E, path[k - 1], path[k], energies[k - 1], energies[k]);
      if (s.energy > ew) {
        w = std::move(s.point);
        ew = s.energy;
      }
    }
    if (k + 1 <= last) {
      auto s = refine_segment(E, path[k], path[k + 1], energies[k], energies[k + 1]);
      if (s.energy > ew) {
        w = std::move(s.point);
        ew = s.energy;
      }
    }
    auto g = E.gradient(w);
    const double res = sup_norm(g);
    report.iters = it + 1;
    if (res < best_residual) {
      best_residual = res;
      best_point = w;
    }
    if (config.snapshot && config.snapshot_every > 0 && it % config.snapshot_every == 0) {
      config.snapshot(it, GridFunction(grid, w, true));
    }
    if (res <= config.descent_tol) {
      report.history.push_back({ew, res, 0.0});
      report.converged = true;
      best_point = w;
      break;
    }
    const double max_energy = ew;
    double step = 0.0;
    for (std::size_t d = 0; d < config.max_descent_iters; ++d) {
      if (d > 0) g = E.gradient(w);
      const auto z = prec.solve(g);
      const double slope = dot(g, z);
      if (!(slope > 0.0)) break;
      step = config.initial_step;
      bool accepted = false;
      for (std::size_t bt = 0; bt < config.max_backtracks; ++bt, step *= config.backtrack) {
        auto trial = w;
        for (std::size_t i = 0; i < m; ++i) trial[i] -= step * z[i];
        const double et = E.energy(trial);
        if (et <= ew - config.armijo_c * step * slope) {
          w = std::move(trial);
          ew = et;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        step = 0.0;
        break;
      }
    }
    report.history.push_back({max_energy, res, step});
    path[k] = std::move(w);
    energies[k] = ew;
    for (std::size_t j : {k - 1, k + 1}) {
      if (j >= 1 && j < last) {
        path[j] = lerp(path[j - 1], path[j + 1], 0.5);
        energies[j] = E.energy(path[j]);
      }
    }
  }

  report.u_star = GridFunction(grid, best_point, true);
  const auto rep = E.report(best_point);
  report.critical_value = rep.total;
  report.residual = rep.gradient_sup_norm;
  report.sobolev_norm = sobolev_norm(report.u_star, E.pairs());
  return report;
}

SolveReport mountain_pass_solve(const ExponentBundle& bundle, const Grid1D& grid,
                                const MountainPassConfig& config) {
  return mountain_pass_solve(ChoquardEnergy(grid, bundle), config);
}

PsBound ps_functional_bound(const ChoquardEnergy& E, const GridFunction& u, double beta) {
  const auto r = E.r();
  const double r_lo = *std::min_element(r.begin(), r.end());
  const auto p = E.pairs().p();
  const auto pd = E.pairs().p_diag();
  double p_lo = *std::min_element(pd.begin(), pd.end());
  double p_hi = *std::max_element(pd.begin(), pd.end());
  if (!p.empty()) {
    p_lo = std::min(p_lo, *std::min_element(p.begin(), p.end()));
    p_hi = std::max(p_hi, *std::max_element(p.begin(), p.end()));
  }
  if (!(beta > 1.0 / (2.0 * r_lo) && beta < 1.0 / p_hi)) {
    throw InvalidArgument("ps_functional_bound: beta must lie in (1/(2 r^-), 1/p^+) = (" +
                          std::to_string(1.0 / (2.0 * r_lo)) + ", " + std::to_string(1.0 / p_hi) +
                          ")");
  }
  PsBound b;
  b.lhs = E.energy(u.values()) - beta * E.directional_derivative(u.values(), u.values());
  const double norm = sobolev_norm(u, E.pairs());
  b.rhs = (1.0 / p_hi - beta) * std::min(std::pow(norm, p_hi), std::pow(norm, p_lo));
  return b;
}

PsBound ps_functional_bound(const GridFunction& u, double beta, const ExponentBundle& bundle) {
  return ps_functional_bound(ChoquardEnergy(u.grid(), bundle), u, beta);
}

}  // namespace vexp
