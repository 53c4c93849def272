#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "vexp/choquard.hpp"
#include "vexp/grid.hpp"

namespace vexp {

struct MpGeometry {
  double rho = 0.0;
  double d_hat = 0.0;  ///< min of I over the sampled sphere |u| = rho
  bool pass = false;
  std::size_t samples = 0;
};

struct MountainPassConfig {
  std::size_t path_points = 16;        ///< K; the path has K + 1 vertices
  double descent_tol = 1e-6;           ///< stop when the max-point residual is below this
  std::size_t max_outer_iters = 500;
  std::size_t max_descent_iters = 1;   ///< descent steps on the max point per outer iteration
  std::size_t max_backtracks = 60;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double initial_step = 1.0;
  /// Path end direction; defaults to sin(pi (x - a) / (b - a)).
  std::optional<GridFunction> initial_direction;
  /// Full starting path (first vertex 0, last vertex with negative energy).
  /// Overrides the straight segment built from the valley point.
  std::optional<std::vector<GridFunction>> initial_path;
  std::uint64_t seed = 1;
  double rho = 0.1;                    ///< ring radius checked before the run
  std::size_t ring_samples = 32;
  /// A ring check already run for this energy; skips the repeat.
  std::optional<MpGeometry> ring;
  /// Called with (iteration, current max point) every `snapshot_every` iterations.
  std::size_t snapshot_every = 0;
  std::function<void(std::size_t, const GridFunction&)> snapshot;

  void validate() const;
};


struct ValleyPoint {
  double t = 0.0;
  GridFunction v;
  double energy = 0.0;
};

struct IterationRecord {
  double max_energy = 0.0;
  double residual = 0.0;
  double step = 0.0;
};

struct SolveReport {
  GridFunction u_star;
  double critical_value = 0.0;
  double residual = 0.0;
  std::size_t iters = 0;
  bool converged = false;
  std::vector<IterationRecord> history;
  MpGeometry mp_ring;
  double valley_t = 0.0;
  double sobolev_norm = 0.0;
};

/// Random zero-boundary sine-series directions, rescaled to Sobolev norm rho.
MpGeometry verify_mp_geometry(const ChoquardEnergy& energy, double rho, std::size_t samples,
                              std::uint64_t seed);
MpGeometry verify_mp_geometry(const ExponentBundle& bundle, const Grid1D& grid, double rho,
                              std::size_t samples, std::uint64_t seed);

/// First t in 1, 2, 4, ... with I[t direction] < 0. Throws ValleyNotFound past 2^40.
ValleyPoint find_valley_point(const ChoquardEnergy& energy, const GridFunction& direction);
ValleyPoint find_valley_point(const ExponentBundle& bundle, const GridFunction& direction);

/// sin(pi (x - a) / (b - a)) with exact zeros at the ends.
GridFunction default_direction(const Grid1D& grid);

/// Path-following max-point descent. Each outer iteration locates the
/// highest path vertex, refines the maximum on its two adjacent segments,
/// takes Armijo steps along the preconditioned gradient, puts the result
/// back as that vertex and re-interpolates its neighbours.
SolveReport mountain_pass_solve(const ChoquardEnergy& energy, const MountainPassConfig& config);
SolveReport mountain_pass_solve(const ExponentBundle& bundle, const Grid1D& grid,
                                const MountainPassConfig& config);

struct PsBound {
  double lhs = 0.0;  ///< I[u] - beta <I'[u], u>
  double rhs = 0.0;  ///< (1/p^+ - beta) min(|u|^{p^+}, |u|^{p^-})
};

/// Requires 1/(2 r^-) < beta < 1/p^+; exponent extremes are taken over the grid.
PsBound ps_functional_bound(const ChoquardEnergy& energy, const GridFunction& u, double beta);
PsBound ps_functional_bound(const GridFunction& u, double beta, const ExponentBundle& bundle);

}  // namespace vexp
