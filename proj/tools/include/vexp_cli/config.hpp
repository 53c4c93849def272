#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vexp/exponents.hpp"
#include "vexp/grid.hpp"
#include "vexp/solver.hpp"

namespace vexp::cli {

/// One exponent field: a catalog kind plus its raw parameters.
struct FieldSpec {
  std::string kind;
  std::map<std::string, std::string> params;
};

struct SolverSettings {
  std::size_t path_points = 16;
  double descent_tol = 1e-6;
  std::size_t max_outer_iters = 500;
  std::size_t max_descent_iters = 1;
  double armijo_c = 1e-4;
  double rho = 0.1;
  std::size_t ring_samples = 32;
};

struct EmbedSettings {
  double x0 = 0.0;
  double C0 = 20.0;  ///< constant used for the non-compactness bound
  std::vector<int> scales{1, 2, 4, 8, 16, 32};
  std::vector<double> eps{0.1, 0.01, 0.001};
  double annulus_eps = 0.3;
  int annulus_n_max = 5;
  double annulus_beta = 0.5;
  double rho_bound = 10.0;
  std::size_t random_members = 8;
  std::vector<std::string> fields;  ///< names of q fields; empty means the single `q.*`
};

struct TrSettings {
  double x0 = 0.0;
  double beta = 0.5;
  double C0 = 1.0;
  double eta = 0.5;
};

struct InstanceConfig {
  double a = -1.0;
  double b = 1.0;
  std::size_t M = 401;
  int dimension = 1;
  FieldSpec p, s, alpha, r;
  std::map<std::string, FieldSpec> q;  ///< "" for the single `q.*` field
  SolverSettings solver;
  EmbedSettings embed;
  std::optional<TrSettings> tr;
  double sigma_shift = 0.0;  ///< added to sigma_alpha in the HLS identity check
  std::uint64_t seed = 1;
  std::string output_dir;
};

/// The built-in instance: Omega = (-1, 1), p = 2 + 0.2 cos(pi (x+y) / 4),
/// s = 0.4 - 0.05 |x - y|, alpha = 0.5, r at the middle of the admissible band.
InstanceConfig default_instance();

/// Parses `key = value` lines on top of the default instance. `#` starts a
/// comment. Unknown keys, duplicates and malformed numbers raise ConfigError.
InstanceConfig parse_config(std::istream& in, const std::string& source = "<config>");
InstanceConfig load_config(const std::string& path);

Grid1D build_grid(const InstanceConfig& config);
ExponentBundle build_bundle(const InstanceConfig& config);
/// The q field registered under `name` ("" for `q.*`).
ScalarExponentField build_q(const InstanceConfig& config, const ExponentBundle& bundle,
                            const std::string& name);
MountainPassConfig build_solver_config(const InstanceConfig& config);

}  // namespace vexp::cli
