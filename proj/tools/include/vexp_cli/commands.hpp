#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>

#include "vexp_cli/config.hpp"

namespace vexp::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,  ///< also returned by `validate` when a required check fails
  kNonConvergence = 3,
};

struct RunOptions {
  std::string out_dir = ".";
  std::optional<std::string> input;  ///< GridFunction CSV for `norm`
  std::size_t snapshot_every = 0;
};

/// Output directory: the flag if given, else $VEXP_OUT_DIR, else the
/// config's output_dir, else ".".
std::string resolve_out_dir(const std::optional<std::string>& flag, const InstanceConfig& config);

/// Each command writes its files into options.out_dir, prints the JSON
/// summary to `out` and diagnostics to `err`, and returns an ExitCode.
int cmd_norm(const InstanceConfig& config, const RunOptions& options, std::ostream& out,
             std::ostream& err);
int cmd_solve(const InstanceConfig& config, const RunOptions& options, std::ostream& out,
              std::ostream& err);
int cmd_embed(const InstanceConfig& config, const RunOptions& options, std::ostream& out,
              std::ostream& err);
int cmd_validate(const InstanceConfig& config, const RunOptions& options, std::ostream& out,
                 std::ostream& err);

}  // namespace vexp::cli
