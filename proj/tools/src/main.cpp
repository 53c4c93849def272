#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vexp/errors.hpp"
#include "vexp/parallel.hpp"
#include "vexp_cli/commands.hpp"
#include "vexp_cli/config.hpp"

int main(int argc, char** argv) {
  using namespace vexp::cli;

  CLI::App app{"Variable-exponent fractional Sobolev and Choquard toolkit"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::size_t snapshot_every = 0;
  std::optional<std::string> input;

  app.add_option("--config", config_path, "Instance config file (default instance if omitted)");
  app.add_option("--threads", threads, "Worker threads; 1 is serial and bit-reproducible")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Overrides the config seed");
  app.add_option("--out", out_dir, "Output directory (else $VEXP_OUT_DIR, config, '.')");

  auto* norm = app.add_subcommand("norm", "Luxemburg and Sobolev norms of a grid function");
  norm->add_option("--input", input, "CSV with header x,value on the config grid")->required();
  auto* solve = app.add_subcommand("solve", "Mountain-pass solve of the Choquard equation");
  solve->add_option("--snapshot-every", snapshot_every, "Dump the max point every k iterations");
  auto* embed = app.add_subcommand("embed", "Embedding experiments for the configured q fields");
  auto* validate = app.add_subcommand("validate", "Admissibility checks on the exponents");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    InstanceConfig config = config_path ? load_config(*config_path) : default_instance();
    if (seed) config.seed = *seed;
    vexp::set_thread_count(threads);

    RunOptions options;
    options.out_dir = resolve_out_dir(out_dir, config);
    options.input = input;
    options.snapshot_every = snapshot_every;

    if (*norm) return cmd_norm(config, options, std::cout, std::cerr);
    if (*solve) return cmd_solve(config, options, std::cout, std::cerr);
    if (*embed) return cmd_embed(config, options, std::cout, std::cerr);
    if (*validate) return cmd_validate(config, options, std::cout, std::cerr);
  } catch (const vexp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const vexp::InvalidExponent& e) {
    std::cerr << "invalid exponent: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
