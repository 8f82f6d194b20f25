// varstep command-line runner: run | convergence | reduce, driven by a flat
// key-value config file (see docs/config_schema.txt).
#include <CLI11.hpp>

#include <iostream>

#include "varstep/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"structure-preserving time integration experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  long long seed = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "path to the run configuration")->required();
    cmd->add_option("--out", out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", seed, "seed override (non-negative)");
  };
  CLI::App* run = app.add_subcommand("run", "integrate one trajectory and audit it");
  CLI::App* conv = app.add_subcommand("convergence", "error-vs-step-size study");
  CLI::App* red = app.add_subcommand("reduce", "full vs reduced runs plus the non-structured fixture");
  add_common(run);
  add_common(conv);
  add_common(red);

  CLI11_PARSE(app, argc, argv);

  try {
    varstep::io::RunConfig cfg = varstep::io::parse_config_file(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed >= 0) cfg.seed = static_cast<uint64_t>(seed);
    if (run->parsed()) return varstep::cli::run_command(cfg);
    if (conv->parsed()) return varstep::cli::convergence_command(cfg);
    return varstep::cli::reduce_command(cfg);
  } catch (const varstep::io::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
