#include <iostream>

#include <CLI11.hpp>

#include "app.hpp"

int main(int argc, char** argv) {
  CLI::App cli{"Fractional-order PID tuning by dominant-pole placement and particle swarm search"};
  cli.set_version_flag("--version", FOPID_VERSION);
  cli.require_subcommand(1);

  fopid::app::CliOptions options;
  std::uint64_t seed = 0;
  std::string out;
  std::string mode;
  std::string params;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", options.config, "Job configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Override pso.seed");
    sub->add_option("--out", out, "Output directory (overrides \"output\")");
    sub->add_option("--mode", mode, "fractional | integer | both")
        ->check(CLI::IsMember({"fractional", "integer", "both"}));
    sub->add_option("--params", params, "Tune report or controllers file with parameters");
  };

  CLI::App* tune = cli.add_subcommand("tune", "Tune controller parameters with PSO");
  CLI::App* simulate = cli.add_subcommand("simulate", "Simulate closed-loop unit-step responses");
  CLI::App* verify = cli.add_subcommand("verify", "Evaluate the characteristic residual at both poles");
  for (CLI::App* sub : {tune, simulate, verify}) {
    add_common(sub);
  }

  try {
    cli.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return fopid::app::kExitInputError;
  }

  CLI::App* active = cli.get_subcommands().front();
  if (active->count("--seed") > 0) options.seed = seed;
  if (active->count("--out") > 0) options.out = out;
  if (active->count("--mode") > 0) options.mode = mode;
  if (active->count("--params") > 0) options.params = params;

  if (active == tune) {
    return fopid::app::run_tune(options, std::cout, std::cerr);
  }
  if (active == simulate) {
    return fopid::app::run_simulate(options, std::cout, std::cerr);
  }
  return fopid::app::run_verify(options, std::cout, std::cerr);
}
