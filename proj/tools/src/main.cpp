#include <iostream>

#include <CLI11.hpp>

#include "wft_cli/commands.hpp"

using namespace wft::cli;

int main(int argc, char** argv) {
  CLI::App app{"Wave-front tracking for gas flow on a star network of pipes"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::uint64_t seed = 0;
  std::vector<double> epsilons;
  bool quiet = false;
  std::string out;

  auto common = [&](CLI::App* cmd, const char* out_help) {
    cmd->add_option("--out", out, out_help);
    cmd->add_option("--seed", seed, "Seed for randomized scenario parts and calibration");
    cmd->add_flag("--quiet", quiet, "Suppress the summary on stdout");
  };

  std::string scenario;
  std::string scenario_b;
  std::size_t samples = 0;

  CLI::App* run = app.add_subcommand("run", "Run a scenario and write CSV series, snapshots and report.json");
  run->add_option("scenario", scenario, "Scenario JSON file")->required();
  run->add_option("--epsilon", epsilons, "Front-tracking accuracy (overrides run.epsilon)")->expected(1);
  common(run, "Output directory (default wft_out)");

  CLI::App* cal = app.add_subcommand("calibrate", "Estimate interaction constants for a scenario's network");
  cal->add_option("scenario", scenario, "Scenario JSON file")->required();
  cal->add_option("--samples", samples, "Samples per constant (default functionals.calibration.n_samples)");
  common(cal, "Output JSON file (default stdout)");

  CLI::App* ref = app.add_subcommand("refine", "Epsilon-refinement study");
  ref->add_option("scenario", scenario, "Scenario JSON file")->required();
  ref->add_option("--epsilon", epsilons, "Epsilon levels (repeatable; default run.epsilon halved 4 times)");
  common(ref, "Output directory (default wft_refine)");

  CLI::App* cmp = app.add_subcommand("compare", "Co-evolve two scenarios and measure Phi and L1 distances");
  cmp->add_option("scenario_a", scenario, "First scenario JSON file")->required();
  cmp->add_option("scenario_b", scenario_b, "Second scenario JSON file")->required();
  cmp->add_option("--epsilon", epsilons, "Front-tracking accuracy for both runs")->expected(1);
  common(cmp, "Output JSON file (default compare.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  opts.out = out;
  opts.quiet = quiet;
  for (CLI::App* cmd : {run, cal, ref, cmp}) {
    if (cmd->parsed() && cmd->count("--seed")) opts.overrides.seed = seed;
  }
  if ((run->parsed() || cmp->parsed()) && !epsilons.empty()) opts.overrides.epsilon = epsilons.front();

  return guarded(
      [&] {
        if (run->parsed()) return cmd_run(scenario, opts);
        if (cal->parsed()) {
          return cmd_calibrate(scenario, cal->count("--samples") ? std::optional<std::size_t>(samples) : std::nullopt,
                               opts);
        }
        if (ref->parsed()) return cmd_refine(scenario, epsilons, opts);
        return cmd_compare(scenario, scenario_b, opts);
      },
      std::cerr);
}
