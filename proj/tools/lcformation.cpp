// Command-line front end: run | analyze-spectrum | stability | acceptance.

#include <iostream>

#include "CLI11.hpp"
#include "lcformation/acceptance.hpp"
#include "lcformation/commands.hpp"

int main(int argc, char **argv) {
  CLI::App app{"Leaderless circular formation around a target: simulation and analysis"};
  app.require_subcommand(1);

  lcf::cli::RunOptions run;
  std::uint64_t seed = 0;
  double dt = 0.0, t_end = 0.0;
  auto *run_cmd = app.add_subcommand("run", "simulate a config and write CSV, JSON and SVG outputs");
  run_cmd->add_option("--config", run.config, "config file")->required();
  run_cmd->add_option("--out", run.out_dir, "output directory")->capture_default_str();
  auto *seed_opt = run_cmd->add_option("--seed", seed, "override [sim] seed");
  auto *dt_opt = run_cmd->add_option("--dt", dt, "override [sim] dt");
  auto *t_end_opt = run_cmd->add_option("--t-end", t_end, "override [sim] t_end");

  lcf::cli::SpectrumOptions spectrum;
  auto *spec_cmd = app.add_subcommand("analyze-spectrum", "spacing Laplacian and Phi~ spectra");
  spec_cmd->add_option("--n", spectrum.n, "number of agents")->capture_default_str();
  spec_cmd->add_option("--d", spectrum.d, "\"equal\", \"random\" or comma-separated radians")
      ->capture_default_str();
  spec_cmd->add_option("--seed", spectrum.seed, "seed for --d random")->capture_default_str();
  spec_cmd->add_option("--lambda1", spectrum.lambda1)->capture_default_str();
  spec_cmd->add_option("--lambda2", spectrum.lambda2)->capture_default_str();

  lcf::cli::StabilityOptions stab;
  auto *stab_cmd = app.add_subcommand("stability", "single-agent linearization and Routh analysis");
  stab_cmd->add_option("--omega", stab.omega)->capture_default_str();
  stab_cmd->add_option("--mu", stab.mu)->capture_default_str();
  stab_cmd->add_option("--R", stab.radius)->capture_default_str();
  stab_cmd->add_option("--sigma", stab.sigma)->capture_default_str();

  auto *acc_cmd = app.add_subcommand("acceptance", "run the acceptance criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lcf::cli::kExitConfigError;
  }

  if (*run_cmd) {
    if (*seed_opt) run.seed = seed;
    if (*dt_opt) run.dt = dt;
    if (*t_end_opt) run.t_end = t_end;
    return lcf::cli::cmd_run(run, std::cout, std::cerr);
  }
  if (*spec_cmd) return lcf::cli::cmd_analyze_spectrum(spectrum, std::cout, std::cerr);
  if (*stab_cmd) return lcf::cli::cmd_stability(stab, std::cout, std::cerr);
  if (*acc_cmd) return lcf::acceptance::run_all(std::cout) == 0 ? 0 : 1;
  return 0;
}
