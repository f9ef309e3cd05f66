// hybent: macroscopic Bell states, separability bounds and the hybrid
// number-polarization entanglement witness from the command line.

#include <optional>

#include <CLI11.hpp>

#include "hybent/cli.hpp"

int main(int argc, char** argv) {
  using hybent::cli::RunConfig;

  CLI::App app{"Hybrid number-polarization entanglement toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--n-max", cfg.n_max, "Per-mode Fock cutoff")
        ->check(CLI::Range(0, 64));
    cmd->add_option("--subspace", cfg.subspace,
                    "Sector set: full, nonvacuum, or list like 1-4,6");
    cmd->add_option("--seed", cfg.seed, "RNG seed");
    cmd->add_option("--restarts", cfg.restarts, "Optimizer restarts")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", cfg.out_path, "Output file (default stdout)");
    cmd->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  // fig2
  double r_min = 0.0, r_max = 2.0;
  int steps = 201;
  CLI::App* fig2 = app.add_subcommand(
      "fig2", "Separability bounds versus squeezing (boundary curve data)");
  fig2->add_option("--r-min", r_min, "Lowest squeezing");
  fig2->add_option("--r-max", r_max, "Highest squeezing");
  fig2->add_option("--steps", steps, "Number of grid points");
  add_common(fig2);

  // witness
  std::string state_path;
  double r_arg = -1.0;
  CLI::App* witness =
      app.add_subcommand("witness", "Evaluate the hybrid witness on a state file");
  witness->add_option("state", state_path, "State file (JSON)")->required();
  witness->add_option("--r", r_arg,
                      "Reference squeezing (estimated from the state when absent)");
  add_common(witness);

  // oracle
  std::string oracle_kind;
  double oracle_r = 0.5;
  int oracle_sector = 1;
  int chain_trials = 200;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "Brute-force verification of the separability bounds");
  oracle->add_option("kind", oracle_kind, "number | polarization | sector | chain")
      ->required();
  oracle->add_option("--r", oracle_r, "Squeezing of the reference");
  oracle->add_option("--sector", oracle_sector, "Sector for kind=sector");
  oracle->add_option("--trials", chain_trials, "Random ansatz count for kind=chain");
  add_common(oracle);

  // noise-sweep
  std::string noise_param;
  double noise_r = 0.5;
  int noise_points = 11;
  CLI::App* noise = app.add_subcommand(
      "noise-sweep", "Witness value along a noise-channel parameter grid");
  noise->add_option("parameter", noise_param, "loss | visibility")->required();
  noise->add_option("--r", noise_r, "Squeezing of the clean state");
  noise->add_option("--points", noise_points, "Grid points in [0, 1]");
  add_common(noise);

  // observables
  std::string obs_path;
  std::string obs_party = "total";
  CLI::App* observables =
      app.add_subcommand("observables", "Stokes expectations and variances");
  observables->add_option("state", obs_path, "State file (JSON)")->required();
  observables->add_option("--party", obs_party, "alice | bob | total");
  add_common(observables);

  // make-state
  std::string make_kind;
  double make_r = 0.5;
  int make_sector = 1;
  double make_alpha = 1.0 / std::numbers::sqrt2;
  double make_beta = 1.0 / std::numbers::sqrt2;
  CLI::App* make = app.add_subcommand(
      "make-state", "Write a constructor state in the JSON schema");
  make->add_option("kind", make_kind,
                   "mbs | sector | tmsv | blind | cross-layer | beam-splitter")
      ->required();
  make->add_option("--r", make_r, "Squeezing parameter");
  make->add_option("--sector", make_sector, "Sector for kind=sector");
  make->add_option("--alpha", make_alpha, "First amplitude of exemplar states");
  make->add_option("--beta", make_beta, "Second amplitude of exemplar states");
  add_common(make);

  CLI11_PARSE(app, argc, argv);

  if (fig2->parsed()) return hybent::cli::cmd_fig2(r_min, r_max, steps, cfg);
  if (witness->parsed()) {
    std::optional<double> r;
    if (witness->count("--r") > 0) r = r_arg;
    return hybent::cli::cmd_witness(state_path, r, cfg);
  }
  if (oracle->parsed()) {
    return hybent::cli::cmd_oracle(oracle_kind, oracle_r, oracle_sector,
                                   chain_trials, cfg);
  }
  if (noise->parsed()) {
    return hybent::cli::cmd_noise_sweep(noise_param, noise_r, noise_points, cfg);
  }
  if (observables->parsed()) {
    return hybent::cli::cmd_observables(obs_path, obs_party, cfg);
  }
  if (make->parsed()) {
    return hybent::cli::cmd_make_state(make_kind, make_r, make_sector, make_alpha,
                                       make_beta, cfg);
  }
  return 0;
}
