// Command-line experiment runner.
//
//   ltc_run run --alg alg1 --d 5 --m 3 --T 1000,3162,10000 --seeds 1,2,3
//               --loss linear --R 1 --r 0.1 --out results [--trace]
//
// Exit codes: 0 success, 1 configuration error, 2 runtime or numerical error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ltc/errors.hpp"
#include "ltc/experiment.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online learning with long-term constraints: experiment runner"};
  app.require_subcommand(1);

  ltc::ExperimentConfig cfg;
  std::string alg = "alg1";
  std::string loss = "linear";
  std::string instance = "polyhedral";
  std::string out = "out";
  bool no_timing = false;

  CLI::App* run = app.add_subcommand("run", "Run one algorithm over a T grid and seed set");
  run->add_option("--alg", alg,
                  "alg1, alg1-zero, prox, prox-zero, bandit, ogd-proj, penalty-linear, "
                  "penalty-squared")
      ->required();
  run->add_option("--d", cfg.d, "Dimension")->capture_default_str();
  run->add_option("--m", cfg.m, "Number of constraints")->capture_default_str();
  run->add_option("--T", cfg.T_grid, "Comma-separated horizons, strictly increasing")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("--seeds", cfg.seeds, "Comma-separated seeds")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("--loss", loss, "linear or quadratic")->capture_default_str();
  run->add_option("--R", cfg.R, "Radius of the decision ball")->capture_default_str();
  run->add_option("--r", cfg.r, "Radius of the ball inside the feasible set")
      ->capture_default_str();
  run->add_option("--out", out, "Output directory")->capture_default_str();
  run->add_flag("--trace", cfg.trace, "Write per-round trace CSVs");
  run->add_option("--instance", instance, "polyhedral or theorem1")->capture_default_str();
  run->add_option("--grad-bound", cfg.grad_bound, "Bound on loss gradient norms")
      ->capture_default_str();
  run->add_option("--penalty-delta", cfg.penalty_delta, "Penalty weight of the penalty baselines")
      ->capture_default_str();
  run->add_flag("--no-timing", no_timing, "Write runtime_ms as 0 for byte-stable summaries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    cfg.algorithm = ltc::parse_algorithm(alg);
    cfg.loss_family = ltc::parse_loss_family(loss);
    cfg.instance = ltc::parse_instance_kind(instance);
    cfg.out_dir = out;
    cfg.timing = !no_timing;
    ltc::validate(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    ltc::run_experiment(cfg, std::cout);
  } catch (const ltc::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
