#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "varbound/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "varbound: variance-product uncertainty bounds for pairs of "
      "finite-dimensional observables"};
  app.require_subcommand(1);

  varbound::BoundsCommand bounds_cmd;
  std::string bounds_basis;
  auto* bounds = app.add_subcommand(
      "bounds", "Evaluate every bound for a scenario file");
  bounds->add_option("--scenario", bounds_cmd.scenario_path, "Scenario JSON")
      ->required();
  bounds->add_option("--basis", bounds_basis,
                     "Override the scenario basis mode (standard|optimized)")
      ->check(CLI::IsMember({"standard", "optimized"}));

  varbound::SweepCommand sweep_cmd;
  auto* sweep = app.add_subcommand(
      "sweep", "Evaluate bounds over a theta grid and write CSV");
  sweep->add_option("--scenario", sweep_cmd.scenario_path, "Scenario JSON")
      ->required();
  sweep->add_option("--theta-start", sweep_cmd.theta_start, "Grid start")
      ->required();
  sweep->add_option("--theta-end", sweep_cmd.theta_end, "Grid end")
      ->required();
  sweep->add_option("--steps", sweep_cmd.steps, "Grid points (>= 2)")
      ->required();
  sweep->add_option("--output", sweep_cmd.output_path, "Output CSV path")
      ->required();

  varbound::OptimizeCommand optimize_cmd;
  double optimize_lambda = 0.0;
  int optimize_restarts = 0;
  std::uint64_t optimize_seed = 0;
  auto* optimize = app.add_subcommand(
      "optimize", "Maximize a bound over orthonormal bases");
  optimize
      ->add_option("--scenario", optimize_cmd.scenario_path, "Scenario JSON")
      ->required();
  optimize->add_option("--kind", optimize_cmd.kind, "callebaut or milne")
      ->required()
      ->check(CLI::IsMember({"callebaut", "milne"}));
  auto* lambda_opt = optimize->add_option("--lambda", optimize_lambda,
                                          "Weight (callebaut only)");
  auto* restarts_opt =
      optimize->add_option("--restarts", optimize_restarts, "Restart count");
  auto* seed_opt = optimize->add_option("--seed", optimize_seed, "RNG seed");

  varbound::VerifyCommand verify_cmd;
  auto* verify = app.add_subcommand(
      "verify", "Run the independent cross-check suite");
  verify->add_option("--seed", verify_cmd.seed, "RNG seed")
      ->default_val(verify_cmd.seed);
  verify->add_option("--trials", verify_cmd.trials, "Randomized trial count")
      ->default_val(verify_cmd.trials);
  verify->add_flag("--inject-fault", verify_cmd.inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? varbound::kExitOk : varbound::kExitUsage;
  }

  if (bounds->parsed()) {
    if (!bounds_basis.empty()) {
      bounds_cmd.basis_override = bounds_basis == "optimized"
                                      ? varbound::BasisMode::kOptimized
                                      : varbound::BasisMode::kStandard;
    }
    return varbound::run_bounds(bounds_cmd, std::cout, std::cerr);
  }
  if (sweep->parsed()) {
    return varbound::run_sweep(sweep_cmd, std::cout, std::cerr);
  }
  if (optimize->parsed()) {
    if (lambda_opt->count() > 0) optimize_cmd.lambda = optimize_lambda;
    if (restarts_opt->count() > 0) optimize_cmd.restarts = optimize_restarts;
    if (seed_opt->count() > 0) optimize_cmd.seed = optimize_seed;
    return varbound::run_optimize(optimize_cmd, std::cout, std::cerr);
  }
  return varbound::run_verify(verify_cmd, std::cout, std::cerr);
}
