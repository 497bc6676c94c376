#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "floodcast/cli/commands.hpp"

using namespace floodcast;
using namespace floodcast::cli;

namespace {

void add_predictor_flags(CLI::App &app, RunConfig &rc) {
  app.add_option("--flood-line", rc.flood_line, "Flood line in metres")
      ->check(CLI::PositiveNumber);
  app.add_option("--threshold", rc.threshold,
                 "Warning level that tightens sampling, in metres")
      ->check(CLI::PositiveNumber);
  app.add_option("--time-set", rc.time_set,
                 "Admissible sampling intervals in minutes, ascending")
      ->delimiter(',');
  app.add_option("--action-time", rc.action_time,
                 "Minimum lead time for an alarm, in minutes")
      ->check(CLI::PositiveNumber);
  app.add_option("--capacity", rc.capacity,
                 "Storage capacity in readings before consolidation")
      ->check(CLI::PositiveNumber);
  const std::map<std::string, WeightFunction> fns{
      {"bisquare", WeightFunction::Bisquare},
      {"andrews", WeightFunction::Andrews}};
  app.add_option("--weight-fn", rc.weight_fn, "Robust weight function")
      ->transform(CLI::CheckedTransformer(fns, CLI::ignore_case));
  app.add_option("--max-iter", rc.max_iter, "Robust fit iteration cap")
      ->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Flood forecasting with adaptive sampling"};
  app.require_subcommand(1);
  RunConfig rc;

  auto *fit = app.add_subcommand("fit", "Robust regression of level on the "
                                        "other columns of a readings CSV");
  fit->add_option("--input", rc.input, "Readings CSV")->required();
  fit->add_option("--out-dir", rc.out_dir, "Output directory");
  add_predictor_flags(*fit, rc);

  auto *forecast = app.add_subcommand(
      "forecast", "Replay a readings CSV through the predictor");
  forecast->add_option("--input", rc.input, "Readings CSV")->required();
  forecast->add_option("--history", rc.history,
                       "Readings CSV used to prime the model");
  forecast->add_option("--out-dir", rc.out_dir, "Output directory");
  add_predictor_flags(*forecast, rc);

  auto *simulate = app.add_subcommand(
      "simulate", "Run a sensor-network scenario end to end");
  simulate->add_option("--scenario", rc.scenario, "Scenario JSON file")
      ->required();
  simulate->add_option("--out-dir", rc.out_dir, "Output directory");
  simulate->add_option("--seed", rc.seed,
                       "Override the scenario seed (default " +
                           std::to_string(simnet::kDefaultSeed) + ")");
  add_predictor_flags(*simulate, rc);

  auto *report = app.add_subcommand(
      "report", "Recompute forecast metrics from a predictions CSV");
  report->add_option("--input", rc.input, "predictions.csv from forecast")
      ->required();
  report->add_option("--flood-line", rc.flood_line, "Flood line in metres")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  if (fit->parsed())
    rc.command = Command::Fit;
  else if (forecast->parsed())
    rc.command = Command::Forecast;
  else if (simulate->parsed())
    rc.command = Command::Simulate;
  else
    rc.command = Command::Report;
  return run_command(rc, std::cout, std::cerr);
}
