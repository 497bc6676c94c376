#pragma once

// Command implementations behind the floodcast executable. Each returns the
// process exit status: 0 on success, 2 when an alarm was raised, 1 on any
// error (with a diagnostic on the error stream).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "floodcast/cli/artifacts.hpp"
#include "floodcast/cli/csv.hpp"
#include "floodcast/error.hpp"
#include "floodcast/format.hpp"
#include "floodcast/predictor.hpp"
#include "floodcast/regression.hpp"
#include "floodcast/simnet.hpp"

namespace floodcast::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAlarm = 2;

enum class Command { Fit, Forecast, Simulate, Report };

struct RunConfig {
  Command command = Command::Forecast;
  std::string input;
  std::string history;
  std::string scenario;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> flood_line;
  std::optional<double> threshold;
  std::optional<std::vector<double>> time_set;
  std::optional<double> action_time;
  std::optional<std::size_t> capacity;
  std::optional<WeightFunction> weight_fn;
  std::optional<int> max_iter;
};

inline void apply_overrides(const RunConfig &rc, PredictorConfig &pc) {
  if (rc.flood_line)
    pc.flood_line = *rc.flood_line;
  if (rc.threshold)
    pc.threshold = *rc.threshold;
  if (rc.time_set)
    pc.time_set.intervals = *rc.time_set;
  if (rc.action_time)
    pc.time_set.action_time = *rc.action_time;
  if (rc.capacity)
    pc.capacity = *rc.capacity;
  if (rc.weight_fn)
    pc.robust.weight_function = *rc.weight_fn;
  if (rc.max_iter)
    pc.robust.max_iterations = *rc.max_iter;
}

inline std::ofstream open_output(const std::filesystem::path &dir,
                                 const std::string &name) {
  std::ofstream out(dir / name);
  if (!out)
    throw InvalidInput((dir / name).string() + ": cannot write");
  return out;
}

inline std::string optional_cell(const std::optional<double> &v) {
  return v ? format_number(*v) : std::string();
}

inline void write_predictions(std::ostream &os,
                              const std::vector<PredictionOutput> &outputs) {
  os << "t_min,level_m,predicted_m,calibrating,flood_predicted,flood_in_min,"
        "alarm,threshold_crossed,next_interval_min\n";
  for (const auto &o : outputs)
    os << format_number(o.t) << ',' << format_number(o.measured_level) << ','
       << optional_cell(o.predicted_level) << ',' << o.calibrating << ','
       << o.flood_predicted << ',' << optional_cell(o.predicted_flood_in)
       << ',' << o.alarm << ',' << o.threshold_crossed << ','
       << format_number(o.next_interval) << '\n';
}

/// Prediction rows recovered from a predictions file, enough to recompute
/// the metrics.
inline std::vector<PredictionOutput> read_predictions(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InvalidInput(path + ": cannot open predictions file");
  std::string text;
  std::size_t line = 0;
  std::vector<PredictionOutput> out;
  while (std::getline(in, text)) {
    ++line;
    if (line == 1 || trim(text).empty())
      continue;
    const auto f = split_fields(text);
    if (f.size() != 9)
      throw ParseError(path, line, std::min<std::size_t>(f.size(), 9) + 1,
                       "expected 9 fields");
    PredictionOutput o;
    o.t = parse_number(f[0], path, line, 1);
    o.measured_level = parse_number(f[1], path, line, 2);
    if (!f[2].empty())
      o.predicted_level = parse_number(f[2], path, line, 3);
    o.calibrating = f[3] == "1";
    o.flood_predicted = f[4] == "1";
    if (!f[5].empty())
      o.predicted_flood_in = parse_number(f[5], path, line, 6);
    o.alarm = f[6] == "1";
    o.threshold_crossed = f[7] == "1";
    o.next_interval = parse_number(f[8], path, line, 9);
    out.push_back(o);
  }
  if (out.empty())
    throw EmptyInput(path);
  return out;
}

inline void write_forecast_artifacts(const std::filesystem::path &dir,
                                     const std::vector<PredictionOutput> &outs,
                                     const ForecastMetrics &metrics) {
  std::filesystem::create_directories(dir);
  auto predictions = open_output(dir, "predictions.csv");
  write_predictions(predictions, outs);

  auto errors = open_output(dir, "errors.csv");
  errors << "t_min,error_m,error_pct\n";
  PlotSeries actual{"actual", "#1f4e9c", {}, {}};
  PlotSeries predicted{"predicted", "#d0481b", {}, {}};
  PlotSeries err{"error_pct", "#2b7a3d", {}, {}};
  for (const auto &o : outs) {
    actual.x.push_back(o.t);
    actual.y.push_back(o.measured_level);
    if (!o.predicted_level)
      continue;
    const double e = *o.predicted_level - o.measured_level;
    const double pct = 100.0 * std::abs(e) / metrics.flood_line;
    errors << format_number(o.t) << ',' << format_number(e) << ','
           << format_number(pct) << '\n';
    predicted.x.push_back(o.t);
    predicted.y.push_back(*o.predicted_level);
    err.x.push_back(o.t);
    err.y.push_back(pct);
  }

  auto alarms = open_output(dir, "alarms.csv");
  alarms << "t_min,level_m,flood_in_min\n";
  for (const auto &o : outs)
    if (o.alarm)
      alarms << format_number(o.t) << ',' << format_number(o.measured_level)
             << ',' << optional_cell(o.predicted_flood_in) << '\n';

  auto m = open_output(dir, "metrics.txt");
  write_metrics(m, metrics);

  auto levels_svg = open_output(dir, "levels.svg");
  write_svg(levels_svg, {"Actual and predicted water level", "time (min)",
                         "level (m)", {actual, predicted},
                         metrics.flood_line});
  auto errors_svg = open_output(dir, "errors.svg");
  write_svg(errors_svg, {"Prediction error as a percentage of the flood line",
                         "time (min)", "error (%)", {err}, std::nullopt});
}

inline int forecast_command(const RunConfig &rc, std::ostream &out,
                            std::ostream &err) {
  try {
    if (rc.input.empty())
      throw InvalidInput("forecast needs --input");
    const auto table = ingest_readings(rc.input);
    PredictorConfig pc;
    apply_overrides(rc, pc);
    Predictor predictor(pc);
    if (!rc.history.empty())
      predictor.prime(ingest_readings(rc.history).readings);

    std::vector<PredictionOutput> outs;
    for (const auto &r : table.readings)
      outs.push_back(predictor.step(r));
    const auto metrics = compute_metrics(outs, pc.flood_line);
    write_forecast_artifacts(rc.out_dir, outs, metrics);
    write_metrics(out, metrics);
    return metrics.alarm_outputs > 0 ? kExitAlarm : kExitOk;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

inline int report_command(const RunConfig &rc, std::ostream &out,
                          std::ostream &err) {
  try {
    if (rc.input.empty())
      throw InvalidInput("report needs --input pointing at predictions.csv");
    const auto outs = read_predictions(rc.input);
    write_metrics(out, compute_metrics(outs, rc.flood_line.value_or(25.0)));
    return kExitOk;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

inline int fit_command(const RunConfig &rc, std::ostream &out,
                       std::ostream &err) {
  try {
    if (rc.input.empty())
      throw InvalidInput("fit needs --input");
    const auto table = ingest_readings(rc.input);
    PredictorConfig pc;
    apply_overrides(rc, pc);
    pc.robust.validate();
    std::vector<std::vector<double>> params;
    std::vector<double> y;
    for (const auto &r : table.readings) {
      params.push_back(r.parameters());
      y.push_back(r.level);
    }
    const auto fit =
        robust_fit(DesignMatrix::from_parameters(params), y, pc.robust);

    std::filesystem::create_directories(rc.out_dir);
    auto file = open_output(rc.out_dir, "fit.txt");
    for (std::ostream *os : {static_cast<std::ostream *>(&file), &out}) {
      *os << "rows=" << table.readings.size() << '\n'
          << "weight_fn=" << to_string(pc.robust.weight_function) << '\n'
          << "intercept=" << format_number(fit.coefficients[0]) << '\n';
      for (std::size_t j = 1; j < fit.coefficients.size(); ++j)
        *os << "coef_" << table.columns[j + 1] << '='
            << format_number(fit.coefficients[j]) << '\n';
      *os << "iterations=" << fit.iterations << '\n'
          << "converged=" << fit.converged << '\n'
          << "robust_scale=" << format_number(fit.robust_scale) << '\n';
    }
    return kExitOk;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

inline void write_simulation_artifacts(const std::filesystem::path &dir,
                                       const simnet::Network &net,
                                       const simnet::SimTrace &trace) {
  using simnet::to_minutes;
  std::filesystem::create_directories(dir);
  auto t = open_output(dir, "trace.log");
  simnet::write_trace(t, trace);

  auto energy = open_output(dir, "energy.csv");
  energy << "node,kind,zone,energy_mj\n";
  for (const auto &n : net.nodes)
    energy << n.id << ',' << to_string(n.kind) << ',' << n.zone << ','
           << format_number(trace.final_energy(n.id)) << '\n';

  auto alarms = open_output(dir, "alarms.csv");
  alarms << "t_min,zone,source,reading_t_min,flood_in_min\n";
  for (const auto &a : trace.alarms)
    alarms << format_number(to_minutes(a.tick)) << ',' << a.zone << ','
           << a.source << ',' << format_number(a.reading_t) << ','
           << format_number(a.predicted_flood_in) << '\n';

  auto preds = open_output(dir, "predictions.csv");
  preds << "node,zone,t_min,reading_t_min,level_m,predicted_m,alarm\n";
  for (const auto &p : trace.predictions)
    preds << p.node << ',' << p.zone << ','
          << format_number(to_minutes(p.tick)) << ','
          << format_number(p.reading.t) << ','
          << format_number(p.reading.level) << ','
          << optional_cell(p.output.predicted_level) << ',' << p.output.alarm
          << '\n';

  auto failures = open_output(dir, "failures.csv");
  failures << "node,t_min\n";
  for (const auto &f : trace.failures)
    failures << f.node << ',' << format_number(f.t) << '\n';

  auto summary = open_output(dir, "summary.txt");
  summary << "events=" << trace.events.size() << '\n'
          << "messages_sent=" << trace.messages.sent << '\n'
          << "messages_delivered=" << trace.messages.delivered << '\n'
          << "messages_dropped=" << trace.messages.dropped << '\n'
          << "messages_in_flight=" << trace.messages.in_flight << '\n'
          << "predictions=" << trace.predictions.size() << '\n'
          << "alarms=" << trace.alarms.size() << '\n'
          << "failures=" << trace.failures.size() << '\n';
}

inline int simulate_command(const RunConfig &rc, std::ostream &out,
                            std::ostream &err) {
  try {
    if (rc.scenario.empty())
      throw InvalidInput("simulate needs --scenario");
    auto scenario = simnet::load_scenario(rc.scenario);
    if (rc.seed)
      scenario.seed = *rc.seed;
    apply_overrides(rc, scenario.predictor);
    const auto net = simnet::build_topology(scenario);
    const auto trace = simnet::run_simulation(net, scenario);
    write_simulation_artifacts(rc.out_dir, net, trace);
    out << "events=" << trace.events.size() << '\n'
        << "predictions=" << trace.predictions.size() << '\n'
        << "alarms=" << trace.alarms.size() << '\n'
        << "failures=" << trace.failures.size() << '\n';
    return trace.alarms.empty() ? kExitOk : kExitAlarm;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

inline int run_command(const RunConfig &rc, std::ostream &out,
                       std::ostream &err) {
  switch (rc.command) {
  case Command::Fit:
    return fit_command(rc, out, err);
  case Command::Forecast:
    return forecast_command(rc, out, err);
  case Command::Simulate:
    return simulate_command(rc, out, err);
  case Command::Report:
    return report_command(rc, out, err);
  }
  return kExitError;
}

} // namespace floodcast::cli
