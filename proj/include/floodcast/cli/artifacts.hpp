#pragma once

// Forecast metrics (flat key=value text) and SVG line plots that carry their
// data values as attributes.

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "floodcast/format.hpp"
#include "floodcast/predictor.hpp"

namespace floodcast::cli {

struct ForecastMetrics {
  std::size_t readings = 0;
  std::size_t predicted = 0;
  double flood_line = 25.0;
  std::optional<double> mean_error_pct;
  std::optional<double> max_error_pct;
  std::optional<double> wrms_error_pct;
  std::optional<double> rms_error_pct;
  std::size_t alarm_outputs = 0;
  std::size_t alarm_episodes = 0;
  std::optional<double> first_alarm_t;
};

/// Signed prediction error L^ - L for every output that has a prediction.
inline std::vector<double> prediction_errors(
    const std::vector<PredictionOutput> &outputs) {
  std::vector<double> e;
  for (const auto &o : outputs)
    if (o.predicted_level)
      e.push_back(*o.predicted_level - o.measured_level);
  return e;
}

inline ForecastMetrics
compute_metrics(const std::vector<PredictionOutput> &outputs,
                double flood_line) {
  ForecastMetrics m;
  m.readings = outputs.size();
  m.flood_line = flood_line;
  const auto errors = prediction_errors(outputs);
  m.predicted = errors.size();
  if (!errors.empty()) {
    double sum = 0.0, worst = 0.0;
    for (double e : errors) {
      const double pct = 100.0 * std::abs(e) / flood_line;
      sum += pct;
      worst = std::max(worst, pct);
    }
    m.mean_error_pct = sum / static_cast<double>(errors.size());
    m.max_error_pct = worst;
    m.wrms_error_pct = 100.0 * weighted_rms_error(errors).wrms / flood_line;
    m.rms_error_pct = 100.0 * rms(errors) / flood_line;
  }
  bool previous = false;
  for (const auto &o : outputs) {
    if (o.alarm) {
      ++m.alarm_outputs;
      if (!previous)
        ++m.alarm_episodes;
      if (!m.first_alarm_t)
        m.first_alarm_t = o.t;
    }
    previous = o.alarm;
  }
  return m;
}

inline void write_metrics(std::ostream &os, const ForecastMetrics &m) {
  auto opt = [](const std::optional<double> &v) {
    return v ? format_number(*v) : std::string("none");
  };
  os << "readings=" << m.readings << '\n'
     << "predicted=" << m.predicted << '\n'
     << "flood_line_m=" << format_number(m.flood_line) << '\n'
     << "mean_error_pct=" << opt(m.mean_error_pct) << '\n'
     << "max_error_pct=" << opt(m.max_error_pct) << '\n'
     << "wrms_error_pct=" << opt(m.wrms_error_pct) << '\n'
     << "rms_error_pct=" << opt(m.rms_error_pct) << '\n'
     << "alarm_outputs=" << m.alarm_outputs << '\n'
     << "alarm_episodes=" << m.alarm_episodes << '\n'
     << "first_alarm_t_min=" << opt(m.first_alarm_t) << '\n';
}

inline std::map<std::string, std::string> read_key_values(std::istream &in) {
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos)
      out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

struct PlotSeries {
  std::string name;
  std::string colour;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::optional<double> reference; // horizontal line, e.g. the flood line
};

inline std::string join_numbers(const std::vector<double> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      s += ' ';
    s += format_number(v[i]);
  }
  return s;
}

/// Each series becomes a polyline with `data-x` and `data-y` attributes
/// holding the exact plotted values.
inline void write_svg(std::ostream &os, const PlotSpec &plot) {
  constexpr double width = 720, height = 400, left = 70, right = 20,
                   top = 40, bottom = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0,
         y1 = -x0;
  for (const auto &s : plot.series) {
    for (double v : s.x) {
      x0 = std::min(x0, v);
      x1 = std::max(x1, v);
    }
    for (double v : s.y) {
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  }
  if (plot.reference) {
    y0 = std::min(y0, *plot.reference);
    y1 = std::max(y1, *plot.reference);
  }
  if (!std::isfinite(x0)) {
    x0 = 0;
    x1 = 1;
    y0 = 0;
    y1 = 1;
  }
  if (x1 == x0)
    x1 = x0 + 1;
  if (y1 == y0)
    y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto sx = [&](double v) {
    return left + (v - x0) / (x1 - x0) * (width - left - right);
  };
  auto sy = [&](double v) {
    return height - bottom - (v - y0) / (y1 - y0) * (height - top - bottom);
  };
  auto px = [](double v) { return format_number(std::round(v * 10) / 10); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
     << height << "\">\n"
     << "<title>" << plot.title << "</title>\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n"
     << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"15\">" << plot.title
     << "</text>\n"
     << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\""
     << width - right << "\" y2=\"" << height - bottom
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
     << "\" y2=\"" << height - bottom << "\" stroke=\"black\"/>\n"
     << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"12\">" << plot.x_label << "</text>\n"
     << "<text x=\"16\" y=\"" << height / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"12\" transform=\"rotate(-90 16 " << height / 2 << ")\">"
     << plot.y_label << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    os << "<text x=\"" << px(sx(xv)) << "\" y=\"" << height - bottom + 16
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"10\">" << format_number(std::round(xv * 100) / 100)
       << "</text>\n"
       << "<text x=\"" << left - 6 << "\" y=\"" << px(sy(yv) + 3)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
       << "font-size=\"10\">" << format_number(std::round(yv * 100) / 100)
       << "</text>\n";
  }
  if (plot.reference)
    os << "<line id=\"reference\" data-y=\"" << format_number(*plot.reference)
       << "\" x1=\"" << left << "\" y1=\"" << px(sy(*plot.reference))
       << "\" x2=\"" << width - right << "\" y2=\""
       << px(sy(*plot.reference))
       << "\" stroke=\"grey\" stroke-dasharray=\"6 4\"/>\n";
  double legend_y = top + 4;
  for (const auto &s : plot.series) {
    os << "<polyline id=\"series-" << s.name << "\" data-x=\""
       << join_numbers(s.x) << "\" data-y=\"" << join_numbers(s.y)
       << "\" fill=\"none\" stroke=\"" << s.colour
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      os << (i ? " " : "") << px(sx(s.x[i])) << ',' << px(sy(s.y[i]));
    os << "\"/>\n"
       << "<text x=\"" << width - right - 4 << "\" y=\"" << legend_y + 10
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
       << "fill=\"" << s.colour << "\">" << s.name << "</text>\n";
    legend_y += 14;
  }
  os << "</svg>\n";
}

} // namespace floodcast::cli
