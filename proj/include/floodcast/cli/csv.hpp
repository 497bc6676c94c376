#pragma once

// Readings CSV: header `t_min,level_m,rainfall_mmhr,discharge_m3s` followed
// by any number of extra named parameter columns.

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "floodcast/error.hpp"
#include "floodcast/format.hpp"
#include "floodcast/reading.hpp"

namespace floodcast::cli {

inline constexpr std::array<std::string_view, 4> kFixedColumns{
    "t_min", "level_m", "rainfall_mmhr", "discharge_m3s"};

struct ReadingTable {
  std::vector<std::string> columns;
  std::vector<Reading> readings;
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos)
      return out;
    start = comma + 1;
  }
}

inline double parse_number(std::string_view field, const std::string &file,
                           std::size_t line, std::size_t column) {
  double v = 0.0;
  const auto *begin = field.data();
  const auto *end = field.data() + field.size();
  if (!field.empty() && *begin == '+')
    ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ParseError(file, line, column,
                     "expected a finite number, got '" + std::string(field) +
                         "'");
  return v;
}

inline ReadingTable parse_readings(std::istream &in, const std::string &file) {
  ReadingTable table;
  std::string text;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line_no;
    if (trim(text).empty())
      continue;
    const auto fields = split_fields(text);
    if (!have_header) {
      if (fields.size() < kFixedColumns.size())
        throw ParseError(file, line_no, fields.size() + 1,
                         "header needs columns t_min,level_m,rainfall_mmhr,"
                         "discharge_m3s");
      std::set<std::string> seen;
      for (std::size_t c = 0; c < fields.size(); ++c) {
        if (c < kFixedColumns.size() && fields[c] != kFixedColumns[c])
          throw ParseError(file, line_no, c + 1,
                           "expected column '" +
                               std::string(kFixedColumns[c]) + "'");
        if (fields[c].empty() || !seen.insert(std::string(fields[c])).second)
          throw ParseError(file, line_no, c + 1,
                           "column names must be non-empty and unique");
        table.columns.emplace_back(fields[c]);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != table.columns.size())
      throw ParseError(file, line_no,
                       std::min(fields.size(), table.columns.size()) + 1,
                       "expected " + std::to_string(table.columns.size()) +
                           " fields, found " + std::to_string(fields.size()));
    Reading r;
    r.t = parse_number(fields[0], file, line_no, 1);
    r.level = parse_number(fields[1], file, line_no, 2);
    r.rainfall = parse_number(fields[2], file, line_no, 3);
    r.discharge = parse_number(fields[3], file, line_no, 4);
    for (std::size_t c = kFixedColumns.size(); c < fields.size(); ++c)
      r.extras.push_back(
          {table.columns[c], parse_number(fields[c], file, line_no, c + 1)});
    if (!table.readings.empty() && !(r.t > table.readings.back().t))
      throw NonMonotoneTime(file, line_no);
    table.readings.push_back(std::move(r));
  }
  if (table.readings.empty())
    throw EmptyInput(file);
  return table;
}

inline ReadingTable ingest_readings(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InvalidInput(path + ": cannot open readings file");
  return parse_readings(in, path);
}

inline void write_readings(std::ostream &os, const std::vector<Reading> &rows) {
  os << "t_min,level_m,rainfall_mmhr,discharge_m3s";
  if (!rows.empty())
    for (const auto &x : rows.front().extras)
      os << ',' << x.name;
  os << '\n';
  for (const auto &r : rows) {
    os << format_number(r.t) << ',' << format_number(r.level) << ','
       << format_number(r.rainfall) << ',' << format_number(r.discharge);
    for (const auto &x : r.extras)
      os << ',' << format_number(x.value);
    os << '\n';
  }
}

} // namespace floodcast::cli
