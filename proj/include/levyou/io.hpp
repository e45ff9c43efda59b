#pragma once

/**
 * @file io.hpp
 * @brief CSV files exchanged between the CLI subcommands.
 *
 *   path        t,y     t = i/M (or ISO timestamps for raw data series)
 *   increments  n,dl    n = 1..N
 *   acf         lag,acf
 */

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "levyou/car1_simulator.hpp"
#include "levyou/data_pipeline.hpp"
#include "levyou/errors.hpp"
#include "levyou/increment_recovery.hpp"

namespace levyou {

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::vector<std::string>> read_two_column_csv(std::istream& in, std::string_view first,
                                                                 std::string_view second) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  if (header.size() < 2 || lower(header[0]) != first || lower(header[1]) != second) {
    throw DataError("expected header '" + std::string(first) + "," + std::string(second) + "'");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (strip(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() < 2) throw DataError("row " + std::to_string(rows.size() + 1) + " has fewer than 2 fields");
    rows.push_back({std::string(f[0]), std::string(f[1])});
  }
  return rows;
}

inline double to_double(const std::string& s, std::size_t row) {
  const auto v = parse_price(s);
  if (!v) throw DataError("row " + std::to_string(row) + ": not a finite number: '" + s + "'");
  return *v;
}

}  // namespace detail

struct LoadedPath {
  Path path;
  std::vector<std::string> warnings;
};

/// Reads a `t,y` file. M comes from `per_period` or, when absent, from the
/// spacing of a numeric t column (M = round(1/(t_1 - t_0))). N is the largest
/// value with N*M + 1 <= rows; surplus trailing rows are ignored with a warning.
inline LoadedPath read_path_csv(std::istream& in, std::optional<std::size_t> per_period = std::nullopt) {
  const auto rows = detail::read_two_column_csv(in, "t", "y");
  if (rows.size() < 2) throw DataError("path file needs at least 2 rows");
  std::vector<double> y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) y[i] = detail::to_double(rows[i][1], i + 1);

  std::size_t m = 0;
  if (per_period) {
    m = *per_period;
  } else {
    const auto t0 = detail::parse_price(rows[0][0]);
    const auto t1 = detail::parse_price(rows[1][0]);
    if (!t0 || !t1 || !(*t1 > *t0)) {
      throw DataError("cannot infer M from the t column; pass the sampling frequency explicitly");
    }
    m = static_cast<std::size_t>(std::llround(1.0 / (*t1 - *t0)));
  }
  if (m < 1) throw DataError("sampling frequency M must be at least 1");
  const std::size_t n = periods_for_length(y.size(), m);
  if (n < 1) throw DataError("path has fewer than M + 1 points");
  LoadedPath out{to_path(y, SamplingGrid{n, m}).path, {}};
  if (n * m + 1 != y.size()) {
    out.warnings.push_back("using the first " + std::to_string(n * m + 1) + " of " + std::to_string(y.size()) +
                           " points (N=" + std::to_string(n) + ", M=" + std::to_string(m) + ")");
  }
  return out;
}

inline LoadedPath read_path_file(const std::string& file, std::optional<std::size_t> per_period = std::nullopt) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open '" + file + "'");
  return read_path_csv(in, per_period);
}

inline void write_path_csv(std::ostream& os, const Path& p) {
  os << "t,y\n";
  for (std::size_t i = 0; i < p.size(); ++i) os << detail::fmt17(p.time(i)) << ',' << detail::fmt17(p[i]) << '\n';
}

/// Raw timestamped series as `t,y` with ISO timestamps.
inline void write_series_csv(std::ostream& os, const Series& s) {
  os << "t,y\n";
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    os << format_timestamp(s.timestamps[i]) << ',' << detail::fmt17(s.values[i]) << '\n';
  }
}

inline void write_increments_csv(std::ostream& os, std::span<const double> dl) {
  os << "n,dl\n";
  for (std::size_t i = 0; i < dl.size(); ++i) os << (i + 1) << ',' << detail::fmt17(dl[i]) << '\n';
}

inline std::vector<double> read_increments_csv(std::istream& in) {
  const auto rows = detail::read_two_column_csv(in, "n", "dl");
  std::vector<double> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = detail::to_double(rows[i][1], i + 1);
  return out;
}

inline std::vector<double> read_increments_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open '" + file + "'");
  return read_increments_csv(in);
}

inline void write_acf_csv(std::ostream& os, std::span<const double> acf_values) {
  os << "lag,acf\n";
  for (std::size_t k = 0; k < acf_values.size(); ++k) os << k << ',' << detail::fmt17(acf_values[k]) << '\n';
}

}  // namespace levyou
