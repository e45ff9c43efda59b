#pragma once

/**
 * @file data_pipeline.hpp
 * @brief Price ingestion, pair log-spread, daily realized volatility, and
 *        mapping a raw series onto a SamplingGrid.
 *
 * Accepted price CSVs (header required, case-insensitive):
 *   timestamp,open,high,low,close     ISO-8601 timestamps
 *   timestamp,price
 *   date,time,open,high,low,close     vendor layout: date=YYYYMMDD, time=HHMM
 *
 * Calendar cleaning (weekends, holidays, partial sessions) is the caller's
 * job; only rows with a missing or nonpositive price are dropped here.
 */

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "levyou/car1_simulator.hpp"
#include "levyou/errors.hpp"

namespace levyou {

/// Seconds since 1970-01-01T00:00:00 (no time zone handling).
using Timestamp = std::int64_t;

inline constexpr Timestamp kSecondsPerDay = 86400;

struct PriceSeries {
  std::vector<Timestamp> timestamps;
  std::vector<double> prices;

  std::size_t size() const { return prices.size(); }
  friend bool operator==(const PriceSeries&, const PriceSeries&) = default;
};

struct LoadReport {
  std::size_t rows = 0;        ///< data rows read
  std::size_t dropped = 0;     ///< missing or nonpositive price
  std::size_t duplicates = 0;  ///< earlier rows replaced by a later row with the same timestamp
  bool resorted = false;
  std::vector<std::string> warnings;
};

struct LoadedPrices {
  PriceSeries series;
  LoadReport report;
};

namespace detail {

inline Timestamp civil_to_seconds(int y, unsigned mo, unsigned d, int hh, int mm, int ss) {
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok()) throw DataError("invalid calendar date");
  if (hh < 0 || hh > 23 || mm < 0 || mm > 59 || ss < 0 || ss > 60) throw DataError("invalid time of day");
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<Timestamp>(days) * kSecondsPerDay + hh * 3600 + mm * 60 + ss;
}

inline bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

inline int to_int(std::string_view s) {
  if (!all_digits(s)) throw DataError("expected digits, got '" + std::string(s) + "'");
  return std::stoi(std::string(s));
}

inline std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(strip(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::optional<double> parse_price(std::string_view s) {
  if (s.empty()) return std::nullopt;
  const std::string str(s);
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (end != str.c_str() + str.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS]" or "YYYY-MM-DD HH:MM[:SS]",
/// with an optional trailing 'Z'.
inline Timestamp parse_timestamp(std::string_view s) {
  using detail::to_int;
  s = detail::strip(s);
  if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.remove_suffix(1);
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') throw DataError("unparseable timestamp '" + std::string(s) + "'");
  try {
    const int y = to_int(s.substr(0, 4));
    const int mo = to_int(s.substr(5, 2));
    const int d = to_int(s.substr(8, 2));
    int hh = 0, mm = 0, ss = 0;
    if (s.size() > 10) {
      if ((s[10] != 'T' && s[10] != ' ') || s.size() < 16 || s[13] != ':') throw DataError("bad time part");
      hh = to_int(s.substr(11, 2));
      mm = to_int(s.substr(14, 2));
      if (s.size() > 16) {
        if (s[16] != ':' || s.size() != 19) throw DataError("bad seconds part");
        ss = to_int(s.substr(17, 2));
      }
    }
    return detail::civil_to_seconds(y, static_cast<unsigned>(mo), static_cast<unsigned>(d), hh, mm, ss);
  } catch (const DataError&) {
    throw DataError("unparseable timestamp '" + std::string(s) + "'");
  }
}

/// Vendor layout: integer date YYYYMMDD and minute-of-day as HHMM (e.g. 930).
inline Timestamp parse_vendor_timestamp(std::string_view date, std::string_view hhmm) {
  date = detail::strip(date);
  hhmm = detail::strip(hhmm);
  if (date.size() != 8 || !detail::all_digits(date) || !detail::all_digits(hhmm) || hhmm.size() > 4) {
    throw DataError("unparseable vendor timestamp '" + std::string(date) + "," + std::string(hhmm) + "'");
  }
  const int d = detail::to_int(date);
  const int t = detail::to_int(hhmm);
  try {
    return detail::civil_to_seconds(d / 10000, static_cast<unsigned>(d / 100 % 100), static_cast<unsigned>(d % 100),
                                    t / 100, t % 100, 0);
  } catch (const DataError&) {
    throw DataError("unparseable vendor timestamp '" + std::string(date) + "," + std::string(hhmm) + "'");
  }
}

/// ISO-8601 "YYYY-MM-DDTHH:MM:SS".
inline std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  Timestamp days = t / kSecondsPerDay;
  Timestamp rem = t % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), static_cast<int>(rem / 3600),
                static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
  return buf;
}

/// Reads a price CSV. `column` picks the price column (default close; a file
/// with only a `price` column uses it regardless). Rows with a blank,
/// unparseable or nonpositive price are dropped and counted. Rows are then
/// stably sorted by timestamp, and for repeated timestamps the later row in
/// file order wins.
inline LoadedPrices load_prices(std::istream& in, std::string_view column = "close") {
  std::string line;
  if (!std::getline(in, line)) throw DataError("price file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_csv(line);
  std::vector<std::string> names;
  for (auto h : header) names.push_back(detail::lower(h));
  auto find = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return i;
    }
    return std::nullopt;
  };

  const auto ts_col = find("timestamp");
  const auto date_col = find("date");
  const auto time_col = find("time");
  if (!ts_col && !(date_col && time_col)) {
    throw DataError("price file header needs a 'timestamp' column or 'date' and 'time' columns");
  }
  auto price_col = find(detail::lower(column));
  if (!price_col) price_col = find("price");
  if (!price_col) throw DataError("price file has no '" + std::string(column) + "' or 'price' column");

  struct Row {
    Timestamp t;
    double p;
  };
  std::vector<Row> rows;
  LoadReport report;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::strip(line).empty()) continue;
    ++report.rows;
    const auto fields = detail::split_csv(line);
    auto field = [&](std::size_t i) { return i < fields.size() ? fields[i] : std::string_view{}; };
    Timestamp t = 0;
    try {
      t = ts_col ? parse_timestamp(field(*ts_col)) : parse_vendor_timestamp(field(*date_col), field(*time_col));
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    }
    const auto p = detail::parse_price(field(*price_col));
    if (!p || !(*p > 0.0)) {
      ++report.dropped;
      continue;
    }
    rows.push_back({t, *p});
  }
  if (rows.empty()) throw DataError("price file has no valid rows");

  if (!std::is_sorted(rows.begin(), rows.end(), [](const Row& x, const Row& y) { return x.t < y.t; })) {
    report.resorted = true;
    report.warnings.push_back("timestamps not monotone; rows sorted by timestamp");
    std::stable_sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) { return x.t < y.t; });
  }
  LoadedPrices out;
  for (const auto& r : rows) {
    if (!out.series.timestamps.empty() && out.series.timestamps.back() == r.t) {
      out.series.prices.back() = r.p;
      ++report.duplicates;
      continue;
    }
    out.series.timestamps.push_back(r.t);
    out.series.prices.push_back(r.p);
  }
  if (report.duplicates > 0) {
    report.warnings.push_back(std::to_string(report.duplicates) + " duplicate timestamp(s); later rows kept");
  }
  if (report.dropped > 0) {
    report.warnings.push_back(std::to_string(report.dropped) + " row(s) with missing or nonpositive price dropped");
  }
  out.report = std::move(report);
  return out;
}

inline LoadedPrices load_prices_file(const std::string& path, std::string_view column = "close") {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return load_prices(in, column);
}

/// Writes `timestamp,price`; load_prices reads it back unchanged.
inline void write_prices(std::ostream& os, const PriceSeries& s) {
  os << "timestamp,price\n";
  char buf[40];
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", s.prices[i]);
    os << format_timestamp(s.timestamps[i]) << ',' << buf << '\n';
  }
}

/// A timestamped real series (spread, realized volatility).
struct Series {
  std::vector<Timestamp> timestamps;
  std::vector<double> values;
};

/// Y_t = ln(S_A(t)/S_A(0)) - ln(S_B(t)/S_B(0)) on the timestamps present in
/// both series; t = 0 is the first common timestamp.
inline Series pair_spread(const PriceSeries& a, const PriceSeries& b) {
  if (a.size() == 0 || b.size() == 0) throw DataError("pair_spread: empty price series");
  Series out;
  std::size_t i = 0, j = 0;
  std::optional<double> log_a0, log_b0;
  while (i < a.size() && j < b.size()) {
    if (a.timestamps[i] < b.timestamps[j]) {
      ++i;
    } else if (b.timestamps[j] < a.timestamps[i]) {
      ++j;
    } else {
      const double la = std::log(a.prices[i]);
      const double lb = std::log(b.prices[j]);
      if (!log_a0) {
        log_a0 = la;
        log_b0 = lb;
      }
      out.timestamps.push_back(a.timestamps[i]);
      out.values.push_back((la - *log_a0) - (lb - *log_b0));
      ++i;
      ++j;
    }
  }
  if (out.values.empty()) throw DataError("pair_spread: the two series share no timestamps");
  return out;
}

struct DailyReturns {
  std::vector<Timestamp> days;  ///< midnight of each day
  std::vector<std::vector<double>> returns;
};

/// Log-price returns between consecutive interval marks within each day. Only
/// observations whose timestamp is a multiple of `interval_seconds` count as
/// marks; a day with fewer than two marks has no returns.
inline DailyReturns intraday_returns(const PriceSeries& s, Timestamp interval_seconds) {
  if (interval_seconds <= 0) throw DomainError("intraday_returns: interval must be positive");
  DailyReturns out;
  std::optional<Timestamp> current_day;
  std::optional<double> last_log;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Timestamp t = s.timestamps[i];
    if (((t % interval_seconds) + interval_seconds) % interval_seconds != 0) continue;
    Timestamp day = t / kSecondsPerDay;
    if (t < 0 && t % kSecondsPerDay != 0) --day;
    if (!current_day || *current_day != day) {
      current_day = day;
      out.days.push_back(day * kSecondsPerDay);
      out.returns.emplace_back();
      last_log.reset();
    }
    const double lp = std::log(s.prices[i]);
    if (last_log) out.returns.back().push_back(lp - *last_log);
    last_log = lp;
  }
  return out;
}

/// RV = sqrt(sum r^2) per day. Days without returns are skipped and listed in
/// `warnings` when given.
inline std::vector<double> realized_volatility(const std::vector<std::vector<double>>& returns_by_day,
                                               std::vector<std::string>* warnings = nullptr) {
  std::vector<double> rv;
  rv.reserve(returns_by_day.size());
  for (std::size_t d = 0; d < returns_by_day.size(); ++d) {
    const auto& day = returns_by_day[d];
    if (day.empty()) {
      if (warnings) warnings->push_back("day " + std::to_string(d) + " has no returns; skipped");
      continue;
    }
    double ss = 0.0;
    for (double r : day) {
      if (!std::isfinite(r)) throw DataError("realized_volatility: non-finite return");
      ss += r * r;
    }
    rv.push_back(std::sqrt(ss));
  }
  return rv;
}

struct RealizedVolatilitySeries {
  Series series;
  std::vector<std::string> warnings;
};

inline RealizedVolatilitySeries realized_volatility(const DailyReturns& daily) {
  RealizedVolatilitySeries out;
  for (std::size_t d = 0; d < daily.days.size(); ++d) {
    const auto& day = daily.returns[d];
    if (day.empty()) {
      out.warnings.push_back(format_timestamp(daily.days[d]).substr(0, 10) + " has no returns; skipped");
      continue;
    }
    double ss = 0.0;
    for (double r : day) ss += r * r;
    out.series.timestamps.push_back(daily.days[d]);
    out.series.values.push_back(std::sqrt(ss));
  }
  return out;
}

struct PathMapping {
  std::size_t available = 0;  ///< input length
  std::size_t stride = 1;
  std::size_t used = 0;  ///< N*M + 1 points taken: indices 0, stride, 2*stride, ...
};

struct MappedPath {
  Path path;
  PathMapping mapping;
};

/// Relabels a raw series onto the grid i/M. stride = floor(len / (N M + 1));
/// the points at 0, stride, 2 stride, ... are taken (stride 1 keeps the first
/// N M + 1 points).
inline MappedPath to_path(std::span<const double> series, const SamplingGrid& grid) {
  validate(grid);
  const std::size_t need = grid.points();
  if (series.size() < need) {
    throw DataError("series has " + std::to_string(series.size()) + " points; grid needs " + std::to_string(need));
  }
  PathMapping map{series.size(), series.size() / need, need};
  std::vector<double> values(need);
  for (std::size_t i = 0; i < need; ++i) values[i] = series[i * map.stride];
  return {Path(grid, std::move(values)), map};
}

/// Largest N with N*M + 1 <= len.
inline std::size_t periods_for_length(std::size_t len, std::size_t per_period) {
  if (per_period < 1) throw DomainError("per_period must be positive");
  return len == 0 ? 0 : (len - 1) / per_period;
}

}  // namespace levyou
