#pragma once

/** @file
 * CSV ingestion of an equally spaced time series.
 *
 * The file needs a header line.  The first column is the time index: plain
 * numbers, or ISO dates written as YYYY, YYYY-MM or YYYY-MM-DD.  Dates that
 * all fall on the same day of the month are spaced in months, other full
 * dates in days.  The spacing has to be uniform to a relative 1e-9.
 */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace pcfgn {

enum class TimeFormat { Numeric, Year, YearMonth, Date };

struct TimeSeries {
  std::vector<std::string> time_labels;  ///< time column as written
  std::vector<double> time;              ///< numeric time on the uniform axis
  std::vector<double> values;
  TimeFormat format = TimeFormat::Numeric;
  std::string value_name;
  double spacing = 1.0;

  std::size_t size() const { return values.size(); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<int> parse_digits(std::string_view s, std::size_t width) {
  if (s.size() != width) return std::nullopt;
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct ParsedTime {
  TimeFormat format;
  int year = 0, month = 1, day = 1;
  double numeric = 0.0;
};

inline std::optional<ParsedTime> parse_time(std::string_view s) {
  ParsedTime t{};
  if (s.size() == 4 && s.find_first_not_of("0123456789") == std::string_view::npos) {
    t.format = TimeFormat::Year;
    t.year = *parse_digits(s, 4);
    t.numeric = t.year;
    return t;
  }
  if (s.size() >= 7 && s[4] == '-') {
    const auto y = parse_digits(s.substr(0, 4), 4);
    const auto m = parse_digits(s.substr(5, 2), 2);
    if (!y || !m || *m < 1 || *m > 12) return std::nullopt;
    t.year = *y;
    t.month = *m;
    if (s.size() == 7) {
      t.format = TimeFormat::YearMonth;
      return t;
    }
    if (s.size() != 10 || s[7] != '-') return std::nullopt;
    const auto d = parse_digits(s.substr(8, 2), 2);
    if (!d) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{t.year}, std::chrono::month{static_cast<unsigned>(t.month)},
                                          std::chrono::day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) return std::nullopt;
    t.day = *d;
    t.format = TimeFormat::Date;
    return t;
  }
  if (auto v = parse_number(s)) {
    t.format = TimeFormat::Numeric;
    t.numeric = *v;
    return t;
  }
  return std::nullopt;
}

inline std::string row_ref(std::size_t row, std::size_t line) {
  return "row " + std::to_string(row) + " (line " + std::to_string(line) + ")";
}

}  // namespace detail

/// Parses CSV text.  `value_column` picks the value column by header name;
/// empty means the second column.
inline TimeSeries parse_time_series(std::istream& in, const std::string& value_column = "",
                                    std::size_t min_length = 0) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    for (auto f : detail::split_csv(line)) header.emplace_back(f);
    break;
  }
  if (header.empty()) throw DomainError("input has no header line");
  if (header.size() < 2) throw DomainError("input needs a time column and a value column");
  std::size_t col = 1;
  if (!value_column.empty()) {
    col = header.size();
    for (std::size_t i = 1; i < header.size(); ++i) {
      if (header[i] == value_column) col = i;
    }
    if (col == header.size()) throw DomainError("input has no column named '" + value_column + "'");
  }

  TimeSeries ts;
  ts.value_name = header[col];
  std::vector<detail::ParsedTime> times;
  std::vector<std::size_t> lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const std::size_t row = ts.values.size() + 1;
    const auto fields = detail::split_csv(line);
    if (fields.size() != header.size()) {
      throw DomainError(detail::row_ref(row, line_no) + ": expected " + std::to_string(header.size()) +
                        " fields, found " + std::to_string(fields.size()));
    }
    const auto t = detail::parse_time(fields[0]);
    if (!t) throw DomainError(detail::row_ref(row, line_no) + ": cannot read time '" + std::string(fields[0]) + "'");
    if (!times.empty() && t->format != times.front().format) {
      throw DomainError(detail::row_ref(row, line_no) + ": time '" + std::string(fields[0]) +
                        "' is not in the same format as the first row");
    }
    const auto v = detail::parse_number(fields[col]);
    if (!v) {
      throw DomainError(detail::row_ref(row, line_no) + ": missing or non-numeric value '" +
                        std::string(fields[col]) + "'");
    }
    times.push_back(*t);
    lines.push_back(line_no);
    ts.time_labels.emplace_back(fields[0]);
    ts.values.push_back(*v);
  }
  if (ts.values.size() < std::max<std::size_t>(min_length, 2)) {
    throw DomainError("series has " + std::to_string(ts.values.size()) + " observations, at least " +
                      std::to_string(std::max<std::size_t>(min_length, 2)) + " are needed");
  }

  ts.format = times.front().format;
  bool same_day = true;
  for (const auto& t : times) same_day = same_day && t.day == times.front().day;
  for (const auto& t : times) {
    switch (ts.format) {
      case TimeFormat::Numeric:
      case TimeFormat::Year: ts.time.push_back(t.numeric); break;
      case TimeFormat::YearMonth: ts.time.push_back(12.0 * t.year + (t.month - 1)); break;
      case TimeFormat::Date:
        if (same_day) {
          ts.time.push_back(12.0 * t.year + (t.month - 1));
        } else {
          const std::chrono::sys_days d{std::chrono::year_month_day{
              std::chrono::year{t.year}, std::chrono::month{static_cast<unsigned>(t.month)},
              std::chrono::day{static_cast<unsigned>(t.day)}}};
          ts.time.push_back(static_cast<double>(d.time_since_epoch().count()));
        }
        break;
    }
  }

  ts.spacing = ts.time[1] - ts.time[0];
  if (!(ts.spacing > 0.0)) {
    throw DomainError(detail::row_ref(2, lines[1]) + ": time index must be strictly increasing");
  }
  for (std::size_t i = 1; i < ts.time.size(); ++i) {
    const double step = ts.time[i] - ts.time[i - 1];
    if (!(step > 0.0)) {
      throw DomainError(detail::row_ref(i + 1, lines[i]) + ": time index must be strictly increasing");
    }
    if (std::abs(step - ts.spacing) > 1e-9 * ts.spacing) {
      std::ostringstream os;
      os.precision(17);
      os << detail::row_ref(i + 1, lines[i]) << ": irregular spacing, step " << step << " differs from "
         << ts.spacing << " at time '" << ts.time_labels[i] << "'";
      throw DomainError(os.str());
    }
  }
  return ts;
}

inline TimeSeries read_time_series(const std::string& path, const std::string& value_column = "",
                                   std::size_t min_length = 0) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open input file '" + path + "'");
  return parse_time_series(in, value_column, min_length);
}

}  // namespace pcfgn
