#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace pcfgn::detail {

/// Shortest round-trip decimal form; identical on every run and locale.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Fixed notation with `digits` decimals.
inline std::string format_fixed(double x, int digits) {
  if (!std::isfinite(x)) return format_double(x);
  char buf[128];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, digits);
  if (res.ec != std::errc()) return format_double(x);
  return std::string(buf, res.ptr);
}

}  // namespace pcfgn::detail
