#pragma once

// Deterministic text rendering of doubles for CSV/JSON output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace ratpow {

inline constexpr int kMaxSignificantDigits = 12;
inline constexpr const char* kNotAvailable = "NA";

/// Shortest %g rendering that parses back to the same double, capped at
/// 12 significant digits.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[40];
  int p = 1;
  for (; p < kMaxSignificantDigits; ++p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  // keep integers below 1e12 out of exponent notation
  const int digits = static_cast<int>(std::floor(std::log10(std::abs(x)))) + 1;
  p = std::max(p, std::min(digits, kMaxSignificantDigits));
  std::snprintf(buf, sizeof buf, "%.*g", p, x);
  return buf;
}

}  // namespace ratpow
