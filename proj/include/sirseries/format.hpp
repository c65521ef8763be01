#pragma once

#include <cstdio>
#include <string>

namespace sirseries {

/// Text that always round-trips a binary64 value (17 significant digits).
inline std::string format_full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

/// Display form, 6 significant digits.
inline std::string format_display(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

}  // namespace sirseries
