// Deterministic numeric formatting for CSV and JSON output.
#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace spinosc::csvio {

// 17 significant digits: enough to round-trip any double bit pattern.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

}  // namespace spinosc::csvio
