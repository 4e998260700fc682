#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace cee {

/// Rounds to 12 significant decimal digits; applied to every float that
/// enters a serialized artifact so repeated runs diff cleanly.
inline double round_12sig(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

/// FNV-1a 64-bit over a byte string, rendered as fixed-width hex.
std::string fnv1a64_hex(const std::string& bytes);

/// Writes via a temp file in the same directory, then renames into place.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace cee
