#pragma once

#include <charconv>
#include <cstddef>
#include <string>
#include <system_error>

namespace ranslice {

// Shortest round-trip decimal form of a double. Locale-independent, so files
// built from it are reproducible byte for byte.
inline std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string fmt_double_fixed(double v, int precision) {
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
  if (res.ec != std::errc()) return fmt_double(v);
  return std::string(buf, res.ptr);
}

inline bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  while (b != e && (*b == ' ' || *b == '\t')) ++b;
  auto res = std::from_chars(b, e, out);
  if (res.ec != std::errc()) return false;
  for (const char* p = res.ptr; p != e; ++p)
    if (*p != ' ' && *p != '\t' && *p != '\r') return false;
  return true;
}

}  // namespace ranslice
