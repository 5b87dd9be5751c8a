#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>

// Locale-independent numeric formatting.  Doubles print as the shortest
// string that parses back to the identical bits, so emitted files are both
// readable and exactly reproducible.

namespace andlab {

inline std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc())
    throw std::runtime_error("double formatting failed");
  return std::string(buf, res.ptr);
}

inline std::string fmt_int(long long v) { return std::to_string(v); }

inline std::string fmt_uint(std::uint64_t v) { return std::to_string(v); }

inline double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("malformed number: " + s);
  return v;
}

}  // namespace andlab
