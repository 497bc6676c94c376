#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace floodcast {

/// Shortest decimal text that reads back to the same double.
inline std::string format_number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::string format_number(std::int64_t v) { return std::to_string(v); }
inline std::string format_number(int v) { return std::to_string(v); }
inline std::string format_number(std::uint64_t v) { return std::to_string(v); }

} // namespace floodcast
