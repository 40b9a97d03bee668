#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace spinhall {

/// Shortest round-trip decimal representation; identical inputs give
/// byte-identical output.
inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace spinhall
