#pragma once

#include <charconv>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "viscowave/error.hpp"

namespace viscowave::detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

/// Accepts plain decimals plus the tokens "pi" and "<k>pi".
inline double parse_real(std::string_view text) {
  text = trim(text);
  if (text.ends_with("pi")) {
    const auto factor = text.substr(0, text.size() - 2);
    return (factor.empty() ? 1.0 : parse_real(factor)) * std::numbers::pi;
  }
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ValidationError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

inline long parse_int(std::string_view text) {
  text = trim(text);
  long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ValidationError("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::string format_real(double value);

}  // namespace viscowave::detail
