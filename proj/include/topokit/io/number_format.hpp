#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

namespace topokit::io {

// Whole-token parse; leading '+' accepted.
template <class Number>
bool parse_number(std::string_view s, Number& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && end == s.data() + s.size();
}

// Shortest text that reads back to the same double.
inline std::string format_number(double x) {
  if (x == 0) x = 0;  // no "-0"
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, end};
}

}  // namespace topokit::io
