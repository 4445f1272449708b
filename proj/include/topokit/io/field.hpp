#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <ostream>
#include <string>
#include <vector>

#include "topokit/io/number_format.hpp"
#include "topokit/scalar/order_field.hpp"

namespace topokit::io {

enum class FieldFormat { Ascii, Float32, Float64 };

inline FieldFormat parse_field_format(const std::string& s) {
  if (s == "ascii") return FieldFormat::Ascii;
  if (s == "f32") return FieldFormat::Float32;
  if (s == "f64") return FieldFormat::Float64;
  throw std::invalid_argument("unknown field format '" + s + "' (ascii, f32, f64)");
}

namespace detail {

template <class Number>
std::vector<Number> read_ascii_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<Number> out;
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    Number x{};
    if (!parse_number(std::string_view(line).substr(first, last - first + 1), x))
      throw DataError(path + ":" + std::to_string(line_no) + ": bad number '" + line + "'");
    out.push_back(x);
  }
  return out;
}

template <class Float>
std::vector<double> read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  const std::vector<char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (bytes.size() % sizeof(Float) != 0)
    throw DataError(path + ": size " + std::to_string(bytes.size()) + " is not a multiple of " +
                    std::to_string(sizeof(Float)) + " bytes");
  std::vector<double> out(bytes.size() / sizeof(Float));
  for (std::size_t i = 0; i < out.size(); ++i) {
    unsigned char raw[sizeof(Float)];
    std::memcpy(raw, bytes.data() + i * sizeof(Float), sizeof(Float));
    if constexpr (std::endian::native == std::endian::big)
      for (std::size_t a = 0, b = sizeof(Float) - 1; a < b; ++a, --b) std::swap(raw[a], raw[b]);
    Float x;
    std::memcpy(&x, raw, sizeof(Float));
    out[i] = static_cast<double>(x);
  }
  return out;
}

}  // namespace detail

/// One ASCII real per line (blank lines and '#' comments skipped), or raw
/// little-endian floats.
inline std::vector<double> read_values(const std::string& path, FieldFormat fmt = FieldFormat::Ascii) {
  switch (fmt) {
    case FieldFormat::Ascii: return detail::read_ascii_column<double>(path);
    case FieldFormat::Float32: return detail::read_binary<float>(path);
    case FieldFormat::Float64: return detail::read_binary<double>(path);
  }
  return {};
}

inline std::vector<std::int64_t> read_offsets(const std::string& path) {
  return detail::read_ascii_column<std::int64_t>(path);
}

/// Values plus optional offsets file, checked against the vertex count.
inline OrderField load_field(const std::string& values_path, SimplexId vertex_count,
                             const std::string& offsets_path = {}, FieldFormat fmt = FieldFormat::Ascii) {
  auto values = read_values(values_path, fmt);
  if (static_cast<SimplexId>(values.size()) != vertex_count)
    throw DataError(values_path + ": " + std::to_string(values.size()) + " values for " +
                    std::to_string(vertex_count) + " vertices");
  if (offsets_path.empty()) return OrderField(std::move(values));
  auto offsets = read_offsets(offsets_path);
  if (offsets.size() != values.size())
    throw DataError(offsets_path + ": " + std::to_string(offsets.size()) + " offsets for " +
                    std::to_string(vertex_count) + " vertices");
  return OrderField(std::move(values), std::move(offsets));
}

inline void write_values(std::ostream& out, const std::vector<double>& values) {
  for (double x : values) out << format_number(x) << '\n';
}

inline void write_offsets(std::ostream& out, const std::vector<std::int64_t>& offsets) {
  for (auto x : offsets) out << x << '\n';
}

}  // namespace topokit::io
