#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "topokit/io/number_format.hpp"
#include "topokit/triangulation/explicit_triangulation.hpp"

namespace topokit::io {

namespace detail {

// Whitespace tokens of the non-empty, non-comment lines, each tagged with
// its line number.
class LineTokens {
 public:
  LineTokens(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  // Next line holding something; false at end of input.
  bool next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      tokens_.clear();
      std::istringstream ss(line);
      for (std::string tok; ss >> tok;) tokens_.push_back(tok);
      if (!tokens_.empty()) return true;
    }
    return false;
  }

  const std::vector<std::string>& tokens() const { return tokens_; }
  int line() const { return line_no_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(name_ + ":" + std::to_string(line_no_) + ": " + what);
  }

  template <class Number>
  Number number(std::size_t i) const {
    if (i >= tokens_.size()) fail("expected " + std::to_string(i + 1) + " fields, got " + std::to_string(tokens_.size()));
    Number x{};
    if (!parse_number(tokens_[i], x)) fail("bad number '" + tokens_[i] + "'");
    return x;
  }

 private:
  std::istream& in_;
  std::string name_;
  std::vector<std::string> tokens_;
  int line_no_ = 0;
};

}  // namespace detail

/// ASCII OFF. Faces of 3 vertices give a surface, faces of 4 vertices give
/// tetrahedra; all faces must have the same size.
inline ExplicitTriangulation read_off(std::istream& in, const std::string& name = "<off>") {
  detail::LineTokens lines(in, name);
  if (!lines.next()) throw DataError(name + ": empty file");
  std::vector<std::string> head = lines.tokens();
  if (head[0] != "OFF") lines.fail("expected OFF header");
  head.erase(head.begin());
  if (head.empty()) {
    if (!lines.next()) lines.fail("missing element counts");
    head = lines.tokens();
  }
  if (head.size() < 2) lines.fail("expected vertex and face counts");
  SimplexId nv = 0, nf = 0;
  if (!parse_number(head[0], nv) || !parse_number(head[1], nf) || nv <= 0 || nf <= 0)
    lines.fail("bad element counts");

  std::vector<Point3> pts(static_cast<std::size_t>(nv));
  for (auto& p : pts) {
    if (!lines.next()) lines.fail("unexpected end of file in vertex list");
    p = {lines.number<double>(0), lines.number<double>(1), lines.number<double>(2)};
  }
  std::vector<SimplexId> flat;
  int arity = 0;
  for (SimplexId c = 0; c < nf; ++c) {
    if (!lines.next()) lines.fail("unexpected end of file in face list");
    const int k = lines.number<int>(0);
    if (k != 3 && k != 4) lines.fail("face of " + std::to_string(k) + " vertices; only 3 or 4 are supported");
    if (arity == 0) arity = k;
    if (k != arity) lines.fail("mixed face sizes (" + std::to_string(arity) + " and " + std::to_string(k) + ")");
    if (lines.tokens().size() < static_cast<std::size_t>(k) + 1) lines.fail("face lists fewer vertices than announced");
    for (int i = 1; i <= k; ++i) {
      const auto v = lines.number<SimplexId>(static_cast<std::size_t>(i));
      if (v < 0 || v >= nv) lines.fail("vertex index " + std::to_string(v) + " out of range");
      flat.push_back(v);
    }
  }
  return ExplicitTriangulation::from_flat(std::move(pts), std::move(flat), arity);
}

inline ExplicitTriangulation read_off_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return read_off(in, path);
}

/// Writes points and cells (`arity` ids per cell) as OFF.
inline void write_off(std::ostream& out, const std::vector<Point3>& pts, const std::vector<SimplexId>& flat,
                      int arity) {
  out << "OFF\n" << pts.size() << ' ' << flat.size() / static_cast<std::size_t>(arity) << " 0\n";
  for (const auto& p : pts) out << format_number(p.x) << ' ' << format_number(p.y) << ' ' << format_number(p.z) << '\n';
  for (std::size_t c = 0; c < flat.size(); c += static_cast<std::size_t>(arity)) {
    out << arity;
    for (int i = 0; i < arity; ++i) out << ' ' << flat[c + static_cast<std::size_t>(i)];
    out << '\n';
  }
}

}  // namespace topokit::io
