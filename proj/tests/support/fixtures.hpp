#pragma once

// Meshes and fields shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "topokit/scalar/order_field.hpp"
#include "topokit/triangulation/triangulation.hpp"

namespace fixtures {

using topokit::ExplicitTriangulation;
using topokit::ImplicitGridTriangulation;
using topokit::OrderField;
using topokit::Point3;
using topokit::SimplexId;

using CellList = std::vector<std::vector<SimplexId>>;

inline ExplicitTriangulation single_triangle() {
  return ExplicitTriangulation({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
}

// Vertex 0 at the bottom, 1..4 around the equator, 5 at the top.
inline std::vector<Point3> octahedron_points() {
  return {{0, 0, -1}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}, {0, 0, 1}};
}

inline CellList octahedron_cells() {
  CellList cells;
  for (SimplexId i = 0; i < 4; ++i) {
    const SimplexId a = 1 + i, b = 1 + (i + 1) % 4;
    cells.push_back({0, a, b});
    cells.push_back({5, a, b});
  }
  return cells;
}

inline ExplicitTriangulation octahedron() { return {octahedron_points(), octahedron_cells()}; }

// Splits every triangle into four through its edge midpoints, pushed back
// onto the unit sphere.
inline std::pair<std::vector<Point3>, CellList> subdivide(std::vector<Point3> pts, const CellList& cells) {
  std::map<std::pair<SimplexId, SimplexId>, SimplexId> mid;
  auto midpoint = [&](SimplexId a, SimplexId b) {
    const auto key = std::minmax(a, b);
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const Point3& p = pts[static_cast<std::size_t>(a)];
    const Point3& q = pts[static_cast<std::size_t>(b)];
    Point3 m{(p.x + q.x) / 2, (p.y + q.y) / 2, (p.z + q.z) / 2};
    const double len = std::sqrt(m.x * m.x + m.y * m.y + m.z * m.z);
    if (len > 0) m = {m.x / len, m.y / len, m.z / len};
    pts.push_back(m);
    const auto id = static_cast<SimplexId>(pts.size() - 1);
    mid.emplace(key, id);
    return id;
  };
  CellList out;
  for (const auto& c : cells) {
    const SimplexId ab = midpoint(c[0], c[1]), bc = midpoint(c[1], c[2]), ca = midpoint(c[2], c[0]);
    out.push_back({c[0], ab, ca});
    out.push_back({c[1], bc, ab});
    out.push_back({c[2], ca, bc});
    out.push_back({ab, bc, ca});
  }
  return {std::move(pts), std::move(out)};
}

// Octahedron after `levels` midpoint subdivisions: 6, 18, 66, ... vertices.
inline ExplicitTriangulation subdivided_octahedron(int levels) {
  auto pts = octahedron_points();
  auto cells = octahedron_cells();
  for (int i = 0; i < levels; ++i) std::tie(pts, cells) = subdivide(std::move(pts), cells);
  return {std::move(pts), cells};
}

// Grid closed up by coning its boundary to one extra apex vertex (the last
// vertex id): a 2-sphere for a 2D grid, a 3-sphere for a 3D grid. Grid
// vertices keep their ids.
inline ExplicitTriangulation coned_grid(const ImplicitGridTriangulation& g) {
  auto ex = topokit::to_explicit(g);
  const int d = g.dimension();
  ex.precondition(topokit::query::boundary(d - 1));
  std::vector<Point3> pts = g.emit_points();
  const auto n = g.dims();
  pts.push_back({(n[0] - 1) / 2.0, (n[1] - 1) / 2.0, d == 2 ? 1.0 : n[2] * 1.5});
  const auto apex = static_cast<SimplexId>(pts.size() - 1);
  std::vector<SimplexId> cells = g.emit_cells();
  for (SimplexId f = 0; f < ex.simplex_count(d - 1); ++f) {
    if (!ex.is_boundary({d - 1, f})) continue;
    const auto fv = ex.vertices(d - 1, f);
    cells.insert(cells.end(), fv.begin(), fv.end());
    cells.push_back(apex);
  }
  return ExplicitTriangulation::from_flat(std::move(pts), std::move(cells), d + 1);
}

// Boundary of the 4-simplex (closed 3-sphere), refined by `splits` random
// stellar subdivisions of tetrahedra.
inline ExplicitTriangulation stellar_sphere3(int splits, std::uint32_t seed) {
  std::vector<Point3> pts{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}, {0.3, 0.3, 0.3}};
  CellList cells;
  for (SimplexId skip = 0; skip < 5; ++skip) {
    std::vector<SimplexId> c;
    for (SimplexId v = 0; v < 5; ++v)
      if (v != skip) c.push_back(v);
    cells.push_back(c);
  }
  std::mt19937 rng(seed);
  for (int s = 0; s < splits; ++s) {
    std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
    const std::size_t ci = pick(rng);
    const auto c = cells[ci];
    Point3 p{};
    for (SimplexId v : c) {
      p.x += pts[static_cast<std::size_t>(v)].x / 4;
      p.y += pts[static_cast<std::size_t>(v)].y / 4;
      p.z += pts[static_cast<std::size_t>(v)].z / 4;
    }
    pts.push_back(p);
    const auto nv = static_cast<SimplexId>(pts.size() - 1);
    cells[ci] = {c[1], c[2], c[3], nv};
    cells.push_back({c[0], c[2], c[3], nv});
    cells.push_back({c[0], c[1], c[3], nv});
    cells.push_back({c[0], c[1], c[2], nv});
  }
  return {std::move(pts), cells};
}

// 3x3 grid field with two minima, one saddle and one maximum.
inline std::vector<double> f0_values() { return {0, 4, 2, 5, 6, 7, 8, 9, 10}; }
inline OrderField f0_field() { return OrderField(f0_values()); }

// Random values with heavy ties (so offsets matter) and a random offset
// permutation.
inline OrderField random_field(SimplexId n, std::mt19937& rng, int levels = 0) {
  std::vector<double> values(static_cast<std::size_t>(n));
  if (levels > 0) {
    std::uniform_int_distribution<int> dist(0, levels - 1);
    for (auto& v : values) v = dist(rng);
  } else {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (auto& v : values) v = dist(rng);
  }
  std::vector<std::int64_t> offsets(static_cast<std::size_t>(n));
  std::iota(offsets.begin(), offsets.end(), 0);
  std::shuffle(offsets.begin(), offsets.end(), rng);
  return OrderField(std::move(values), std::move(offsets));
}

// Field increasing with the vertex index, ties resolved by the default offsets.
inline OrderField index_field(SimplexId n) {
  std::vector<double> values(static_cast<std::size_t>(n));
  std::iota(values.begin(), values.end(), 0.0);
  return OrderField(std::move(values));
}

}  // namespace fixtures
