#pragma once

#include <algorithm>
#include <array>
#include <utility>
#include <vector>

#include "topokit/core/parallel.hpp"
#include "topokit/gradient/discrete_gradient.hpp"
#include "topokit/gradient/vpath.hpp"

namespace topokit {

enum class SeparatrixKind { MinSaddle, SaddleMax, SaddleSaddle };

inline const char* separatrix_kind_name(SeparatrixKind k) {
  switch (k) {
    case SeparatrixKind::MinSaddle: return "min-saddle";
    case SeparatrixKind::SaddleMax: return "saddle-max";
    case SeparatrixKind::SaddleSaddle: return "saddle-saddle";
  }
  return "?";
}

struct Polyline {
  SeparatrixKind kind;
  SimplexRef start;
  SimplexRef end;
  std::int64_t multiplicity = 1;
  std::vector<Point3> points;  // one barycenter per simplex of the V-path
};

template <Triangulation T>
Point3 barycenter(const T& t, SimplexRef s) {
  Point3 c;
  const SimplexVertices v = t.vertices(s.dim, s.id);
  for (SimplexId x : v) {
    const Point3 p = t.point(x);
    c.x += p.x;
    c.y += p.y;
    c.z += p.z;
  }
  c.x /= v.size;
  c.y /= v.size;
  c.z /= v.size;
  return c;
}

/// Connectors between 1-saddles and 2-saddles of a 3D gradient. The
/// descending wall of each critical triangle is explored across
/// edge-triangle pairs; every critical edge reached gives one path, stored
/// from the edge to the triangle.
template <Triangulation T>
std::vector<VPath> saddle_connectors_3d(const T& t, const OrderField& f, const DiscreteGradient& g,
                                        int threads = default_thread_count()) {
  if (t.dimension() != 3) return {};
  const std::vector<SimplexId> saddles = g.critical(2);
  std::vector<std::vector<VPath>> per(saddles.size());
  parallel_for(static_cast<SimplexId>(saddles.size()), threads, [&](SimplexId k) {
    for (VPath p : trace_vpaths(t, f, g, {2, saddles[static_cast<std::size_t>(k)]}, VPathDirection::Descending)) {
      std::reverse(p.cells.begin(), p.cells.end());
      std::swap(p.start, p.end);
      per[static_cast<std::size_t>(k)].push_back(std::move(p));
    }
  });
  std::vector<VPath> out;
  for (auto& v : per)
    for (auto& p : v) out.push_back(std::move(p));
  return out;
}

/// 1-separatrices: descending vertex-edge paths from every critical edge
/// (minimum-saddle) and ascending (d-1)-d paths from every critical
/// (d-1)-simplex (saddle-maximum). Paths start at the saddle.
template <Triangulation T>
std::vector<VPath> separatrices(const T& t, const OrderField& f, const DiscreteGradient& g,
                                int threads = default_thread_count()) {
  const int d = t.dimension();
  std::vector<std::pair<SimplexRef, VPathDirection>> seeds;
  for (SimplexId e : g.critical(1)) seeds.emplace_back(SimplexRef{1, e}, VPathDirection::Descending);
  for (SimplexId s : g.critical(d - 1)) seeds.emplace_back(SimplexRef{d - 1, s}, VPathDirection::Ascending);
  std::vector<std::vector<VPath>> per(seeds.size());
  parallel_for(static_cast<SimplexId>(seeds.size()), threads, [&](SimplexId k) {
    const auto& [s, dir] = seeds[static_cast<std::size_t>(k)];
    per[static_cast<std::size_t>(k)] = trace_vpaths(t, f, g, s, dir);
  });
  std::vector<VPath> out;
  for (auto& v : per)
    for (auto& p : v) out.push_back(std::move(p));
  return out;
}

/// Polylines through the barycenters of the simplices of each path, tagged
/// by the dimensions of the endpoints.
template <Triangulation T>
std::vector<Polyline> extract_separatrix_geometry(const T& t, const std::vector<VPath>& paths) {
  const int d = t.dimension();
  std::vector<Polyline> out;
  out.reserve(paths.size());
  for (const VPath& p : paths) {
    Polyline l;
    const int lo = std::min(p.start.dim, p.end.dim), hi = std::max(p.start.dim, p.end.dim);
    l.kind = lo == 0 ? SeparatrixKind::MinSaddle : hi == d ? SeparatrixKind::SaddleMax : SeparatrixKind::SaddleSaddle;
    l.start = p.start;
    l.end = p.end;
    l.multiplicity = p.multiplicity;
    for (SimplexRef s : p.cells) l.points.push_back(barycenter(t, s));
    out.push_back(std::move(l));
  }
  return out;
}

struct SegmentationLabels {
  std::vector<SimplexId> vertex;  // critical vertex reached by descending flow
  std::vector<SimplexId> cell;    // critical d-simplex reached by ascending flow, -1 at boundary dead ends
};

/// Ascending and descending manifolds of the extrema, as labels on vertices
/// and on d-simplices.
template <Triangulation T>
SegmentationLabels morse_segmentation(const T& t, const OrderField&, const DiscreteGradient& g) {
  const int d = t.dimension();
  SegmentationLabels lab;
  const SimplexId nv = t.vertex_count(), nc = t.simplex_count(d);
  lab.vertex.assign(static_cast<std::size_t>(nv), kNoSimplex);
  lab.cell.assign(static_cast<std::size_t>(nc), kNoSimplex);
  constexpr SimplexId kUnset = kNoSimplex, kDead = -2;

  std::vector<SimplexId> chain;
  for (SimplexId v = 0; v < nv; ++v) {
    chain.clear();
    SimplexId x = v;
    while (lab.vertex[static_cast<std::size_t>(x)] == kUnset) {
      chain.push_back(x);
      const SimplexId e = g.paired_up(0, x);
      if (e == kNoSimplex) {
        lab.vertex[static_cast<std::size_t>(x)] = x;
        break;
      }
      const SimplexVertices ev = t.vertices(1, e);
      x = ev[0] == x ? ev[1] : ev[0];
    }
    const SimplexId label = lab.vertex[static_cast<std::size_t>(x)];
    for (SimplexId y : chain) lab.vertex[static_cast<std::size_t>(y)] = label;
  }

  std::vector<SimplexId> cof;
  for (SimplexId c = 0; c < nc; ++c) {
    chain.clear();
    SimplexId x = c;
    SimplexId label = kUnset;
    while (true) {
      const SimplexId known = lab.cell[static_cast<std::size_t>(x)];
      if (known != kUnset) {
        label = known;
        break;
      }
      chain.push_back(x);
      const SimplexId s = g.paired_down(d, x);
      if (s == kNoSimplex) {
        label = x;
        break;
      }
      t.cofaces({d - 1, s}, d, cof);
      SimplexId next = kNoSimplex;
      for (SimplexId y : cof)
        if (y != x) next = y;
      if (next == kNoSimplex) {
        label = kDead;
        break;
      }
      x = next;
    }
    for (SimplexId y : chain) lab.cell[static_cast<std::size_t>(y)] = label;
  }
  for (SimplexId& l : lab.cell)
    if (l == kDead) l = kNoSimplex;
  return lab;
}

}  // namespace topokit
