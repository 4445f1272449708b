#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "topokit/core/parallel.hpp"
#include "topokit/core/types.hpp"
#include "topokit/core/union_find.hpp"
#include "topokit/scalar/order_field.hpp"
#include "topokit/triangulation/triangulation.hpp"

namespace topokit {

struct PLCriticalPoint {
  SimplexId vertex = kNoSimplex;
  int index = 0;          // 0 = minimum, d = maximum
  int multiplicity = 1;   // > 1 only for degenerate saddles
  double value = 0;
  bool boundary = false;

  friend bool operator==(const PLCriticalPoint&, const PLCriticalPoint&) = default;
};

// Link connectivity of one vertex and the critical points it yields. A 3D
// vertex can be both a 1-saddle and a 2-saddle, hence up to two entries.
struct VertexClassification {
  int lower_components = 0;
  int upper_components = 0;
  int count = 0;
  std::array<PLCriticalPoint, 2> points{};

  bool regular() const { return count == 0; }
};

namespace detail {

struct LinkScratch {
  std::vector<SimplexId> neighbors;
  std::vector<SimplexId> star;
  UnionFind uf;
};

template <Triangulation T>
VertexClassification classify_vertex(const T& t, const OrderField& f, SimplexId v, LinkScratch& ws) {
  const int d = t.dimension();
  t.vertex_neighbors(v, ws.neighbors);
  t.cofaces({0, v}, d, ws.star);
  const auto& nb = ws.neighbors;
  ws.uf.reset(nb.size());
  const SimplexId rv = f.rank(v);
  auto local = [&nb](SimplexId u) {
    return static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), u) - nb.begin());
  };
  // Two link vertices on the same side of v that share a star cell are
  // joined by a link edge of that side.
  for (SimplexId c : ws.star) {
    const SimplexVertices cv = t.vertices(d, c);
    std::size_t first_low = SIZE_MAX, first_high = SIZE_MAX;
    for (SimplexId u : cv) {
      if (u == v) continue;
      const std::size_t li = local(u);
      std::size_t& anchor = f.rank(u) < rv ? first_low : first_high;
      if (anchor == SIZE_MAX) anchor = li;
      else ws.uf.unite(anchor, li);
    }
  }
  VertexClassification out;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    if (ws.uf.find(i) != i) continue;
    if (f.rank(nb[i]) < rv) ++out.lower_components;
    else ++out.upper_components;
  }

  auto emit = [&](int index, int mult) {
    PLCriticalPoint p;
    p.vertex = v;
    p.index = index;
    p.multiplicity = mult;
    p.value = f.value(v);
    out.points[static_cast<std::size_t>(out.count++)] = p;
  };
  const int lo = out.lower_components, hi = out.upper_components;
  if (lo == 0) {
    emit(0, 1);
  } else if (hi == 0) {
    emit(d, 1);
  } else if (d == 2) {
    if (lo >= 2) emit(1, lo - 1);
    else if (hi >= 2) emit(1, hi - 1);
  } else {
    if (lo >= 2) emit(1, lo - 1);
    if (hi >= 2) emit(d - 1, hi - 1);
  }
  return out;
}

}  // namespace detail

/// Classifies v from the connectivity of its lower and upper links.
/// Needs vertex neighbors, vertex stars and boundary(0) preconditioned.
template <Triangulation T>
VertexClassification classify_vertex(const T& t, const OrderField& f, SimplexId v) {
  detail::LinkScratch ws;
  auto out = detail::classify_vertex(t, f, v, ws);
  if (out.count > 0) {
    const bool b = t.is_boundary({0, v});
    for (int i = 0; i < out.count; ++i) out.points[static_cast<std::size_t>(i)].boundary = b;
  }
  return out;
}

/// All PL critical points, sorted by (vertex, index).
template <Triangulation T>
std::vector<PLCriticalPoint> extract_critical_points(const T& t, const OrderField& f,
                                                     int threads = default_thread_count()) {
  const SimplexId n = t.vertex_count();
  if (f.size() != n) throw DataError("field size does not match the vertex count");
  std::vector<VertexClassification> cls(static_cast<std::size_t>(n));
  parallel_for_blocks(n, threads, [&](SimplexId lo, SimplexId hi) {
    detail::LinkScratch ws;
    for (SimplexId v = lo; v < hi; ++v) cls[static_cast<std::size_t>(v)] = detail::classify_vertex(t, f, v, ws);
  });
  std::vector<PLCriticalPoint> out;
  for (SimplexId v = 0; v < n; ++v) {
    const auto& c = cls[static_cast<std::size_t>(v)];
    if (c.count == 0) continue;
    const bool b = t.is_boundary({0, v});
    for (int i = 0; i < c.count; ++i) {
      out.push_back(c.points[static_cast<std::size_t>(i)]);
      out.back().boundary = b;
    }
  }
  return out;
}

struct CriticalCounts {
  std::array<SimplexId, 4> by_index{};  // multiplicity included

  SimplexId minima() const { return by_index[0]; }
  // Alternating sum; equals the Euler characteristic on closed manifolds.
  SimplexId alternating_sum() const { return by_index[0] - by_index[1] + by_index[2] - by_index[3]; }
};

inline CriticalCounts count_critical_points(const std::vector<PLCriticalPoint>& pts) {
  CriticalCounts c;
  for (const auto& p : pts) c.by_index[static_cast<std::size_t>(p.index)] += p.multiplicity;
  return c;
}

}  // namespace topokit
