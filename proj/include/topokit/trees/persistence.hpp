#pragma once

#include <algorithm>
#include <iterator>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topokit/core/parallel.hpp"
#include "topokit/gradient/discrete_gradient.hpp"
#include "topokit/gradient/vpath.hpp"
#include "topokit/trees/merge_tree.hpp"

namespace topokit {

enum class PairClass { MinSaddle, SaddleSaddle, SaddleMax, Essential };

// Label of a pair class in a d-dimensional domain: "0-1", "1-2", "2-3", "essential".
inline std::string pair_class_name(PairClass c, int d) {
  switch (c) {
    case PairClass::MinSaddle: return "0-1";
    case PairClass::SaddleSaddle: return "1-2";
    case PairClass::SaddleMax: return std::to_string(d - 1) + "-" + std::to_string(d);
    case PairClass::Essential: return "essential";
  }
  return "?";
}

struct PersistencePair {
  SimplexId birth_vertex;
  SimplexId death_vertex;
  double birth_value;
  double death_value;
  PairClass cls;

  double persistence() const { return death_value - birth_value; }
  friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

struct PersistenceDiagram {
  int dimension = 0;
  std::vector<PersistencePair> pairs;
  // 3D diagram built without a gradient: the (1,2) pairs are absent.
  bool saddle_saddle_missing = false;
};

/// (1,2) pairs of a 3D gradient. Critical triangles are visited in
/// ascending simplex order; each is paired with the highest 1-saddle left
/// in its boundary, where the boundary is the set of critical edges reached
/// by an odd number of descending V-paths. When that 1-saddle is already
/// taken, the boundary of its partner is added (mod 2), which is what
/// reversing the gradient along the connector does to the connections.
/// Pairs between simplices with the same highest vertex are dropped.
template <Triangulation T>
std::vector<PersistencePair> saddle_saddle_pairs(const T& t, const OrderField& f, const DiscreteGradient& g,
                                                 int threads = default_thread_count()) {
  std::vector<PersistencePair> out;
  if (t.dimension() != 3) return out;
  auto by_key = [&](int dim) {
    std::vector<std::pair<SimplexKey, SimplexId>> v;
    for (SimplexId s : g.critical(dim)) v.emplace_back(simplex_key(t, f, dim, s), s);
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto edges = by_key(1);
  const auto tris = by_key(2);
  std::unordered_map<SimplexId, std::size_t> edge_row;
  for (std::size_t i = 0; i < edges.size(); ++i) edge_row[edges[i].second] = i;

  std::vector<std::vector<std::size_t>> column(tris.size());
  parallel_for(static_cast<SimplexId>(tris.size()), threads, [&](SimplexId k) {
    const VPathExploration ex(t, g, {2, tris[static_cast<std::size_t>(k)].second}, VPathDirection::Descending, 2);
    auto& col = column[static_cast<std::size_t>(k)];
    for (const auto& tg : ex.targets())
      if (tg.odd) col.push_back(edge_row.at(tg.id));
    std::sort(col.begin(), col.end());
  });

  constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(edges.size(), kFree);  // row -> reduced column holding it as pivot
  std::vector<std::size_t> merged;
  for (std::size_t j = 0; j < tris.size(); ++j) {
    auto& col = column[j];
    while (!col.empty() && owner[col.back()] != kFree) {
      const auto& other = column[owner[col.back()]];
      merged.clear();
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(), std::back_inserter(merged));
      col.swap(merged);
    }
    if (col.empty()) continue;
    owner[col.back()] = j;
    const SimplexId a = max_vertex(t, f, 1, edges[col.back()].second);
    const SimplexId b = max_vertex(t, f, 2, tris[j].second);
    if (a != b) out.push_back({a, b, f.value(a), f.value(b), PairClass::SaddleSaddle});
  }
  return out;
}

/// Diagram from the join tree (0,1), the split tree ((d-1),d), the
/// essential pair (global minimum, global maximum) and, in 3D when a
/// gradient is given, the (1,2) pairs. Sorted by (class, birth value,
/// birth vertex).
template <Triangulation T>
PersistenceDiagram build_diagram(const T& t, const OrderField& f, const DiscreteGradient* g = nullptr,
                                 int threads = default_thread_count()) {
  PersistenceDiagram d;
  d.dimension = t.dimension();
  const MergeTree join = build_merge_tree(t, f, MergeVariant::Join);
  const MergeTree split = build_merge_tree(t, f, MergeVariant::Split);
  for (const auto& p : join.pairs)
    d.pairs.push_back({p.extremum, p.saddle, f.value(p.extremum), f.value(p.saddle), PairClass::MinSaddle});
  for (const auto& p : split.pairs)
    d.pairs.push_back({p.saddle, p.extremum, f.value(p.saddle), f.value(p.extremum), PairClass::SaddleMax});
  if (t.vertex_count() > 1) {
    const SimplexId lo = f.vertex_at(0), hi = f.vertex_at(t.vertex_count() - 1);
    d.pairs.push_back({lo, hi, f.value(lo), f.value(hi), PairClass::Essential});
  }
  if (d.dimension == 3) {
    if (g) {
      const auto ss = saddle_saddle_pairs(t, f, *g, threads);
      d.pairs.insert(d.pairs.end(), ss.begin(), ss.end());
    } else {
      d.saddle_saddle_missing = true;
    }
  }
  std::sort(d.pairs.begin(), d.pairs.end(), [&f](const PersistencePair& a, const PersistencePair& b) {
    if (a.cls != b.cls) return a.cls < b.cls;
    if (a.birth_value != b.birth_value) return a.birth_value < b.birth_value;
    if (a.birth_vertex != b.birth_vertex) return a.birth_vertex < b.birth_vertex;
    return f.rank(a.death_vertex) < f.rank(b.death_vertex);
  });
  return d;
}

/// (threshold, number of pairs with persistence >= threshold) for 0 and
/// every distinct persistence, ascending.
inline std::vector<std::pair<double, std::int64_t>> persistence_curve(const PersistenceDiagram& d) {
  std::vector<double> p;
  for (const auto& x : d.pairs) p.push_back(x.persistence());
  std::sort(p.begin(), p.end());
  std::vector<std::pair<double, std::int64_t>> out;
  std::vector<double> th{0.0};
  for (double x : p)
    if (x > th.back()) th.push_back(x);
  for (double x : th) {
    const auto n = p.end() - std::lower_bound(p.begin(), p.end(), x);
    out.emplace_back(x, static_cast<std::int64_t>(n));
  }
  return out;
}

}  // namespace topokit
