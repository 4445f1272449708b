#pragma once

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "topokit/trees/persistence.hpp"

namespace topokit {

/// Extrema to keep. Every other extremum is flattened away.
struct SimplificationRequest {
  std::vector<SimplexId> preserved;  // sorted vertex ids
  // Asking for (1,2) pairs to go as well; always rejected.
  bool remove_saddle_saddle = false;
};

/// Endpoints of the essential pair plus the extremum of every (0,1) and
/// ((d-1),d) pair whose persistence is at least tau.
inline SimplificationRequest select_by_persistence(const PersistenceDiagram& d, double tau) {
  SimplificationRequest r;
  for (const auto& p : d.pairs) {
    switch (p.cls) {
      case PairClass::Essential:
        r.preserved.push_back(p.birth_vertex);
        r.preserved.push_back(p.death_vertex);
        break;
      case PairClass::MinSaddle:
        if (p.persistence() >= tau) r.preserved.push_back(p.birth_vertex);
        break;
      case PairClass::SaddleMax:
        if (p.persistence() >= tau) r.preserved.push_back(p.death_vertex);
        break;
      case PairClass::SaddleSaddle: break;
    }
  }
  std::sort(r.preserved.begin(), r.preserved.end());
  r.preserved.erase(std::unique(r.preserved.begin(), r.preserved.end()), r.preserved.end());
  return r;
}

namespace detail {

template <Triangulation T>
std::vector<SimplexId> field_minima(const T& t, const OrderField& f) {
  std::vector<SimplexId> out, nb;
  for (SimplexId v = 0; v < t.vertex_count(); ++v) {
    t.vertex_neighbors(v, nb);
    if (std::none_of(nb.begin(), nb.end(), [&](SimplexId u) { return f.vertex_less(u, v); })) out.push_back(v);
  }
  return out;
}

// Priority flood from the kept minima: vertices leave the queue in field
// order among those reachable so far, and each takes the highest value
// popped up to that point. Sub-level components without a kept minimum are
// raised to the saddle where the flood enters them. New offsets are the
// pop positions, so the flood order becomes the field order and every
// vertex other than a seed has a lower neighbour.
template <Triangulation T>
OrderField flood_minima(const T& t, const OrderField& f, const std::vector<SimplexId>& seeds) {
  const SimplexId n = t.vertex_count();
  using Item = std::pair<SimplexId, SimplexId>;  // (rank, vertex)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (SimplexId s : seeds) {
    queue.push({f.rank(s), s});
    seen[static_cast<std::size_t>(s)] = 1;
  }
  std::vector<double> values(static_cast<std::size_t>(n));
  std::vector<std::int64_t> offsets(static_cast<std::size_t>(n));
  std::vector<SimplexId> nb;
  double level = 0;
  std::int64_t popped = 0;
  while (!queue.empty()) {
    const SimplexId v = queue.top().second;
    queue.pop();
    const double fv = f.value(v);
    level = popped == 0 ? fv : std::max(level, fv);
    values[static_cast<std::size_t>(v)] = level;
    offsets[static_cast<std::size_t>(v)] = popped++;
    t.vertex_neighbors(v, nb);
    for (SimplexId u : nb)
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        queue.push({f.rank(u), u});
      }
  }
  if (popped != n) throw DataError("simplification needs a connected domain");
  return OrderField(std::move(values), std::move(offsets));
}

}  // namespace detail

/// Flattens the sub-level (sur-level) components of every extremum not in
/// the request until the PL extrema of the field are exactly the preserved
/// ones. Minima and maxima are processed in turn, since removing one kind
/// can expose extrema of the other kind. Returns the input unchanged when
/// nothing has to go.
template <Triangulation T>
OrderField simplify_field(const T& t, const OrderField& f, const SimplificationRequest& req) {
  if (req.remove_saddle_saddle)
    throw std::invalid_argument(
        "saddle-saddle pairs cannot be removed: homological simplification in 3D is NP-hard, only extremum pairs are "
        "removed by flattening");
  if (f.size() != t.vertex_count()) throw DataError("field size does not match the vertex count");
  std::vector<SimplexId> keep = req.preserved;
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (SimplexId v : keep)
    if (v < 0 || v >= t.vertex_count()) throw std::invalid_argument("preserved vertex out of range");

  const auto minima = detail::field_minima(t, f);
  const auto maxima = detail::field_minima(t, f.negated());
  std::vector<SimplexId> keep_min, keep_max;
  for (SimplexId v : keep) {
    const bool is_min = std::binary_search(minima.begin(), minima.end(), v);
    const bool is_max = std::binary_search(maxima.begin(), maxima.end(), v);
    if (!is_min && !is_max) throw std::invalid_argument("preserved vertex " + std::to_string(v) + " is not an extremum");
    if (is_min) keep_min.push_back(v);
    if (is_max) keep_max.push_back(v);
  }
  if (keep_min.empty() || keep_max.empty())
    throw std::invalid_argument("the preserved set needs at least one minimum and one maximum");

  OrderField g = f;
  bool edited = false;
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    if (detail::field_minima(t, g) != keep_min) {
      g = detail::flood_minima(t, g, keep_min);
      changed = true;
    }
    const OrderField neg = g.negated();
    if (detail::field_minima(t, neg) != keep_max) {
      g = detail::flood_minima(t, neg, keep_max).negated();
      changed = true;
    }
    if (!changed) {
      if (!edited) return g;
      // Offsets renumbered to ranks: same order, nonnegative and compact.
      std::vector<std::int64_t> offsets(g.ranks().begin(), g.ranks().end());
      return OrderField(g.values(), std::move(offsets));
    }
    edited = true;
  }
  throw InvariantError("simplification did not converge");
}

}  // namespace topokit
