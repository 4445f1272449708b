#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "topokit/gradient/discrete_gradient.hpp"
#include "topokit/gradient/vpath.hpp"
#include "topokit/scalar/critical_points.hpp"

namespace topokit {

struct PLMatch {
  PLCriticalPoint point;
  std::vector<SimplexRef> simplices;  // one per unit of multiplicity when available
};

/// Map from interior PL critical points to critical simplices of the same
/// dimension in their star, plus the critical simplices nobody claimed.
struct MatchingXi {
  std::vector<PLMatch> matches;
  // Unclaimed critical simplices away from the boundary: the ones to cancel.
  std::vector<SimplexRef> residue;
  // Interior PL points that found fewer critical simplices than their multiplicity.
  std::vector<PLCriticalPoint> short_matches;

  bool in_residue(SimplexRef s) const { return std::binary_search(residue.begin(), residue.end(), s); }
};

namespace detail {

// Critical dim-simplices whose highest vertex is v. The gradient only pairs
// simplices sharing their highest vertex, so these are the candidates for v.
template <Triangulation T>
void critical_in_lower_star(const T& t, const OrderField& f, const DiscreteGradient& g, SimplexId v, int dim,
                            std::vector<SimplexId>& out) {
  out.clear();
  if (dim == 0) {
    if (g.is_critical(0, v)) out.push_back(v);
    return;
  }
  std::vector<SimplexId> star;
  t.cofaces({0, v}, dim, star);
  for (SimplexId s : star)
    if (g.is_critical(dim, s) && max_vertex(t, f, dim, s) == v) out.push_back(s);
}

}  // namespace detail

/// Matches each interior PL critical point p of index I with the highest
/// critical I-simplices of its star that have p as highest vertex, as many
/// as its multiplicity. Points on the boundary are not matched; critical
/// simplices touching the boundary never enter the residue. On the initial
/// gradient the residue is the set to cancel; after enforce_pl_compliance it
/// is empty on closed manifolds.
template <Triangulation T>
MatchingXi match_pl(const T& t, const OrderField& f, const DiscreteGradient& g,
                    const std::vector<PLCriticalPoint>& pl) {
  MatchingXi xi;
  std::vector<const PLCriticalPoint*> order;
  for (const auto& p : pl)
    if (!p.boundary) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(),
                   [&f](const PLCriticalPoint* a, const PLCriticalPoint* b) { return f.rank(a->vertex) < f.rank(b->vertex); });

  std::set<SimplexRef> claimed;
  std::vector<SimplexId> cand;
  for (const PLCriticalPoint* p : order) {
    detail::critical_in_lower_star(t, f, g, p->vertex, p->index, cand);
    std::vector<std::pair<SimplexKey, SimplexId>> keyed;
    for (SimplexId s : cand)
      if (!claimed.count({p->index, s})) keyed.emplace_back(simplex_key(t, f, p->index, s), s);
    std::sort(keyed.begin(), keyed.end(), std::greater<>());
    PLMatch m{*p, {}};
    for (std::size_t i = 0; i < keyed.size() && static_cast<int>(i) < p->multiplicity; ++i) {
      m.simplices.push_back({p->index, keyed[i].second});
      claimed.insert({p->index, keyed[i].second});
    }
    if (static_cast<int>(m.simplices.size()) < p->multiplicity) xi.short_matches.push_back(*p);
    xi.matches.push_back(std::move(m));
  }
  for (int i = 0; i <= g.dimension(); ++i)
    for (SimplexId s : g.critical(i))
      if (!claimed.count({i, s}) && !touches_boundary(t, i, s)) xi.residue.push_back({i, s});
  std::sort(xi.residue.begin(), xi.residue.end());
  return xi;
}

struct Cancellation {
  SimplexRef lower;
  SimplexRef upper;
  double weight = 0;
};

struct ComplianceReport {
  std::vector<Cancellation> saddle_extremum;  // (d-1, d) graph
  std::vector<Cancellation> saddle_saddle;    // (1, 2) graph, 3D only
  std::vector<SimplexRef> residue;            // residue simplices still critical
  bool closed = false;
  bool failed = false;  // residue left on a closed manifold
  std::string message;
};

/// Cancellation graph between critical simplices of dimensions i and i+1.
/// Arcs are V-paths descending from each critical (i+1)-simplex; an arc can
/// be cancelled when both ends are removable and the path is unique. The
/// cheapest such arc (by value difference, then rank difference of the
/// highest vertices, then ids) goes first; the arcs
/// touched by the reversed path are recomputed.
template <Triangulation T>
class CancellationGraph {
 public:
  CancellationGraph(const T& t, const OrderField& f, DiscreteGradient& g, int lower_dim,
                    std::function<bool(SimplexRef)> removable,
                    std::function<void(SimplexRef, SimplexRef)> on_cancel = {})
      : t_(t), f_(f), g_(g), lower_dim_(lower_dim), removable_(std::move(removable)), on_cancel_(std::move(on_cancel)) {
    for (SimplexId u : g_.critical(lower_dim_ + 1)) recompute(u);
  }

  std::vector<Cancellation> run() {
    std::vector<Cancellation> done;
    while (!eligible_.empty()) {
      const auto [w, rank_gap, l, u] = *eligible_.begin();
      // Removability only ever shrinks, so a stale arc can be dropped for good.
      if (!removable_({lower_dim_, l}) || !removable_({lower_dim_ + 1, u})) {
        eligible_.erase(eligible_.begin());
        continue;
      }
      const VPathExploration ex(t_, g_, {lower_dim_ + 1, u}, VPathDirection::Descending, 2);
      VPath path;
      path.cells = ex.path_to(l);
      path.start = {lower_dim_ + 1, u};
      path.end = {lower_dim_, l};
      path.multiplicity = 1;
      cancel_pair(g_, path);
      if (on_cancel_) on_cancel_({lower_dim_, l}, {lower_dim_ + 1, u});
      done.push_back({{lower_dim_, l}, {lower_dim_ + 1, u}, w});

      std::set<SimplexId> affected;
      if (auto it = arcs_into_.find(l); it != arcs_into_.end()) affected.insert(it->second.begin(), it->second.end());
      for (std::size_t i = 2; i < path.cells.size(); i += 2)
        if (auto it = in_region_.find(path.cells[i].id); it != in_region_.end())
          affected.insert(it->second.begin(), it->second.end());
      affected.erase(u);
      drop(u);
      arcs_into_.erase(l);
      for (SimplexId a : affected)
        if (g_.is_critical(lower_dim_ + 1, a)) recompute(a);
    }
    return done;
  }

 private:
  struct Arc {
    SimplexId lower;
    std::int64_t count;
    double weight;
    SimplexId rank_gap;
  };
  struct Upper {
    std::vector<Arc> arcs;
    std::vector<SimplexId> region;
  };

  void drop(SimplexId u) {
    auto it = uppers_.find(u);
    if (it == uppers_.end()) return;
    for (const Arc& a : it->second.arcs) {
      eligible_.erase({a.weight, a.rank_gap, a.lower, u});
      if (auto in = arcs_into_.find(a.lower); in != arcs_into_.end()) in->second.erase(u);
    }
    for (SimplexId x : it->second.region)
      if (auto in = in_region_.find(x); in != in_region_.end()) {
        in->second.erase(u);
        if (in->second.empty()) in_region_.erase(in);
      }
    uppers_.erase(it);
  }

  void recompute(SimplexId u) {
    drop(u);
    const VPathExploration ex(t_, g_, {lower_dim_ + 1, u}, VPathDirection::Descending, 2);
    Upper node;
    node.region = ex.nodes();
    for (SimplexId x : node.region) in_region_[x].insert(u);
    const double fu = simplex_value(t_, f_, lower_dim_ + 1, u);
    const SimplexId ru = f_.rank(max_vertex(t_, f_, lower_dim_ + 1, u));
    const bool u_removable = removable_({lower_dim_ + 1, u});
    for (const auto& tg : ex.targets()) {
      const double w = fu - simplex_value(t_, f_, lower_dim_, tg.id);
      const SimplexId gap = ru - f_.rank(max_vertex(t_, f_, lower_dim_, tg.id));
      node.arcs.push_back({tg.id, tg.count, w, gap});
      arcs_into_[tg.id].insert(u);
      if (u_removable && tg.count == 1 && removable_({lower_dim_, tg.id})) eligible_.insert({w, gap, tg.id, u});
    }
    uppers_[u] = std::move(node);
  }

  const T& t_;
  const OrderField& f_;
  DiscreteGradient& g_;
  int lower_dim_;
  std::function<bool(SimplexRef)> removable_;
  std::function<void(SimplexRef, SimplexRef)> on_cancel_;
  std::map<SimplexId, Upper> uppers_;
  std::unordered_map<SimplexId, std::set<SimplexId>> arcs_into_;
  std::unordered_map<SimplexId, std::set<SimplexId>> in_region_;  // node -> uppers reaching it
  std::set<std::tuple<double, SimplexId, SimplexId, SimplexId>> eligible_;  // (weight, rank gap, lower, upper)
};

/// Cancels the critical simplices that no PL critical point needs: first
/// through the (d-1, d) graph, then in 3D through the (1, 2) graph whose arcs
/// are saddle connectors. A critical I-simplex whose highest vertex is p can
/// be cancelled while the lower star of p keeps more critical I-simplices
/// than the multiplicity of p as an index-I point (zero when p is regular).
/// The quotas come from the points of `xi`; calling match_pl again on the
/// simplified gradient gives the final matching.
template <Triangulation T>
ComplianceReport enforce_pl_compliance(const T& t, const OrderField& f, DiscreteGradient& g, const MatchingXi& xi) {
  ComplianceReport rep;
  const int d = t.dimension();
  rep.closed = is_closed(t);
  std::map<std::pair<int, SimplexId>, int> quota, live;
  for (const auto& m : xi.matches) quota[{m.point.index, m.point.vertex}] += m.point.multiplicity;
  for (int i = 0; i <= d; ++i)
    for (SimplexId s : g.critical(i))
      if (!touches_boundary(t, i, s)) ++live[{i, max_vertex(t, f, i, s)}];
  auto key = [&](SimplexRef s) { return std::pair{s.dim, max_vertex(t, f, s.dim, s.id)}; };
  auto removable = [&](SimplexRef s) {
    if (!g.is_critical(s.dim, s.id) || touches_boundary(t, s.dim, s.id)) return false;
    const auto k = key(s);
    const auto q = quota.find(k);
    return live[k] > (q == quota.end() ? 0 : q->second);
  };
  auto cancelled = [&](SimplexRef a, SimplexRef b) {
    --live[key(a)];
    --live[key(b)];
  };
  rep.saddle_extremum = CancellationGraph<T>(t, f, g, d - 1, removable, cancelled).run();
  if (d == 3) rep.saddle_saddle = CancellationGraph<T>(t, f, g, 1, removable, cancelled).run();
  for (int i = 0; i <= d; ++i)
    for (SimplexId s : g.critical(i))
      if (removable({i, s})) rep.residue.push_back({i, s});
  if (!rep.residue.empty() && rep.closed) {
    rep.failed = true;
    rep.message = std::to_string(rep.residue.size()) +
                  " unmatched critical simplices could not be cancelled on a closed manifold";
  }
  return rep;
}

}  // namespace topokit
