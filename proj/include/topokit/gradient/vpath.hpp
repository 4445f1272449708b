#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topokit/gradient/discrete_gradient.hpp"

namespace topokit {

enum class VPathDirection { Ascending, Descending };

/// Alternating sequence of simplices from one critical simplex to another.
/// Descending paths go from a critical (i+1)-simplex through i-faces;
/// ascending paths from a critical i-simplex through (i+1)-co-faces.
struct VPath {
  std::vector<SimplexRef> cells;
  SimplexRef start;
  SimplexRef end;
  double weight = 0;              // |f(end) - f(start)|, simplex value = highest vertex
  std::int64_t multiplicity = 1;  // number of distinct paths between start and end
};

/// All V-paths leaving one critical simplex, as a DAG: every node is a
/// simplex of the start's dimension, linked through the pairs of the
/// gradient. Path counts are exact up to `cap`.
class VPathExploration {
 public:
  template <Triangulation T>
  VPathExploration(const T& t, const DiscreteGradient& g, SimplexRef start, VPathDirection dir,
                   std::int64_t cap = std::numeric_limits<std::int64_t>::max() / 4)
      : start_(start), dir_(dir), cap_(cap) {
    node_dim_ = start.dim;
    via_dim_ = dir == VPathDirection::Descending ? start.dim - 1 : start.dim + 1;
    if (via_dim_ < 0 || via_dim_ > g.dimension()) return;
    discover(t, g);
    propagate();
  }

  struct Target {
    SimplexId id;
    std::int64_t count;  // saturated at the cap
    bool odd;            // exact parity of the number of paths
  };

  SimplexRef start() const { return start_; }
  int target_dim() const { return via_dim_; }
  // Critical simplices reached, in id order.
  const std::vector<Target>& targets() const { return targets_; }
  // Simplices of the start's dimension visited, in topological order.
  const std::vector<SimplexId>& nodes() const { return nodes_; }

  // One path to `target`; the unique one when its count is 1.
  std::vector<SimplexRef> path_to(SimplexId target) const {
    std::vector<SimplexRef> rev;
    rev.push_back({via_dim_, target});
    std::size_t n = target_pred_.at(target);
    while (true) {
      rev.push_back({node_dim_, nodes_[n]});
      const auto& p = pred_[n];
      if (p.node == kNone) break;
      rev.push_back({via_dim_, p.via});
      n = p.node;
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  struct Exit {
    SimplexId via;     // simplex of via_dim crossed
    std::size_t next;  // node index, or kNone when `via` is a critical target
  };
  struct Pred {
    std::size_t node = kNone;
    SimplexId via = kNoSimplex;
  };

  template <Triangulation T>
  void collect_exits(const T& t, const DiscreteGradient& g, SimplexId node, std::vector<SimplexId>& buf,
                     std::vector<std::pair<SimplexId, SimplexId>>& out) const {
    // (via, next node id) with next == kNoSimplex for a critical target.
    out.clear();
    if (dir_ == VPathDirection::Descending) {
      t.faces({node_dim_, node}, via_dim_, buf);
      const SimplexId entry = g.paired_down(node_dim_, node);
      for (SimplexId s : buf) {
        if (s == entry) continue;
        if (g.is_critical(via_dim_, s)) out.emplace_back(s, kNoSimplex);
        else if (const SimplexId nx = g.paired_up(via_dim_, s); nx != kNoSimplex) out.emplace_back(s, nx);
      }
    } else {
      t.cofaces({node_dim_, node}, via_dim_, buf);
      const SimplexId entry = g.paired_up(node_dim_, node);
      for (SimplexId s : buf) {
        if (s == entry) continue;
        if (g.is_critical(via_dim_, s)) out.emplace_back(s, kNoSimplex);
        else if (const SimplexId nx = g.paired_down(via_dim_, s); nx != kNoSimplex) out.emplace_back(s, nx);
      }
    }
  }

  template <Triangulation T>
  void discover(const T& t, const DiscreteGradient& g) {
    std::unordered_map<SimplexId, std::size_t> index;
    std::vector<SimplexId> ids;
    std::vector<std::vector<Exit>> exits;
    std::vector<SimplexId> buf;
    std::vector<std::pair<SimplexId, SimplexId>> raw;
    auto add = [&](SimplexId id) {
      auto [it, inserted] = index.emplace(id, ids.size());
      if (inserted) {
        ids.push_back(id);
        exits.emplace_back();
      }
      return std::pair{it->second, inserted};
    };
    add(start_.id);
    // iterative DFS producing a post-order
    std::vector<std::size_t> post;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    std::vector<char> expanded(1, 0);
    while (!stack.empty()) {
      auto& [n, k] = stack.back();
      if (!expanded[n]) {
        expanded[n] = 1;
        collect_exits(t, g, ids[n], buf, raw);
        std::vector<Exit> ex;
        ex.reserve(raw.size());
        for (auto [via, nx] : raw) {
          if (nx == kNoSimplex) {
            ex.push_back({via, kNone});
          } else {
            auto [ni, fresh] = add(nx);
            if (fresh) expanded.push_back(0);
            ex.push_back({via, ni});
          }
        }
        exits[n] = std::move(ex);
      }
      if (k < exits[n].size()) {
        const Exit e = exits[n][k++];
        if (e.next != kNone && expanded[e.next] == 0) stack.emplace_back(e.next, 0);
        continue;
      }
      post.push_back(n);
      stack.pop_back();
    }
    // Reverse post-order is topological because the gradient has no closed paths.
    std::vector<std::size_t> order(post.rbegin(), post.rend());
    std::vector<std::size_t> remap(ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) remap[order[i]] = i;
    nodes_.resize(ids.size());
    exits_.resize(ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      nodes_[i] = ids[order[i]];
      exits_[i] = std::move(exits[order[i]]);
      for (auto& e : exits_[i])
        if (e.next != kNone) e.next = remap[e.next];
    }
  }

  void propagate() {
    std::vector<std::int64_t> count(nodes_.size(), 0);
    std::vector<char> odd(nodes_.size(), 0);
    pred_.assign(nodes_.size(), Pred{});
    if (nodes_.empty()) return;
    count[0] = 1;
    odd[0] = 1;
    std::unordered_map<SimplexId, std::pair<std::int64_t, char>> tcount;
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
      if (count[n] == 0) continue;
      for (const Exit& e : exits_[n]) {
        if (e.next == kNone) {
          auto& [c, o] = tcount[e.via];
          c = std::min(cap_, c + count[n]);
          o ^= odd[n];
          target_pred_[e.via] = n;
        } else {
          if (e.next <= n) throw InvariantError("closed V-path detected in discrete gradient");
          count[e.next] = std::min(cap_, count[e.next] + count[n]);
          odd[e.next] ^= odd[n];
          pred_[e.next] = {n, e.via};
        }
      }
    }
    for (const auto& [id, co] : tcount) targets_.push_back({id, co.first, co.second != 0});
    std::sort(targets_.begin(), targets_.end(), [](const Target& a, const Target& b) { return a.id < b.id; });
  }

  SimplexRef start_;
  VPathDirection dir_;
  std::int64_t cap_;
  int node_dim_ = 0;
  int via_dim_ = 0;
  std::vector<SimplexId> nodes_;
  std::vector<std::vector<Exit>> exits_;
  std::vector<Pred> pred_;
  std::unordered_map<SimplexId, std::size_t> target_pred_;
  std::vector<Target> targets_;
};

/// Maximal V-paths from a critical simplex, one per reached critical
/// simplex (with the number of distinct paths as multiplicity). Paths that
/// die at a simplex paired outside the traced dimension pair are dropped.
template <Triangulation T>
std::vector<VPath> trace_vpaths(const T& t, const OrderField& f, const DiscreteGradient& g, SimplexRef start,
                                VPathDirection dir) {
  std::vector<VPath> out;
  const VPathExploration ex(t, g, start, dir);
  const double f0 = simplex_value(t, f, start.dim, start.id);
  for (const auto& tg : ex.targets()) {
    VPath p;
    p.cells = ex.path_to(tg.id);
    p.start = start;
    p.end = {ex.target_dim(), tg.id};
    p.weight = std::abs(simplex_value(t, f, p.end.dim, p.end.id) - f0);
    p.multiplicity = tg.count;
    out.push_back(std::move(p));
  }
  return out;
}

/// Reverses the gradient along a V-path between two critical simplices.
/// Afterwards both endpoints are paired and nothing else changes
/// criticality.
inline void cancel_pair(DiscreteGradient& g, const VPath& path) {
  if (path.multiplicity != 1) throw std::invalid_argument("cancel_pair: V-path is not unique between its endpoints");
  const auto& c = path.cells;
  if (c.size() < 2 || c.size() % 2 != 0) throw std::invalid_argument("cancel_pair: malformed V-path");
  if (!g.is_critical(c.front().dim, c.front().id) || !g.is_critical(c.back().dim, c.back().id))
    throw std::invalid_argument("cancel_pair: endpoints must be critical");
  auto lower = [](SimplexRef a, SimplexRef b) { return a.dim < b.dim ? std::pair{a, b} : std::pair{b, a}; };
  for (std::size_t j = 1; j + 1 < c.size(); j += 2) {
    const auto [lo, hi] = lower(c[j], c[j + 1]);
    if (g.paired_up(lo.dim, lo.id) != hi.id) throw std::invalid_argument("cancel_pair: path does not follow the gradient");
    g.unpair_up(lo.dim, lo.id);
  }
  for (std::size_t j = 0; j + 1 < c.size(); j += 2) {
    const auto [lo, hi] = lower(c[j], c[j + 1]);
    g.pair(lo.dim, lo.id, hi.id);
  }
}

}  // namespace topokit
