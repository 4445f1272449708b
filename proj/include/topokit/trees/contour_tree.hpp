#pragma once

#include <algorithm>
#include <deque>
#include <string>
#include <vector>

#include "topokit/core/union_find.hpp"
#include "topokit/scalar/order_field.hpp"
#include "topokit/triangulation/triangulation.hpp"

namespace topokit {

enum class ContourNodeType { Minimum, Saddle, Maximum };

inline const char* contour_node_type_name(ContourNodeType t) {
  switch (t) {
    case ContourNodeType::Minimum: return "minimum";
    case ContourNodeType::Saddle: return "saddle";
    case ContourNodeType::Maximum: return "maximum";
  }
  return "?";
}

struct ContourTree {
  struct Node {
    SimplexId vertex;
    ContourNodeType type;
  };
  struct Arc {
    std::size_t lower;  // node indices
    std::size_t upper;
  };
  std::vector<Node> nodes;        // in ascending field order
  std::vector<Arc> arcs;          // sorted by (lower, upper)
  std::vector<std::size_t> vertex_arc;  // arc holding each vertex; nodes take their first incident arc
};

namespace detail {

// Augmented merge tree over every vertex: parent pointer towards the root of
// the sweep, plus child count and xor of child ids (enough to recover the
// single child of a vertex with one child).
struct AugmentedTree {
  std::vector<SimplexId> parent;
  std::vector<SimplexId> children;
  std::vector<SimplexId> child_xor;
};

template <Triangulation T>
AugmentedTree augmented_tree(const T& t, const OrderField& f, bool join) {
  const SimplexId n = t.vertex_count();
  AugmentedTree a;
  a.parent.assign(static_cast<std::size_t>(n), kNoSimplex);
  a.children.assign(static_cast<std::size_t>(n), 0);
  a.child_xor.assign(static_cast<std::size_t>(n), 0);
  UnionFind uf(static_cast<std::size_t>(n));
  std::vector<SimplexId> last(static_cast<std::size_t>(n));
  std::vector<SimplexId> nb;
  std::vector<std::size_t> roots;
  for (SimplexId i = 0; i < n; ++i) {
    const SimplexId v = f.vertex_at(join ? i : n - 1 - i);
    const SimplexId pos = join ? f.rank(v) : n - 1 - f.rank(v);
    t.vertex_neighbors(v, nb);
    roots.clear();
    for (SimplexId u : nb) {
      const SimplexId pu = join ? f.rank(u) : n - 1 - f.rank(u);
      if (pu < pos) roots.push_back(uf.find(static_cast<std::size_t>(u)));
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    for (std::size_t r : roots) {
      const SimplexId c = last[r];
      a.parent[static_cast<std::size_t>(c)] = v;
      ++a.children[static_cast<std::size_t>(v)];
      a.child_xor[static_cast<std::size_t>(v)] ^= c;
      uf.unite(r, static_cast<std::size_t>(v));
    }
    last[uf.find(static_cast<std::size_t>(v))] = v;
  }
  return a;
}

inline void remove_from_tree(AugmentedTree& a, SimplexId x) {
  const auto xi = static_cast<std::size_t>(x);
  const SimplexId p = a.parent[xi];
  SimplexId c = kNoSimplex;
  if (a.children[xi] == 1) c = a.child_xor[xi];
  if (p != kNoSimplex) {
    const auto pi = static_cast<std::size_t>(p);
    a.child_xor[pi] ^= x;
    --a.children[pi];
    if (c != kNoSimplex) {
      a.child_xor[pi] ^= c;
      ++a.children[pi];
    }
  }
  if (c != kNoSimplex) a.parent[static_cast<std::size_t>(c)] = p;
  a.parent[xi] = kNoSimplex;
  a.children[xi] = 0;
  a.child_xor[xi] = 0;
}

}  // namespace detail

/// Throws DataError unless the domain is known to be simply connected as
/// far as the Euler characteristic can tell: a disk or sphere in 2D, a ball
/// in 3D. Closed 3-manifolds all have zero Euler characteristic and pass.
template <Triangulation T>
void require_simply_connected(const T& t) {
  const std::int64_t chi = euler_characteristic(t);
  const bool closed = is_closed(t);
  bool ok = true;
  if (t.dimension() == 2) ok = closed ? chi == 2 : chi == 1;
  else if (!closed) ok = chi == 1;
  if (!ok)
    throw DataError("contour tree requires a simply connected domain (Euler characteristic " + std::to_string(chi) +
                    (closed ? ", closed" : ", with boundary") + ")");
}

/// Contour tree by combining the augmented join and split trees: leaves
/// are peeled off one at a time, then regular vertices are contracted away.
template <Triangulation T>
ContourTree build_contour_tree(const T& t, const OrderField& f) {
  const SimplexId n = t.vertex_count();
  if (f.size() != n) throw DataError("field size does not match the vertex count");
  require_simply_connected(t);
  detail::AugmentedTree jt = detail::augmented_tree(t, f, true);   // children below
  detail::AugmentedTree st = detail::augmented_tree(t, f, false);  // children above

  std::vector<char> gone(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<SimplexId>> adj(static_cast<std::size_t>(n));
  auto upper_leaf = [&](SimplexId x) {
    return st.children[static_cast<std::size_t>(x)] == 0 && jt.children[static_cast<std::size_t>(x)] == 1;
  };
  auto lower_leaf = [&](SimplexId x) {
    return jt.children[static_cast<std::size_t>(x)] == 0 && st.children[static_cast<std::size_t>(x)] == 1;
  };
  std::deque<SimplexId> queue;
  for (SimplexId x = 0; x < n; ++x)
    if (upper_leaf(x) || lower_leaf(x)) queue.push_back(x);
  SimplexId left = n;
  while (left > 1 && !queue.empty()) {
    const SimplexId x = queue.front();
    queue.pop_front();
    if (gone[static_cast<std::size_t>(x)]) continue;
    SimplexId y;
    if (upper_leaf(x)) y = st.parent[static_cast<std::size_t>(x)];
    else if (lower_leaf(x)) y = jt.parent[static_cast<std::size_t>(x)];
    else continue;
    if (y == kNoSimplex) continue;
    adj[static_cast<std::size_t>(x)].push_back(y);
    adj[static_cast<std::size_t>(y)].push_back(x);
    const SimplexId jp = jt.parent[static_cast<std::size_t>(x)], sp = st.parent[static_cast<std::size_t>(x)];
    const SimplexId jc = jt.children[static_cast<std::size_t>(x)] == 1 ? jt.child_xor[static_cast<std::size_t>(x)] : kNoSimplex;
    const SimplexId sc = st.children[static_cast<std::size_t>(x)] == 1 ? st.child_xor[static_cast<std::size_t>(x)] : kNoSimplex;
    detail::remove_from_tree(jt, x);
    detail::remove_from_tree(st, x);
    gone[static_cast<std::size_t>(x)] = 1;
    --left;
    for (SimplexId z : {y, jp, sp, jc, sc})
      if (z != kNoSimplex && !gone[static_cast<std::size_t>(z)] && (upper_leaf(z) || lower_leaf(z))) queue.push_back(z);
  }
  if (left > 1) throw DataError("contour tree: join and split trees do not combine (domain not simply connected?)");

  // Contract regular vertices: one neighbour below and one above.
  auto is_node = [&](SimplexId v) {
    const auto& a = adj[static_cast<std::size_t>(v)];
    if (a.size() != 2) return true;
    return f.vertex_less(a[0], v) == f.vertex_less(a[1], v);
  };
  ContourTree ct;
  std::vector<std::size_t> node_of(static_cast<std::size_t>(n), static_cast<std::size_t>(-1));
  for (SimplexId r = 0; r < n; ++r) {
    const SimplexId v = f.vertex_at(r);
    if (!is_node(v)) continue;
    int below = 0, above = 0;
    for (SimplexId u : adj[static_cast<std::size_t>(v)]) (f.vertex_less(u, v) ? below : above)++;
    const ContourNodeType type = below == 0 && above <= 1 ? ContourNodeType::Minimum
                                 : above == 0 && below <= 1 ? ContourNodeType::Maximum
                                                            : ContourNodeType::Saddle;
    node_of[static_cast<std::size_t>(v)] = ct.nodes.size();
    ct.nodes.push_back({v, type});
  }
  ct.vertex_arc.assign(static_cast<std::size_t>(n), static_cast<std::size_t>(-1));
  std::vector<std::vector<SimplexId>> interior;
  for (std::size_t i = 0; i < ct.nodes.size(); ++i) {
    const SimplexId a = ct.nodes[i].vertex;
    for (SimplexId u : adj[static_cast<std::size_t>(a)]) {
      if (f.vertex_less(u, a)) continue;
      std::vector<SimplexId> chain;
      SimplexId prev = a, cur = u;
      while (!is_node(cur)) {
        chain.push_back(cur);
        const auto& nb = adj[static_cast<std::size_t>(cur)];
        const SimplexId next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
      }
      ct.arcs.push_back({i, node_of[static_cast<std::size_t>(cur)]});
      interior.push_back(std::move(chain));
    }
  }
  std::vector<std::size_t> order(ct.arcs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::pair{ct.arcs[a].lower, ct.arcs[a].upper} < std::pair{ct.arcs[b].lower, ct.arcs[b].upper};
  });
  std::vector<ContourTree::Arc> sorted;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t a = order[k];
    sorted.push_back(ct.arcs[a]);
    for (SimplexId v : interior[a]) ct.vertex_arc[static_cast<std::size_t>(v)] = k;
    for (std::size_t end : {ct.arcs[a].lower, ct.arcs[a].upper}) {
      auto& slot = ct.vertex_arc[static_cast<std::size_t>(ct.nodes[end].vertex)];
      if (slot == static_cast<std::size_t>(-1)) slot = k;
    }
  }
  ct.arcs = std::move(sorted);
  if (ct.arcs.empty())
    for (auto& s : ct.vertex_arc) s = 0;
  return ct;
}

}  // namespace topokit
