#pragma once

#include <algorithm>
#include <vector>

#include "topokit/core/union_find.hpp"
#include "topokit/scalar/order_field.hpp"
#include "topokit/triangulation/triangulation.hpp"

namespace topokit {

enum class MergeVariant { Join, Split };
enum class NodeType { Leaf, Saddle, Root };

inline const char* node_type_name(NodeType t) {
  switch (t) {
    case NodeType::Leaf: return "leaf";
    case NodeType::Saddle: return "saddle";
    case NodeType::Root: return "root";
  }
  return "?";
}

struct TreePair {
  SimplexId extremum;  // leaf that dies
  SimplexId saddle;    // vertex where it dies
};

/// Join tree (sub-level sets) or split tree (sur-level sets). Nodes are in
/// sweep order; every non-root node has one parent reached by the sweep.
struct MergeTree {
  struct Node {
    SimplexId vertex;
    NodeType type;
    int multiplicity = 1;  // components merged minus one, for saddles
    std::size_t parent = kNoParent;
  };
  static constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

  MergeVariant variant = MergeVariant::Join;
  std::vector<Node> nodes;
  // Index of the node at the bottom of the arc holding each vertex (its own
  // node for critical vertices).
  std::vector<std::size_t> vertex_arc;
  // Elder-rule pairs in sweep order; a saddle of multiplicity k appears k times.
  std::vector<TreePair> pairs;
  // Leaf left unpaired: the global extremum of the sweep.
  SimplexId survivor = kNoSimplex;

  std::vector<SimplexId> leaves() const {
    std::vector<SimplexId> out;
    for (const auto& n : nodes)
      if (n.type == NodeType::Leaf) out.push_back(n.vertex);
    std::sort(out.begin(), out.end());
    return out;
  }
  std::vector<SimplexId> saddles() const {
    std::vector<SimplexId> out;
    for (const auto& n : nodes)
      if (n.type == NodeType::Saddle) out.push_back(n.vertex);
    std::sort(out.begin(), out.end());
    return out;
  }
  SimplexId root() const { return nodes.empty() ? kNoSimplex : nodes.back().vertex; }
};

/// Union-find sweep over the vertices in ascending (join) or descending
/// (split) order. A vertex merging k >= 2 components becomes a saddle of
/// multiplicity k-1 and kills the k-1 youngest components (Elder rule).
template <Triangulation T>
MergeTree build_merge_tree(const T& t, const OrderField& f, MergeVariant variant) {
  const SimplexId n = t.vertex_count();
  if (f.size() != n) throw DataError("field size does not match the vertex count");
  MergeTree tree;
  tree.variant = variant;
  tree.vertex_arc.assign(static_cast<std::size_t>(n), MergeTree::kNoParent);
  const bool join = variant == MergeVariant::Join;
  auto step = [&](SimplexId r) { return join ? r : n - 1 - r; };      // sweep position -> rank
  auto swept = [&](SimplexId v) { return join ? f.rank(v) : n - 1 - f.rank(v); };

  UnionFind uf(n);
  std::vector<std::size_t> head(static_cast<std::size_t>(n), MergeTree::kNoParent);  // per set root: top node
  std::vector<SimplexId> oldest(static_cast<std::size_t>(n), kNoSimplex);          // per set root: surviving leaf
  std::vector<SimplexId> nb, roots;
  for (SimplexId i = 0; i < n; ++i) {
    const SimplexId v = f.vertex_at(step(i));
    t.vertex_neighbors(v, nb);
    roots.clear();
    for (SimplexId u : nb)
      if (swept(u) < i) roots.push_back(uf.find(u));
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    const bool last = i == n - 1;

    if (roots.empty()) {
      tree.nodes.push_back({v, last ? NodeType::Root : NodeType::Leaf, 1, MergeTree::kNoParent});
      const std::size_t id = tree.nodes.size() - 1;
      tree.vertex_arc[static_cast<std::size_t>(v)] = id;
      head[static_cast<std::size_t>(v)] = id;
      oldest[static_cast<std::size_t>(v)] = v;
      if (!last) continue;
      tree.survivor = v;
      break;
    }
    if (roots.size() == 1 && !last) {
      uf.unite(roots[0], v);
      const SimplexId r = uf.find(v);
      const SimplexId old = roots[0];
      head[static_cast<std::size_t>(r)] = head[static_cast<std::size_t>(old)];
      oldest[static_cast<std::size_t>(r)] = oldest[static_cast<std::size_t>(old)];
      tree.vertex_arc[static_cast<std::size_t>(v)] = head[static_cast<std::size_t>(r)];
      continue;
    }

    // Saddle (or the root): the component with the oldest extremum survives.
    std::sort(roots.begin(), roots.end(), [&](SimplexId a, SimplexId b) {
      return swept(oldest[static_cast<std::size_t>(a)]) < swept(oldest[static_cast<std::size_t>(b)]);
    });
    const int k = static_cast<int>(roots.size());
    tree.nodes.push_back({v, last ? NodeType::Root : NodeType::Saddle, std::max(1, k - 1), MergeTree::kNoParent});
    const std::size_t id = tree.nodes.size() - 1;
    tree.vertex_arc[static_cast<std::size_t>(v)] = id;
    for (SimplexId r : roots) tree.nodes[head[static_cast<std::size_t>(r)]].parent = id;
    // Youngest components die first.
    for (int j = k - 1; j >= 1; --j) tree.pairs.push_back({oldest[static_cast<std::size_t>(roots[j])], v});
    const SimplexId keep = oldest[static_cast<std::size_t>(roots[0])];
    for (SimplexId r : roots) uf.unite(r, v);
    const SimplexId r = uf.find(v);
    head[static_cast<std::size_t>(r)] = id;
    oldest[static_cast<std::size_t>(r)] = keep;
    if (last) tree.survivor = keep;
  }
  // Elder pairs are produced per saddle from youngest to oldest; order them
  // by saddle sweep position, then by extremum sweep position.
  std::stable_sort(tree.pairs.begin(), tree.pairs.end(), [&](const TreePair& a, const TreePair& b) {
    if (a.saddle != b.saddle) return swept(a.saddle) < swept(b.saddle);
    return swept(a.extremum) < swept(b.extremum);
  });
  return tree;
}

/// Elder-rule pairs (extremum, saddle) of a merge tree; the global extremum
/// stays unpaired.
inline std::vector<TreePair> persistence_pairs_extrema(const MergeTree& tree) { return tree.pairs; }

}  // namespace topokit
