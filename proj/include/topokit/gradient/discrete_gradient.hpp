#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <vector>

#include "topokit/core/parallel.hpp"
#include "topokit/core/types.hpp"
#include "topokit/scalar/order_field.hpp"
#include "topokit/triangulation/triangulation.hpp"

namespace topokit {

/// Pairing of i-simplices with (i+1)-simplices. Unpaired simplices are
/// critical.
class DiscreteGradient {
 public:
  DiscreteGradient() = default;

  explicit DiscreteGradient(int dim, const std::array<SimplexId, 4>& counts) : dim_(dim), counts_(counts) {
    for (int i = 0; i <= dim_; ++i) {
      if (i < dim_) up_[i].assign(static_cast<std::size_t>(counts_[i]), kNoSimplex);
      if (i > 0) down_[i].assign(static_cast<std::size_t>(counts_[i]), kNoSimplex);
    }
  }

  int dimension() const { return dim_; }
  SimplexId count(int dim) const { return counts_[dim]; }

  // (dim+1)-simplex paired with the dim-simplex s, or kNoSimplex.
  SimplexId paired_up(int dim, SimplexId s) const {
    return dim < dim_ ? up_[dim][static_cast<std::size_t>(s)] : kNoSimplex;
  }
  // (dim-1)-simplex paired with the dim-simplex s, or kNoSimplex.
  SimplexId paired_down(int dim, SimplexId s) const {
    return dim > 0 ? down_[dim][static_cast<std::size_t>(s)] : kNoSimplex;
  }
  bool is_critical(int dim, SimplexId s) const {
    return paired_up(dim, s) == kNoSimplex && paired_down(dim, s) == kNoSimplex;
  }

  // Pairs the dim-simplex s with the (dim+1)-simplex t; both must be free.
  void pair(int dim, SimplexId s, SimplexId t) {
    up_[dim][static_cast<std::size_t>(s)] = t;
    down_[dim + 1][static_cast<std::size_t>(t)] = s;
  }

  // Removes the pair that the dim-simplex s belongs to as the lower member.
  void unpair_up(int dim, SimplexId s) {
    const SimplexId t = up_[dim][static_cast<std::size_t>(s)];
    if (t == kNoSimplex) return;
    up_[dim][static_cast<std::size_t>(s)] = kNoSimplex;
    down_[dim + 1][static_cast<std::size_t>(t)] = kNoSimplex;
  }

  std::vector<SimplexId> critical(int dim) const {
    std::vector<SimplexId> out;
    for (SimplexId s = 0; s < counts_[dim]; ++s)
      if (is_critical(dim, s)) out.push_back(s);
    return out;
  }

  std::array<SimplexId, 4> critical_counts() const {
    std::array<SimplexId, 4> c{};
    for (int i = 0; i <= dim_; ++i) c[i] = static_cast<SimplexId>(critical(i).size());
    return c;
  }

  SimplexId pair_count() const {
    SimplexId n = 0;
    for (int i = 0; i < dim_; ++i)
      for (SimplexId t : up_[i]) n += t != kNoSimplex;
    return n;
  }

  friend bool operator==(const DiscreteGradient&, const DiscreteGradient&) = default;

 private:
  int dim_ = 0;
  std::array<SimplexId, 4> counts_{};
  std::array<std::vector<SimplexId>, 4> up_;
  std::array<std::vector<SimplexId>, 4> down_;
};

/// Vertex ranks of a simplex sorted in descending order; comparing these
/// lexicographically is the simplex order used by the gradient
/// construction. Unused slots hold -1.
using SimplexKey = std::array<SimplexId, 4>;

template <Triangulation T>
SimplexKey simplex_key(const T& t, const OrderField& f, int dim, SimplexId s) {
  SimplexKey k{-1, -1, -1, -1};
  const SimplexVertices v = t.vertices(dim, s);
  for (int i = 0; i < v.size; ++i) k[i] = f.rank(v[i]);
  std::sort(k.begin(), k.begin() + v.size, std::greater<>());
  return k;
}

// Highest vertex of a simplex in the field order.
template <Triangulation T>
SimplexId max_vertex(const T& t, const OrderField& f, int dim, SimplexId s) {
  const SimplexVertices v = t.vertices(dim, s);
  SimplexId best = v[0];
  for (int i = 1; i < v.size; ++i)
    if (f.rank(v[i]) > f.rank(best)) best = v[i];
  return best;
}

// Scalar value of a simplex: value of its highest vertex.
template <Triangulation T>
double simplex_value(const T& t, const OrderField& f, int dim, SimplexId s) {
  return f.value(max_vertex(t, f, dim, s));
}

// Whether a simplex has a vertex on the boundary of the domain.
template <Triangulation T>
bool touches_boundary(const T& t, int dim, SimplexId s) {
  for (SimplexId v : t.vertices(dim, s))
    if (t.is_boundary({0, v})) return true;
  return false;
}

/// Initial gradient. For every dimension i, each unpaired i-simplex s is
/// paired with the lowest (i+1)-co-face among those whose highest i-face is
/// s. The highest face of a simplex is the one missing its lowest vertex,
/// so the candidates are the co-faces s + w with w below every vertex of s,
/// and the lowest of them is the one with the lowest w.
template <Triangulation T>
DiscreteGradient build_gradient(const T& t, const OrderField& f, int threads = default_thread_count()) {
  const int d = t.dimension();
  if (f.size() != t.vertex_count()) throw DataError("field size does not match the vertex count");
  std::array<SimplexId, 4> counts{};
  for (int i = 0; i <= d; ++i) counts[i] = t.simplex_count(i);
  DiscreteGradient g(d, counts);
  for (int i = 0; i < d; ++i) {
    parallel_for_blocks(counts[i], threads, [&](SimplexId lo, SimplexId hi) {
      std::vector<SimplexId> cof;
      for (SimplexId s = lo; s < hi; ++s) {
        if (g.paired_down(i, s) != kNoSimplex) continue;
        const SimplexVertices sv = t.vertices(i, s);
        SimplexId low = f.rank(sv[0]);
        for (int j = 1; j < sv.size; ++j) low = std::min(low, f.rank(sv[j]));
        t.cofaces({i, s}, i + 1, cof);
        SimplexId best = kNoSimplex, best_rank = low;
        for (SimplexId c : cof) {
          const SimplexVertices cv = t.vertices(i + 1, c);
          for (SimplexId w : cv) {
            if (sv.contains(w)) continue;
            const SimplexId rw = f.rank(w);
            if (rw < best_rank) {
              best_rank = rw;
              best = c;
            }
          }
        }
        if (best != kNoSimplex) g.pair(i, s, best);
      }
    });
  }
  return g;
}

inline std::array<std::vector<SimplexId>, 4> critical_simplices(const DiscreteGradient& g) {
  std::array<std::vector<SimplexId>, 4> out;
  for (int i = 0; i <= g.dimension(); ++i) out[i] = g.critical(i);
  return out;
}

struct CriticalSimplex {
  SimplexRef simplex;
  bool boundary = false;  // has a vertex on the domain boundary

  friend bool operator==(const CriticalSimplex&, const CriticalSimplex&) = default;
};

/// Critical simplices per dimension in id order, with boundary flags.
template <Triangulation T>
std::array<std::vector<CriticalSimplex>, 4> critical_simplices(const T& t, const DiscreteGradient& g) {
  std::array<std::vector<CriticalSimplex>, 4> out;
  for (int i = 0; i <= g.dimension(); ++i)
    for (SimplexId s : g.critical(i)) out[i].push_back({{i, s}, touches_boundary(t, i, s)});
  return out;
}

}  // namespace topokit
