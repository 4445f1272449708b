#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "topokit/core/types.hpp"
#include "topokit/triangulation/query.hpp"

namespace topokit {

enum class EdgeClass : std::uint8_t { X, Y, Z, XY, XZ, YZ, XYZ };

inline const char* edge_class_name(EdgeClass c, int dim) {
  if (dim == 2) {
    switch (c) {
      case EdgeClass::X: return "horizontal";
      case EdgeClass::Y: return "vertical";
      case EdgeClass::XY: return "diagonal";
      default: break;
    }
  }
  switch (c) {
    case EdgeClass::X: return "x";
    case EdgeClass::Y: return "y";
    case EdgeClass::Z: return "z";
    case EdgeClass::XY: return "xy";
    case EdgeClass::XZ: return "xz";
    case EdgeClass::YZ: return "yz";
    case EdgeClass::XYZ: return "xyz";
  }
  return "?";
}

struct EdgeClassification {
  EdgeClass edge_class;
  std::array<SimplexId, 3> anchor;
};

/// Regular grid of w x h (x depth) vertices triangulated on the fly with the
/// Freudenthal/Kuhn scheme: 2 triangles per quad, 6 tetrahedra per voxel,
/// all sharing the main diagonal. Nothing is stored besides the dimensions.
///
/// Vertex V(i,j,k) = (k*h + j)*w + i. A k-simplex is an anchor vertex plus a
/// chain of k disjoint axis masks; each vertex adds the next mask to the
/// previous one. Simplices of one chain shape form a contiguous id block,
/// numbered row-major by anchor.
class ImplicitGridTriangulation {
 public:
  ImplicitGridTriangulation() : ImplicitGridTriangulation(2, 2) {}
  ImplicitGridTriangulation(SimplexId w, SimplexId h) { init({w, h, 1}, 2); }
  ImplicitGridTriangulation(SimplexId w, SimplexId h, SimplexId depth) { init({w, h, depth}, 3); }

  int dimension() const { return dim_; }
  std::array<SimplexId, 3> dims() const { return n_; }
  SimplexId vertex_count() const { return n_[0] * n_[1] * n_[2]; }
  SimplexId cell_count() const { return simplex_count(dim_); }

  SimplexId simplex_count(int dim) const {
    check_dim(dim);
    if (dim == 0) return vertex_count();
    const auto& cl = classes_[dim];
    return cl.back().offset + cl.back().count;
  }

  Point3 point(SimplexId v) const {
    const auto c = coords(v);
    return {static_cast<double>(c[0]), static_cast<double>(c[1]), static_cast<double>(c[2])};
  }

  SimplexId vertex_id(SimplexId i, SimplexId j, SimplexId k = 0) const { return (k * n_[1] + j) * n_[0] + i; }

  std::array<SimplexId, 3> coords(SimplexId v) const {
    return {v % n_[0], (v / n_[0]) % n_[1], v / (n_[0] * n_[1])};
  }

  // Preconditioning is meaningless here; kept for interface parity.
  TableSet required_tables(Query) const { return {}; }
  void precondition(Query) {}
  TableSet built_tables() const { return {}; }
  std::size_t memory_bytes() const { return sizeof(*this); }

  SimplexVertices vertices(int dim, SimplexId id) const {
    check_dim(dim);
    SimplexVertices out;
    out.size = dim + 1;
    if (dim == 0) {
      out.v[0] = id;
      return out;
    }
    const auto& cl = classes_[dim];
    if (id < 0 || id >= simplex_count(dim)) throw std::out_of_range("simplex id out of range");
    std::size_t c = 0;
    while (c + 1 < cl.size() && id >= cl[c + 1].offset) ++c;
    const SimplexClass& sc = cl[c];
    SimplexId local = id - sc.offset;
    const SimplexId ax = local % sc.extent[0];
    local /= sc.extent[0];
    const SimplexId ay = local % sc.extent[1];
    const SimplexId az = local / sc.extent[1];
    SimplexId v = vertex_id(ax, ay, az);
    out.v[0] = v;
    for (int j = 0; j < dim; ++j) {
      v += mask_offset(sc.masks[j]);
      out.v[j + 1] = v;
    }
    return out;
  }

  /// Id of the dim-simplex spanned by `verts` (ascending vertex ids), or
  /// kNoSimplex when those vertices do not form a simplex of the grid.
  SimplexId simplex_id(std::span<const SimplexId> verts) const {
    const int dim = static_cast<int>(verts.size()) - 1;
    if (dim < 0 || dim > dim_) return kNoSimplex;
    for (SimplexId v : verts)
      if (v < 0 || v >= vertex_count()) return kNoSimplex;
    if (dim == 0) return verts[0];
    const auto a = coords(verts[0]);
    auto prev = a;
    unsigned key = 0;
    for (int j = 1; j <= dim; ++j) {
      const auto c = coords(verts[j]);
      unsigned m = 0;
      for (int ax = 0; ax < 3; ++ax) {
        const SimplexId diff = c[ax] - prev[ax];
        if (diff == 1) m |= 1u << ax;
        else if (diff != 0) return kNoSimplex;
      }
      if (m == 0) return kNoSimplex;
      key |= m << (3 * (j - 1));
      prev = c;
    }
    const int cls = lookup_[dim][key];
    if (cls < 0) return kNoSimplex;
    const SimplexClass& sc = classes_[dim][static_cast<std::size_t>(cls)];
    for (int ax = 0; ax < 3; ++ax)
      if (a[ax] >= sc.extent[ax]) return kNoSimplex;
    return sc.offset + (a[2] * sc.extent[1] + a[1]) * sc.extent[0] + a[0];
  }

  void faces(SimplexRef s, int k, std::vector<SimplexId>& out) const {
    out.clear();
    check_dim(s.dim);
    if (k < 0 || k >= s.dim) throw std::out_of_range("faces: k must satisfy 0 <= k < dim(s)");
    const SimplexVertices sv = vertices(s.dim, s.id);
    std::array<SimplexId, 4> buf{};
    const int n = s.dim + 1;
    // Bitmask subsets of the vertex positions with k+1 members.
    for (unsigned sub = 1; sub < (1u << n); ++sub) {
      if (std::popcount(sub) != k + 1) continue;
      int m = 0;
      for (int i = 0; i < n; ++i)
        if (sub & (1u << i)) buf[m++] = sv.v[i];
      out.push_back(simplex_id({buf.data(), static_cast<std::size_t>(m)}));
    }
    std::sort(out.begin(), out.end());
  }

  void cofaces(SimplexRef s, int l, std::vector<SimplexId>& out) const {
    out.clear();
    check_dim(s.dim);
    if (l <= s.dim || l > dim_) throw std::out_of_range("cofaces: l must satisfy dim(s) < l <= d");
    const SimplexVertices sv = vertices(s.dim, s.id);
    const int ns = sv.size;
    std::array<std::array<SimplexId, 3>, 4> c{};
    for (int i = 0; i < ns; ++i) c[i] = coords(sv.v[i]);

    std::array<SimplexId, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int ax = 0; ax < dim_; ++ax) {
      lo[ax] = std::max<SimplexId>(0, c[ns - 1][ax] - 1);
      hi[ax] = std::min<SimplexId>(c[0][ax], n_[ax] - 2);
      if (lo[ax] > hi[ax]) return;
    }
    std::array<SimplexId, 4> cell{};
    std::array<SimplexId, 4> pick{};
    for (SimplexId bz = lo[2]; bz <= hi[2]; ++bz)
      for (SimplexId by = lo[1]; by <= hi[1]; ++by)
        for (SimplexId bx = lo[0]; bx <= hi[0]; ++bx) {
          const std::array<SimplexId, 3> b{bx, by, bz};
          // Offset mask of every vertex of s relative to the candidate anchor.
          std::array<unsigned, 4> rel{};
          for (int i = 0; i < ns; ++i)
            for (int ax = 0; ax < dim_; ++ax)
              if (c[i][ax] - b[ax] == 1) rel[i] |= 1u << ax;
          for (const auto& perm : perms_) {
            // Positions of s's vertices along this cell's vertex chain.
            unsigned prefix = 0;
            unsigned positions = 0;
            int matched = 0;
            for (int p = 0; p <= dim_ && matched < ns; ++p) {
              if (p > 0) prefix |= perm[p - 1];
              if (rel[matched] == prefix) {
                positions |= 1u << p;
                ++matched;
              }
            }
            if (matched < ns) continue;
            SimplexId v = vertex_id(bx, by, bz);
            cell[0] = v;
            for (int p = 0; p < dim_; ++p) {
              v += mask_offset(perm[p]);
              cell[p + 1] = v;
            }
            for (unsigned sub = 1; sub < (1u << (dim_ + 1)); ++sub) {
              if ((sub & positions) != positions || std::popcount(sub) != l + 1) continue;
              int m = 0;
              for (int p = 0; p <= dim_; ++p)
                if (sub & (1u << p)) pick[m++] = cell[p];
              out.push_back(simplex_id({pick.data(), static_cast<std::size_t>(m)}));
            }
          }
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

  void vertex_neighbors(SimplexId v, std::vector<SimplexId>& out) const {
    out.clear();
    const auto c = coords(v);
    for (const auto& sc : classes_[1]) {
      const unsigned m = sc.masks[0];
      bool up = true, down = true;
      for (int ax = 0; ax < 3; ++ax) {
        if (!(m & (1u << ax))) continue;
        if (c[ax] + 1 >= n_[ax]) up = false;
        if (c[ax] == 0) down = false;
      }
      if (up) out.push_back(v + mask_offset(m));
      if (down) out.push_back(v - mask_offset(m));
    }
    std::sort(out.begin(), out.end());
  }

  // A simplex of dimension < d is on the boundary iff it lies in one face
  // of the grid box.
  bool is_boundary(SimplexRef s) const {
    if (s.dim < 0 || s.dim >= dim_) throw std::invalid_argument("is_boundary: defined for simplices of dimension < d");
    const SimplexVertices sv = vertices(s.dim, s.id);
    for (int ax = 0; ax < dim_; ++ax) {
      bool low = true, high = true;
      for (SimplexId v : sv) {
        const SimplexId x = coords(v)[ax];
        low = low && x == 0;
        high = high && x == n_[ax] - 1;
      }
      if (low || high) return true;
    }
    return false;
  }

  EdgeClassification classify_edge_identifier(SimplexId e) const {
    if (e < 0 || e >= simplex_count(1)) throw std::out_of_range("edge identifier out of range");
    const SimplexVertices sv = vertices(1, e);
    const auto a = coords(sv.v[0]);
    const auto b = coords(sv.v[1]);
    unsigned m = 0;
    for (int ax = 0; ax < 3; ++ax)
      if (b[ax] != a[ax]) m |= 1u << ax;
    static constexpr EdgeClass kByMask[8] = {EdgeClass::X,  EdgeClass::X,  EdgeClass::Y,  EdgeClass::XY,
                                             EdgeClass::Z,  EdgeClass::XZ, EdgeClass::YZ, EdgeClass::XYZ};
    return {kByMask[m], a};
  }

  /// d-cells as flat vertex tuples, in id order.
  std::vector<SimplexId> emit_cells() const {
    const SimplexId nc = cell_count();
    std::vector<SimplexId> flat;
    flat.reserve(static_cast<std::size_t>(nc * (dim_ + 1)));
    for (SimplexId c = 0; c < nc; ++c) {
      const auto sv = vertices(dim_, c);
      flat.insert(flat.end(), sv.begin(), sv.end());
    }
    return flat;
  }

  std::vector<Point3> emit_points() const {
    std::vector<Point3> pts(static_cast<std::size_t>(vertex_count()));
    for (SimplexId v = 0; v < vertex_count(); ++v) pts[static_cast<std::size_t>(v)] = point(v);
    return pts;
  }

 private:
  struct SimplexClass {
    std::array<unsigned, 3> masks{};
    unsigned union_mask = 0;
    std::array<SimplexId, 3> extent{1, 1, 1};
    SimplexId offset = 0;
    SimplexId count = 0;
  };

  void init(std::array<SimplexId, 3> n, int dim) {
    for (int ax = 0; ax < dim; ++ax)
      if (n[ax] < 2) throw std::invalid_argument("grid dimensions must be at least 2 vertices per axis");
    n_ = n;
    dim_ = dim;
    const unsigned full = (1u << dim) - 1;

    for (auto& l : lookup_) l.fill(-1);
    for (int k = 1; k <= dim; ++k) {
      std::vector<SimplexClass> cl;
      std::array<unsigned, 3> chain{};
      auto rec = [&](auto&& self, int depth, unsigned used) -> void {
        if (depth == k) {
          SimplexClass sc;
          sc.masks = chain;
          sc.union_mask = used;
          cl.push_back(sc);
          return;
        }
        for (unsigned m = 1; m <= full; ++m)
          if ((m & used) == 0) {
            chain[depth] = m;
            self(self, depth + 1, used | m);
          }
      };
      rec(rec, 0, 0);
      std::sort(cl.begin(), cl.end(), [k](const SimplexClass& a, const SimplexClass& b) {
        const int pa = std::popcount(a.union_mask), pb = std::popcount(b.union_mask);
        if (pa != pb) return pa < pb;
        if (a.union_mask != b.union_mask) return a.union_mask < b.union_mask;
        if (k == 1) return false;
        return std::lexicographical_compare(b.masks.begin(), b.masks.begin() + k, a.masks.begin(),
                                            a.masks.begin() + k);
      });
      SimplexId offset = 0;
      for (std::size_t i = 0; i < cl.size(); ++i) {
        auto& sc = cl[i];
        for (int ax = 0; ax < 3; ++ax) sc.extent[ax] = n_[ax] - ((sc.union_mask >> ax) & 1u);
        sc.offset = offset;
        sc.count = sc.extent[0] * sc.extent[1] * sc.extent[2];
        offset += sc.count;
        unsigned key = 0;
        for (int j = 0; j < k; ++j) key |= sc.masks[j] << (3 * j);
        lookup_[k][key] = static_cast<int>(i);
      }
      classes_[k] = std::move(cl);
    }

    perms_.clear();
    std::array<int, 3> axes{0, 1, 2};
    do {
      std::array<unsigned, 3> p{};
      for (int i = 0; i < dim; ++i) p[i] = 1u << axes[i];
      perms_.push_back(p);
    } while (std::next_permutation(axes.begin(), axes.begin() + dim));
  }

  SimplexId mask_offset(unsigned m) const {
    return ((m & 1u) ? 1 : 0) + ((m & 2u) ? n_[0] : 0) + ((m & 4u) ? n_[0] * n_[1] : 0);
  }

  void check_dim(int dim) const {
    if (dim < 0 || dim > dim_) throw std::out_of_range("simplex dimension out of range");
  }

  std::array<SimplexId, 3> n_{2, 2, 1};
  int dim_ = 2;
  std::array<std::vector<SimplexClass>, 4> classes_;
  std::array<std::array<int, 512>, 4> lookup_{};
  std::vector<std::array<unsigned, 3>> perms_;
};

}  // namespace topokit
