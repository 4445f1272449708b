#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "topokit/core/jagged_array.hpp"
#include "topokit/core/types.hpp"
#include "topokit/triangulation/query.hpp"

namespace topokit {

/// Triangulation stored as a point list and a list of d-simplices, with
/// face/co-face lookup tables built only when a query kind is declared
/// through precondition(). Queries on undeclared kinds throw
/// NotPreconditioned instead of building tables lazily.
///
/// Identifiers: vertices are point indices, d-cells keep input order, edges
/// and triangles are numbered in order of first appearance while scanning
/// the cells.
class ExplicitTriangulation {
 public:
  ExplicitTriangulation() = default;

  ExplicitTriangulation(std::vector<Point3> points, const std::vector<std::vector<SimplexId>>& cells)
      : points_(std::move(points)) {
    if (cells.empty()) throw DataError("explicit triangulation: empty cell list");
    const std::size_t arity = cells.front().size();
    std::vector<SimplexId> flat;
    flat.reserve(cells.size() * arity);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].size() != arity)
        throw DataError("explicit triangulation: mixed cell arity at cell " + std::to_string(c));
      flat.insert(flat.end(), cells[c].begin(), cells[c].end());
    }
    init(std::move(flat), static_cast<int>(arity));
  }

  // `flat` holds `arity` vertex ids per cell.
  static ExplicitTriangulation from_flat(std::vector<Point3> points, std::vector<SimplexId> flat, int arity) {
    ExplicitTriangulation t;
    t.points_ = std::move(points);
    if (flat.empty()) throw DataError("explicit triangulation: empty cell list");
    if (arity <= 0 || flat.size() % static_cast<std::size_t>(arity) != 0)
      throw DataError("explicit triangulation: cell list length is not a multiple of the arity");
    t.init(std::move(flat), arity);
    return t;
  }

  int dimension() const { return dim_; }
  SimplexId vertex_count() const { return static_cast<SimplexId>(points_.size()); }
  SimplexId cell_count() const { return static_cast<SimplexId>(cells_.size()) / (dim_ + 1); }
  const Point3& point(SimplexId v) const { return points_[static_cast<std::size_t>(v)]; }
  const std::vector<Point3>& points() const { return points_; }

  SimplexId simplex_count(int dim) const {
    check_dim(dim);
    if (dim == 0) return vertex_count();
    if (dim == dim_) return cell_count();
    if (dim == 1) {
      require(Table::EdgeList, "simplex_count(1)");
      return static_cast<SimplexId>(edges_.size() / 2);
    }
    require(Table::TriangleList, "simplex_count(2)");
    return static_cast<SimplexId>(triangles_.size() / 3);
  }

  // ---- preconditioning -------------------------------------------------

  /// Tables transitively needed to answer `q`.
  TableSet required_tables(Query q) const {
    TableSet s;
    switch (q.kind) {
      case QueryKind::VertexNeighbors: add_closure(s, Table::VertexNeighbors); break;
      case QueryKind::VertexCofaces: add_closure(s, vertex_cofaces_table(q.a)); break;
      case QueryKind::VertexStars: add_closure(s, vertex_cofaces_table(dim_)); break;
      case QueryKind::EdgeList: add_closure(s, Table::EdgeList); break;
      case QueryKind::TriangleList:
        if (dim_ == 3) add_closure(s, Table::TriangleList);
        break;
      case QueryKind::EdgeCofaces: add_closure(s, edge_cofaces_table(q.a)); break;
      case QueryKind::TriangleCofaces:
        if (dim_ != 3) throw std::invalid_argument("triangle co-faces require a 3D triangulation");
        add_closure(s, Table::TriangleCofaces);
        break;
      case QueryKind::SimplexFaces: add_faces_closure(s, q.a, q.b); break;
      case QueryKind::CellFaces: add_faces_closure(s, dim_, q.a); break;
      case QueryKind::Boundary:
        if (q.a < 0 || q.a >= dim_) throw std::invalid_argument("boundary query dimension out of range");
        add_closure(s, boundary_table(q.a));
        break;
    }
    return s;
  }

  void precondition(Query q) {
    const TableSet need = required_tables(q);
    for (std::size_t i = 0; i < kTableCount; ++i) {
      const auto t = static_cast<Table>(i);
      if (need.has(t) && !built_.has(t)) build(t);
    }
  }

  const TableSet& built_tables() const { return built_; }

  std::size_t memory_bytes() const {
    std::size_t m = points_.capacity() * sizeof(Point3) + cells_.capacity() * sizeof(SimplexId);
    m += (edges_.capacity() + triangles_.capacity()) * sizeof(SimplexId);
    m += vertex_neighbors_.memory_bytes() + triangle_cofaces_.memory_bytes();
    for (const auto& j : vertex_cofaces_) m += j.memory_bytes();
    for (const auto& j : edge_cofaces_) m += j.memory_bytes();
    m += (faces21_.capacity() + faces31_.capacity() + faces32_.capacity()) * sizeof(SimplexId);
    for (const auto& b : boundary_) m += b.capacity();
    return m;
  }

  // ---- queries ---------------------------------------------------------

  SimplexVertices vertices(int dim, SimplexId id) const {
    check_dim(dim);
    SimplexVertices out;
    out.size = dim + 1;
    if (dim == 0) {
      out.v[0] = id;
      return out;
    }
    const SimplexId* src = nullptr;
    if (dim == dim_) {
      src = cells_.data() + id * (dim_ + 1);
    } else if (dim == 1) {
      require(Table::EdgeList, "edge vertices");
      src = edges_.data() + id * 2;
    } else {
      require(Table::TriangleList, "triangle vertices");
      src = triangles_.data() + id * 3;
    }
    std::copy(src, src + dim + 1, out.v.begin());
    return out;
  }

  // k-faces of s in ascending id order.
  void faces(SimplexRef s, int k, std::vector<SimplexId>& out) const {
    out.clear();
    check_dim(s.dim);
    if (k < 0 || k >= s.dim) throw std::out_of_range("faces: k must satisfy 0 <= k < dim(s)");
    if (k == 0) {
      const SimplexVertices v = vertices(s.dim, s.id);
      out.assign(v.begin(), v.end());
      std::sort(out.begin(), out.end());
      return;
    }
    const std::vector<SimplexId>* table = nullptr;
    int per = 0;
    if (s.dim == 2 && k == 1) {
      require(Table::Faces21, "triangle edges");
      table = &faces21_;
      per = 3;
    } else if (s.dim == 3 && k == 1) {
      require(Table::Faces31, "tetrahedron edges");
      table = &faces31_;
      per = 6;
    } else {
      require(Table::Faces32, "tetrahedron triangles");
      table = &faces32_;
      per = 4;
    }
    const auto* p = table->data() + s.id * per;
    out.assign(p, p + per);
  }

  // l-co-faces of s in ascending id order.
  void cofaces(SimplexRef s, int l, std::vector<SimplexId>& out) const {
    const auto row = cofaces_view(s, l);
    out.assign(row.begin(), row.end());
  }

  std::span<const SimplexId> cofaces_view(SimplexRef s, int l) const {
    check_dim(s.dim);
    if (l <= s.dim || l > dim_) throw std::out_of_range("cofaces: l must satisfy dim(s) < l <= d");
    const auto row = static_cast<std::size_t>(s.id);
    if (s.dim == 0) {
      require(vertex_cofaces_table(l), "vertex co-faces");
      return vertex_cofaces_[l][row];
    }
    if (s.dim == 1) {
      require(edge_cofaces_table(l), "edge co-faces");
      return edge_cofaces_[l][row];
    }
    require(Table::TriangleCofaces, "triangle co-faces");
    return triangle_cofaces_[row];
  }

  void vertex_neighbors(SimplexId v, std::vector<SimplexId>& out) const {
    require(Table::VertexNeighbors, "vertex neighbors");
    const auto row = vertex_neighbors_[static_cast<std::size_t>(v)];
    out.assign(row.begin(), row.end());
  }

  // True iff s lies on the boundary: some (d-1)-co-face of s (or s itself)
  // has exactly one d-co-face. Defined for dim(s) < d.
  bool is_boundary(SimplexRef s) const {
    if (s.dim < 0 || s.dim >= dim_) throw std::invalid_argument("is_boundary: defined for simplices of dimension < d");
    require(boundary_table(s.dim), "boundary flags");
    return boundary_[s.dim][static_cast<std::size_t>(s.id)] != 0;
  }

  /// (d-1)-simplices with more than two d-co-faces. Needs boundary(d-1).
  std::vector<SimplexId> pseudo_manifold_violations() const {
    require(boundary_table(dim_ - 1), "pseudo-manifold validation");
    std::vector<SimplexId> bad;
    const JaggedArray& facet_cofaces = dim_ == 2 ? edge_cofaces_[2] : triangle_cofaces_;
    for (std::size_t f = 0; f < facet_cofaces.rows(); ++f)
      if (facet_cofaces[f].size() > 2) bad.push_back(static_cast<SimplexId>(f));
    return bad;
  }

 private:
  void init(std::vector<SimplexId> flat, int arity) {
    if (arity != 3 && arity != 4)
      throw DataError("explicit triangulation: cells must be triangles (3 ids) or tetrahedra (4 ids)");
    dim_ = arity - 1;
    const auto n = static_cast<SimplexId>(points_.size());
    const std::size_t ncells = flat.size() / static_cast<std::size_t>(arity);
    for (std::size_t c = 0; c < ncells; ++c) {
      auto* first = flat.data() + c * static_cast<std::size_t>(arity);
      for (int i = 0; i < arity; ++i)
        if (first[i] < 0 || first[i] >= n)
          throw DataError("explicit triangulation: cell " + std::to_string(c) + " references vertex " +
                          std::to_string(first[i]) + " outside [0, " + std::to_string(n) + ")");
      std::sort(first, first + arity);
      for (int i = 1; i < arity; ++i)
        if (first[i] == first[i - 1])
          throw DataError("explicit triangulation: cell " + std::to_string(c) + " repeats a vertex");
    }
    std::vector<std::size_t> order(ncells);
    for (std::size_t c = 0; c < ncells; ++c) order[c] = c;
    auto cell_at = [&](std::size_t c) { return flat.data() + c * static_cast<std::size_t>(arity); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::lexicographical_compare(cell_at(a), cell_at(a) + arity, cell_at(b), cell_at(b) + arity);
    });
    for (std::size_t i = 1; i < ncells; ++i)
      if (std::equal(cell_at(order[i]), cell_at(order[i]) + arity, cell_at(order[i - 1])))
        throw DataError("explicit triangulation: duplicate cell " + std::to_string(order[i]));
    cells_ = std::move(flat);
  }

  void check_dim(int dim) const {
    if (dim < 0 || dim > dim_) throw std::out_of_range("simplex dimension out of range");
  }

  void require(Table t, const char* what) const {
    if (!built_.has(t))
      throw NotPreconditioned(std::string(what) + ": table '" + table_name(t) + "' was not preconditioned");
  }

  Table vertex_cofaces_table(int l) const {
    if (l < 1 || l > dim_) throw std::invalid_argument("vertex co-face dimension out of range");
    return l == 1 ? Table::VertexCofaces1 : (l == 2 ? Table::VertexCofaces2 : Table::VertexCofaces3);
  }
  Table edge_cofaces_table(int l) const {
    if (l < 2 || l > dim_) throw std::invalid_argument("edge co-face dimension out of range");
    return l == 2 ? Table::EdgeCofaces2 : Table::EdgeCofaces3;
  }
  static Table boundary_table(int dim) {
    return dim == 0 ? Table::Boundary0 : (dim == 1 ? Table::Boundary1 : Table::Boundary2);
  }

  void add_faces_closure(TableSet& s, int i, int k) const {
    check_dim(i);
    if (k < 0 || k >= i) throw std::invalid_argument("face dimension out of range");
    if (k == 0) {
      if (i == 1) add_closure(s, Table::EdgeList);
      if (i == 2 && dim_ == 3) add_closure(s, Table::TriangleList);
      return;
    }
    if (i == 2) add_closure(s, Table::Faces21);
    else if (k == 1) add_closure(s, Table::Faces31);
    else add_closure(s, Table::Faces32);
  }

  void add_closure(TableSet& s, Table t) const {
    if (s.has(t)) return;
    s.add(t);
    switch (t) {
      case Table::EdgeList:
      case Table::TriangleList: break;
      case Table::VertexNeighbors:
      case Table::VertexCofaces1: add_closure(s, Table::EdgeList); break;
      case Table::VertexCofaces2:
        if (dim_ == 3) add_closure(s, Table::TriangleList);
        break;
      case Table::VertexCofaces3: break;
      case Table::EdgeCofaces2:
        add_closure(s, Table::EdgeList);
        add_closure(s, Table::VertexCofaces2);
        break;
      case Table::EdgeCofaces3:
        add_closure(s, Table::EdgeList);
        add_closure(s, Table::VertexCofaces3);
        break;
      case Table::TriangleCofaces:
        add_closure(s, Table::TriangleList);
        add_closure(s, Table::VertexCofaces3);
        break;
      case Table::Faces21: add_closure(s, Table::EdgeCofaces2); break;
      case Table::Faces31: add_closure(s, Table::EdgeCofaces3); break;
      case Table::Faces32: add_closure(s, Table::TriangleCofaces); break;
      case Table::Boundary2: add_closure(s, Table::TriangleCofaces); break;
      case Table::Boundary1:
        if (dim_ == 2) {
          add_closure(s, Table::EdgeCofaces2);
        } else {
          add_closure(s, Table::Boundary2);
          add_closure(s, Table::EdgeCofaces2);
        }
        break;
      case Table::Boundary0:
        add_closure(s, boundary_table(dim_ - 1));
        add_closure(s, vertex_cofaces_table(dim_ - 1));
        break;
      case Table::Count: break;
    }
  }

  void build(Table t) {
    switch (t) {
      case Table::EdgeList: build_edges(); break;
      case Table::TriangleList: build_triangles(); break;
      case Table::VertexNeighbors: build_vertex_neighbors(); break;
      case Table::VertexCofaces1: build_vertex_cofaces(1); break;
      case Table::VertexCofaces2: build_vertex_cofaces(2); break;
      case Table::VertexCofaces3: build_vertex_cofaces(3); break;
      case Table::EdgeCofaces2: build_edge_cofaces(2); break;
      case Table::EdgeCofaces3: build_edge_cofaces(3); break;
      case Table::TriangleCofaces: build_triangle_cofaces(); break;
      case Table::Faces21: build_faces(faces21_, 3, edge_cofaces_[2], 2); break;
      case Table::Faces31: build_faces(faces31_, 6, edge_cofaces_[3], 3); break;
      case Table::Faces32: build_faces(faces32_, 4, triangle_cofaces_, 3); break;
      case Table::Boundary2: build_boundary(2); break;
      case Table::Boundary1: build_boundary(1); break;
      case Table::Boundary0: build_boundary(0); break;
      case Table::Count: break;
    }
    built_.add(t);
  }

  // Unique vertex pairs, deduplicated through a per-vertex lookup of the
  // pairs already emitted from that vertex.
  void build_edges() {
    const int arity = dim_ + 1;
    std::vector<std::vector<std::pair<SimplexId, SimplexId>>> seen(points_.size());
    edges_.clear();
    for (std::size_t c = 0; c < cells_.size(); c += static_cast<std::size_t>(arity)) {
      for (int i = 0; i < arity; ++i)
        for (int j = i + 1; j < arity; ++j) {
          const SimplexId a = cells_[c + i], b = cells_[c + j];
          auto& list = seen[static_cast<std::size_t>(a)];
          const bool found = std::any_of(list.begin(), list.end(), [b](const auto& p) { return p.first == b; });
          if (!found) {
            list.emplace_back(b, static_cast<SimplexId>(edges_.size() / 2));
            edges_.push_back(a);
            edges_.push_back(b);
          }
        }
    }
  }

  void build_triangles() {
    std::vector<std::vector<std::array<SimplexId, 3>>> seen(points_.size());
    triangles_.clear();
    static constexpr int kTri[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    for (std::size_t c = 0; c < cells_.size(); c += 4) {
      for (const auto& tri : kTri) {
        const SimplexId a = cells_[c + tri[0]], b = cells_[c + tri[1]], d = cells_[c + tri[2]];
        auto& list = seen[static_cast<std::size_t>(a)];
        const bool found =
            std::any_of(list.begin(), list.end(), [&](const auto& e) { return e[0] == b && e[1] == d; });
        if (!found) {
          list.push_back({b, d, static_cast<SimplexId>(triangles_.size() / 3)});
          triangles_.insert(triangles_.end(), {a, b, d});
        }
      }
    }
  }

  std::pair<const SimplexId*, int> simplex_list(int dim) const {
    if (dim == dim_) return {cells_.data(), dim_ + 1};
    if (dim == 1) return {edges_.data(), 2};
    return {triangles_.data(), 3};
  }

  void build_vertex_cofaces(int l) {
    const auto [list, per] = simplex_list(l);
    const SimplexId count = l == dim_ ? cell_count() : (l == 1 ? static_cast<SimplexId>(edges_.size() / 2)
                                                               : static_cast<SimplexId>(triangles_.size() / 3));
    JaggedArray& table = vertex_cofaces_[l];
    table.begin_count(points_.size());
    for (SimplexId s = 0; s < count; ++s)
      for (int i = 0; i < per; ++i) table.count(static_cast<std::size_t>(list[s * per + i]));
    table.finalize_counts();
    for (SimplexId s = 0; s < count; ++s)
      for (int i = 0; i < per; ++i) table.push(static_cast<std::size_t>(list[s * per + i]), s);
    table.end_fill();
  }

  void build_vertex_neighbors() {
    const std::size_t ne = edges_.size() / 2;
    vertex_neighbors_.begin_count(points_.size());
    for (std::size_t e = 0; e < ne; ++e) {
      vertex_neighbors_.count(static_cast<std::size_t>(edges_[2 * e]));
      vertex_neighbors_.count(static_cast<std::size_t>(edges_[2 * e + 1]));
    }
    vertex_neighbors_.finalize_counts();
    for (std::size_t e = 0; e < ne; ++e) {
      vertex_neighbors_.push(static_cast<std::size_t>(edges_[2 * e]), edges_[2 * e + 1]);
      vertex_neighbors_.push(static_cast<std::size_t>(edges_[2 * e + 1]), edges_[2 * e]);
    }
    vertex_neighbors_.end_fill();
    for (std::size_t v = 0; v < points_.size(); ++v) {
      auto row = vertex_neighbors_.mutable_row(v);
      std::sort(row.begin(), row.end());
    }
  }

  // Co-faces of a simplex are the intersection of its vertices' co-face lists.
  template <int N>
  static std::size_t intersect(const std::array<std::span<const SimplexId>, N>& rows, SimplexId* out) {
    std::size_t n = 0;
    for (SimplexId x : rows[0]) {
      bool all = true;
      for (int r = 1; r < N && all; ++r) all = std::binary_search(rows[r].begin(), rows[r].end(), x);
      if (all) {
        if (out) out[n] = x;
        ++n;
      }
    }
    return n;
  }

  void build_edge_cofaces(int l) {
    const std::size_t ne = edges_.size() / 2;
    const JaggedArray& vc = vertex_cofaces_[l];
    JaggedArray& table = edge_cofaces_[l];
    table.begin_count(ne);
    std::vector<std::uint32_t> sizes(ne);
    for (std::size_t e = 0; e < ne; ++e) {
      const std::array<std::span<const SimplexId>, 2> rows{vc[static_cast<std::size_t>(edges_[2 * e])],
                                                           vc[static_cast<std::size_t>(edges_[2 * e + 1])]};
      sizes[e] = static_cast<std::uint32_t>(intersect<2>(rows, nullptr));
      for (std::uint32_t i = 0; i < sizes[e]; ++i) table.count(e);
    }
    table.finalize_counts();
    std::vector<SimplexId> buf;
    for (std::size_t e = 0; e < ne; ++e) {
      const std::array<std::span<const SimplexId>, 2> rows{vc[static_cast<std::size_t>(edges_[2 * e])],
                                                           vc[static_cast<std::size_t>(edges_[2 * e + 1])]};
      buf.resize(sizes[e]);
      intersect<2>(rows, buf.data());
      for (SimplexId x : buf) table.push(e, x);
    }
    table.end_fill();
  }

  void build_triangle_cofaces() {
    const std::size_t nt = triangles_.size() / 3;
    const JaggedArray& vc = vertex_cofaces_[3];
    triangle_cofaces_.begin_count(nt);
    std::vector<SimplexId> buf;
    for (std::size_t t = 0; t < nt; ++t) {
      const std::array<std::span<const SimplexId>, 3> rows{vc[static_cast<std::size_t>(triangles_[3 * t])],
                                                           vc[static_cast<std::size_t>(triangles_[3 * t + 1])],
                                                           vc[static_cast<std::size_t>(triangles_[3 * t + 2])]};
      const std::size_t n = intersect<3>(rows, nullptr);
      for (std::size_t i = 0; i < n; ++i) triangle_cofaces_.count(t);
    }
    triangle_cofaces_.finalize_counts();
    for (std::size_t t = 0; t < nt; ++t) {
      const std::array<std::span<const SimplexId>, 3> rows{vc[static_cast<std::size_t>(triangles_[3 * t])],
                                                           vc[static_cast<std::size_t>(triangles_[3 * t + 1])],
                                                           vc[static_cast<std::size_t>(triangles_[3 * t + 2])]};
      buf.resize(intersect<3>(rows, nullptr));
      intersect<3>(rows, buf.data());
      for (SimplexId x : buf) triangle_cofaces_.push(t, x);
    }
    triangle_cofaces_.end_fill();
  }

  // k-faces of each l-simplex, by inverting the l-co-face lists of the k-simplices.
  void build_faces(std::vector<SimplexId>& out, int per, const JaggedArray& cofaces_of_faces, int l) {
    const SimplexId count = l == dim_ ? cell_count() : static_cast<SimplexId>(triangles_.size() / 3);
    out.assign(static_cast<std::size_t>(count * per), kNoSimplex);
    std::vector<std::uint8_t> fill(static_cast<std::size_t>(count), 0);
    for (std::size_t k = 0; k < cofaces_of_faces.rows(); ++k)
      for (SimplexId s : cofaces_of_faces[k]) {
        const auto si = static_cast<std::size_t>(s);
        out[si * static_cast<std::size_t>(per) + fill[si]++] = static_cast<SimplexId>(k);
      }
  }

  void build_boundary(int dim) {
    auto& flags = boundary_[dim];
    if (dim == dim_ - 1) {
      const JaggedArray& fc = dim_ == 2 ? edge_cofaces_[2] : triangle_cofaces_;
      flags.assign(fc.rows(), 0);
      for (std::size_t f = 0; f < fc.rows(); ++f) flags[f] = fc[f].size() == 1 ? 1 : 0;
      return;
    }
    const auto& facet_flags = boundary_[dim_ - 1];
    const JaggedArray& up = dim == 0 ? vertex_cofaces_[dim_ - 1] : edge_cofaces_[2];
    flags.assign(up.rows(), 0);
    for (std::size_t s = 0; s < up.rows(); ++s)
      for (SimplexId f : up[s])
        if (facet_flags[static_cast<std::size_t>(f)]) {
          flags[s] = 1;
          break;
        }
  }

  int dim_ = 0;
  std::vector<Point3> points_;
  std::vector<SimplexId> cells_;
  std::vector<SimplexId> edges_;
  std::vector<SimplexId> triangles_;
  JaggedArray vertex_neighbors_;
  std::array<JaggedArray, 4> vertex_cofaces_;
  std::array<JaggedArray, 4> edge_cofaces_;
  JaggedArray triangle_cofaces_;
  std::vector<SimplexId> faces21_, faces31_, faces32_;
  std::array<std::vector<char>, 3> boundary_;
  TableSet built_;
};

}  // namespace topokit
