#pragma once

#include <bitset>
#include <cstdint>
#include <string>

namespace topokit {

// Traversal query kinds a caller declares before querying an explicit
// triangulation. Parameterized kinds carry their dimension arguments.
enum class QueryKind : std::uint8_t {
  VertexNeighbors,
  VertexCofaces,   // a = l
  VertexStars,     // vertex -> d-cells
  EdgeList,
  TriangleList,
  EdgeCofaces,     // a = l
  TriangleCofaces,
  SimplexFaces,    // a = i (simplex dim), b = k (face dim)
  CellFaces,       // a = k
  Boundary,        // a = dim
};

struct Query {
  QueryKind kind = QueryKind::EdgeList;
  int a = 0;
  int b = 0;
};

namespace query {
inline Query vertex_neighbors() { return {QueryKind::VertexNeighbors}; }
inline Query vertex_edges() { return {QueryKind::VertexCofaces, 1}; }
inline Query vertex_triangles() { return {QueryKind::VertexCofaces, 2}; }
inline Query vertex_cofaces(int l) { return {QueryKind::VertexCofaces, l}; }
inline Query vertex_stars() { return {QueryKind::VertexStars}; }
inline Query edge_list() { return {QueryKind::EdgeList}; }
inline Query triangle_list() { return {QueryKind::TriangleList}; }
inline Query edge_cofaces(int l) { return {QueryKind::EdgeCofaces, l}; }
inline Query triangle_cofaces() { return {QueryKind::TriangleCofaces}; }
inline Query simplex_faces(int i, int k) { return {QueryKind::SimplexFaces, i, k}; }
inline Query cell_faces(int k) { return {QueryKind::CellFaces, k}; }
inline Query boundary(int dim) { return {QueryKind::Boundary, dim}; }
}  // namespace query

// Lookup tables of the explicit triangulation. Each query kind requires a
// transitive closure of these.
enum class Table : std::uint8_t {
  EdgeList,
  TriangleList,
  VertexNeighbors,
  VertexCofaces1,
  VertexCofaces2,
  VertexCofaces3,
  EdgeCofaces2,
  EdgeCofaces3,
  TriangleCofaces,
  Faces21,
  Faces31,
  Faces32,
  Boundary2,
  Boundary1,
  Boundary0,
  Count
};

inline constexpr std::size_t kTableCount = static_cast<std::size_t>(Table::Count);

class TableSet {
 public:
  bool has(Table t) const { return bits_.test(static_cast<std::size_t>(t)); }
  void add(Table t) { bits_.set(static_cast<std::size_t>(t)); }
  TableSet& operator|=(const TableSet& o) {
    bits_ |= o.bits_;
    return *this;
  }
  bool empty() const { return bits_.none(); }
  std::size_t count() const { return bits_.count(); }
  friend bool operator==(const TableSet&, const TableSet&) = default;

 private:
  std::bitset<kTableCount> bits_;
};

inline const char* table_name(Table t) {
  switch (t) {
    case Table::EdgeList: return "edge_list";
    case Table::TriangleList: return "triangle_list";
    case Table::VertexNeighbors: return "vertex_neighbors";
    case Table::VertexCofaces1: return "vertex_edges";
    case Table::VertexCofaces2: return "vertex_triangles";
    case Table::VertexCofaces3: return "vertex_tetrahedra";
    case Table::EdgeCofaces2: return "edge_triangles";
    case Table::EdgeCofaces3: return "edge_tetrahedra";
    case Table::TriangleCofaces: return "triangle_tetrahedra";
    case Table::Faces21: return "triangle_edges";
    case Table::Faces31: return "tetrahedron_edges";
    case Table::Faces32: return "tetrahedron_triangles";
    case Table::Boundary2: return "boundary_triangles";
    case Table::Boundary1: return "boundary_edges";
    case Table::Boundary0: return "boundary_vertices";
    case Table::Count: break;
  }
  return "?";
}

}  // namespace topokit
