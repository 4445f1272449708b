#pragma once

#include <concepts>
#include <variant>
#include <vector>

#include "topokit/core/types.hpp"
#include "topokit/triangulation/explicit_triangulation.hpp"
#include "topokit/triangulation/implicit_grid.hpp"
#include "topokit/triangulation/query.hpp"

namespace topokit {

// What the algorithms need from a triangulation. Both the explicit and the
// implicit structure satisfy it; algorithms are templates over it.
template <class T>
concept Triangulation = requires(T t, const T ct, Query q, SimplexRef s, std::vector<SimplexId>& out) {
  { ct.dimension() } -> std::convertible_to<int>;
  { ct.vertex_count() } -> std::convertible_to<SimplexId>;
  { ct.simplex_count(0) } -> std::convertible_to<SimplexId>;
  { ct.vertices(0, SimplexId{0}) } -> std::same_as<SimplexVertices>;
  { ct.point(SimplexId{0}) } -> std::convertible_to<Point3>;
  { ct.is_boundary(s) } -> std::convertible_to<bool>;
  ct.faces(s, 0, out);
  ct.cofaces(s, 1, out);
  ct.vertex_neighbors(SimplexId{0}, out);
  t.precondition(q);
};

static_assert(Triangulation<ExplicitTriangulation>);
static_assert(Triangulation<ImplicitGridTriangulation>);

using AnyTriangulation = std::variant<ExplicitTriangulation, ImplicitGridTriangulation>;

/// Declares every query kind used by the analysis modules (links, gradient,
/// trees, boundary policy). A no-op on implicit grids.
template <Triangulation T>
void precondition_for_analysis(T& t) {
  const int d = t.dimension();
  t.precondition(query::vertex_neighbors());
  t.precondition(query::edge_list());
  t.precondition(query::triangle_list());
  for (int l = 1; l <= d; ++l) t.precondition(query::vertex_cofaces(l));
  for (int l = 2; l <= d; ++l) t.precondition(query::edge_cofaces(l));
  if (d == 3) t.precondition(query::triangle_cofaces());
  for (int i = 1; i <= d; ++i)
    for (int k = 0; k < i; ++k) t.precondition(query::simplex_faces(i, k));
  for (int b = 0; b < d; ++b) t.precondition(query::boundary(b));
}

inline ExplicitTriangulation to_explicit(const ImplicitGridTriangulation& grid) {
  return ExplicitTriangulation::from_flat(grid.emit_points(), grid.emit_cells(), grid.dimension() + 1);
}

template <Triangulation T>
SimplexId euler_characteristic(const T& t) {
  SimplexId chi = 0;
  for (int k = 0; k <= t.dimension(); ++k) chi += (k % 2 == 0 ? 1 : -1) * t.simplex_count(k);
  return chi;
}

// True when no (d-1)-simplex lies on the boundary. Needs boundary(d-1).
template <Triangulation T>
bool is_closed(const T& t) {
  const int f = t.dimension() - 1;
  const SimplexId n = t.simplex_count(f);
  for (SimplexId s = 0; s < n; ++s)
    if (t.is_boundary({f, s})) return false;
  return true;
}

template <Triangulation T>
SimplexId total_simplex_count(const T& t) {
  SimplexId n = 0;
  for (int k = 0; k <= t.dimension(); ++k) n += t.simplex_count(k);
  return n;
}

}  // namespace topokit
