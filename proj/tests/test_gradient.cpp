#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "support/fixtures.hpp"
#include "support/gradient_oracle.hpp"
#include "topokit/gradient/morse_smale.hpp"
#include "topokit/gradient/pl_compliance.hpp"

using namespace topokit;

namespace {

template <class T>
SimplexId find_simplex(const T& t, int dim, std::vector<SimplexId> verts) {
  std::sort(verts.begin(), verts.end());
  for (SimplexId s = 0; s < t.simplex_count(dim); ++s) {
    const auto v = t.vertices(dim, s);
    std::vector<SimplexId> w(v.begin(), v.end());
    std::sort(w.begin(), w.end());
    if (w == verts) return s;
  }
  return kNoSimplex;
}

std::int64_t alternating(const std::array<SimplexId, 4>& c, int d) {
  std::int64_t s = 0;
  for (int i = 0; i <= d; ++i) s += (i % 2 ? -1 : 1) * c[i];
  return s;
}

template <class T>
std::set<SimplexRef> critical_set(const T& t, const DiscreteGradient& g) {
  std::set<SimplexRef> out;
  for (int i = 0; i <= t.dimension(); ++i)
    for (SimplexId s : g.critical(i)) out.insert({i, s});
  return out;
}

// Two minima (bottom and top), one saddle at vertex 1, one maximum at 4.
OrderField two_minima_octahedron_field() { return OrderField({0, 2, 3, 4, 5, 1}); }

template <class T>
void check_compliance(T& t, std::mt19937& rng, int trials) {
  precondition_for_analysis(t);
  const int d = t.dimension();
  for (int k = 0; k < trials; ++k) {
    const auto f = fixtures::random_field(t.vertex_count(), rng, k % 2 ? 4 : 0);
    const auto pl = extract_critical_points(t, f);
    auto g = build_gradient(t, f);
    const auto rep = enforce_pl_compliance(t, f, g, match_pl(t, f, g, pl));
    CHECK_FALSE(rep.failed);
    CHECK(rep.residue.empty());
    const auto xi = match_pl(t, f, g, pl);
    CHECK(xi.residue.empty());
    CHECK(xi.short_matches.empty());
    const auto pc = count_critical_points(pl);
    const auto gc = g.critical_counts();
    for (int i = 0; i <= d; ++i) CHECK(gc[i] == pc.by_index[i]);
    CHECK(oracle::check_pairing(t, g).empty());
    if (total_simplex_count(t) <= 500) CHECK_FALSE(oracle::has_closed_vpath(t, g));
  }
}

}  // namespace

TEST_CASE("initial gradient on a single triangle") {
  auto t = fixtures::single_triangle();
  precondition_for_analysis(t);
  const auto g = build_gradient(t, fixtures::index_field(3));
  const SimplexId ab = find_simplex(t, 1, {0, 1}), ac = find_simplex(t, 1, {0, 2}), bc = find_simplex(t, 1, {1, 2});
  CHECK(g.is_critical(0, 0));
  CHECK(g.paired_up(0, 1) == ab);
  CHECK(g.paired_up(0, 2) == ac);
  CHECK(g.paired_up(1, bc) == 0);
  CHECK(g.pair_count() == 3);
  CHECK(g.critical_counts() == std::array<SimplexId, 4>{1, 0, 0, 0});
}

TEST_CASE("monotone octahedron has one minimum and one maximum triangle") {
  auto t = fixtures::octahedron();
  precondition_for_analysis(t);
  const auto g = build_gradient(t, fixtures::index_field(6));
  CHECK(g.critical_counts() == std::array<SimplexId, 4>{1, 0, 1, 0});
  CHECK(g.is_critical(0, 0));
  CHECK(t.vertices(2, g.critical(2).front()).contains(5));
  const auto cs = critical_simplices(t, g);
  CHECK(cs[0].size() == 1);
  CHECK_FALSE(cs[0][0].boundary);
}

TEST_CASE("pairing partitions the simplices and satisfies the Morse equality") {
  std::mt19937 rng(11);
  auto oct = fixtures::subdivided_octahedron(2);
  auto cone = fixtures::coned_grid(ImplicitGridTriangulation(4, 4, 4));
  const ImplicitGridTriangulation grid(7, 6, 5);
  const ImplicitGridTriangulation flat(9, 7);
  precondition_for_analysis(oct);
  precondition_for_analysis(cone);
  auto check = [&](const auto& t) {
    for (int k = 0; k < 10; ++k) {
      const auto f = fixtures::random_field(t.vertex_count(), rng, k % 2 ? 3 : 0);
      const auto g = build_gradient(t, f);
      const auto c = g.critical_counts();
      CHECK(2 * g.pair_count() + c[0] + c[1] + c[2] + c[3] == total_simplex_count(t));
      CHECK(alternating(c, t.dimension()) == euler_characteristic(t));
      CHECK(oracle::check_pairing(t, g).empty());
    }
  };
  check(oct);
  check(cone);
  check(grid);
  check(flat);
}

TEST_CASE("parallel and sequential gradients agree") {
  const ImplicitGridTriangulation g(30, 30, 8);
  std::mt19937 rng(4);
  const auto f = fixtures::random_field(g.vertex_count(), rng, 5);
  CHECK(build_gradient(g, f, 1) == build_gradient(g, f, 4));
}

TEST_CASE("every interior PL critical point owns a critical simplex in its star") {
  std::mt19937 rng(21);
  auto run = [&](const auto& t) {
    for (int k = 0; k < 50; ++k) {
      const auto f = fixtures::random_field(t.vertex_count(), rng, k % 2 ? 4 : 0);
      const auto pl = extract_critical_points(t, f);
      const auto g = build_gradient(t, f);
      CHECK(oracle::unmatched_critical_points(t, g, pl) == 0);
      CHECK(match_pl(t, f, g, pl).short_matches.empty());
    }
  };
  for (int level = 0; level <= 2; ++level) {
    auto t = fixtures::subdivided_octahedron(level);
    precondition_for_analysis(t);
    run(t);
  }
  run(ImplicitGridTriangulation(6, 6, 6));
  auto s3 = fixtures::stellar_sphere3(60, 2);
  precondition_for_analysis(s3);
  run(s3);
}

TEST_CASE("compliance leaves exactly the PL critical simplices on closed surfaces") {
  std::mt19937 rng(31);
  for (int level = 0; level <= 2; ++level) {
    auto t = fixtures::subdivided_octahedron(level);
    check_compliance(t, rng, 50);
  }
}

TEST_CASE("compliance on closed 3-manifolds") {
  std::mt19937 rng(41);
  auto cone = fixtures::coned_grid(ImplicitGridTriangulation(5, 5, 5));
  check_compliance(cone, rng, 20);
  auto s3 = fixtures::stellar_sphere3(30, 8);
  check_compliance(s3, rng, 20);
  auto big = fixtures::stellar_sphere3(400, 9);
  check_compliance(big, rng, 10);
}

TEST_CASE("compliance with an empty residue is a no-op") {
  auto t = fixtures::octahedron();
  precondition_for_analysis(t);
  const auto f = fixtures::index_field(6);
  auto g = build_gradient(t, f);
  const auto before = g;
  const auto xi = match_pl(t, f, g, extract_critical_points(t, f));
  REQUIRE(xi.residue.empty());
  const auto rep = enforce_pl_compliance(t, f, g, xi);
  CHECK(rep.saddle_extremum.empty());
  CHECK(rep.residue.empty());
  CHECK(g == before);
}

TEST_CASE("grid with boundary: boundary simplices are never cancelled") {
  const ImplicitGridTriangulation t(8, 8, 4);
  std::mt19937 rng(5);
  const auto f = fixtures::random_field(t.vertex_count(), rng);
  auto g = build_gradient(t, f);
  std::set<SimplexRef> boundary_before;
  for (const auto& dim : critical_simplices(t, g))
    for (const auto& c : dim)
      if (c.boundary) boundary_before.insert(c.simplex);
  const auto rep = enforce_pl_compliance(t, f, g, match_pl(t, f, g, extract_critical_points(t, f)));
  CHECK_FALSE(rep.closed);
  CHECK_FALSE(rep.failed);
  for (SimplexRef s : boundary_before) CHECK(g.is_critical(s.dim, s.id));
  CHECK(oracle::check_pairing(t, g).empty());
}

TEST_CASE("cancelling a unique V-path changes only its endpoints") {
  std::mt19937 rng(51);
  auto t = fixtures::subdivided_octahedron(1);
  precondition_for_analysis(t);
  int cancelled = 0;
  for (int k = 0; k < 20; ++k) {
    const auto f = fixtures::random_field(t.vertex_count(), rng);
    auto g = build_gradient(t, f);
    for (SimplexId u : g.critical(2)) {
      const VPathExploration ex(t, g, {2, u}, VPathDirection::Descending);
      for (const auto& tg : ex.targets()) {
        if (tg.count != 1) continue;
        const auto before = critical_set(t, g);
        VPath p{ex.path_to(tg.id), {2, u}, {1, tg.id}, 0, 1};
        cancel_pair(g, p);
        ++cancelled;
        auto after = critical_set(t, g);
        after.insert({2, u});
        after.insert({1, tg.id});
        CHECK(after == before);
        CHECK(alternating(g.critical_counts(), 2) == 2);
        CHECK(oracle::check_pairing(t, g).empty());
        CHECK_FALSE(oracle::has_closed_vpath(t, g));
        break;
      }
      break;
    }
  }
  CHECK(cancelled > 0);
}

TEST_CASE("cancel_pair rejects paths that are not unique or not critical") {
  auto t = fixtures::single_triangle();
  precondition_for_analysis(t);
  auto g = build_gradient(t, fixtures::index_field(3));
  VPath p{{{1, 0}, {0, 0}}, {1, 0}, {0, 0}, 0, 2};
  CHECK_THROWS_AS(cancel_pair(g, p), std::invalid_argument);
  p.multiplicity = 1;
  CHECK_THROWS_AS(cancel_pair(g, p), std::invalid_argument);  // the edge is paired
}

TEST_CASE("V-path tracing examples") {
  SECTION("minimum of a single triangle has no ascending paths") {
    auto t = fixtures::single_triangle();
    precondition_for_analysis(t);
    const auto f = fixtures::index_field(3);
    const auto g = build_gradient(t, f);
    CHECK(trace_vpaths(t, f, g, {0, 0}, VPathDirection::Ascending).empty());
  }
  SECTION("maximum triangle of the monotone octahedron reaches no critical edge") {
    auto t = fixtures::octahedron();
    precondition_for_analysis(t);
    const auto f = fixtures::index_field(6);
    const auto g = build_gradient(t, f);
    CHECK(trace_vpaths(t, f, g, {2, g.critical(2).front()}, VPathDirection::Descending).empty());
  }
  SECTION("saddle of a two-minima surface field reaches both minima") {
    auto t = fixtures::octahedron();
    precondition_for_analysis(t);
    const auto f = two_minima_octahedron_field();
    auto g = build_gradient(t, f);
    enforce_pl_compliance(t, f, g, match_pl(t, f, g, extract_critical_points(t, f)));
    REQUIRE(g.critical_counts() == std::array<SimplexId, 4>{2, 1, 1, 0});
    const SimplexId e = g.critical(1).front();
    CHECK(t.vertices(1, e).contains(1));
    const auto paths = trace_vpaths(t, f, g, {1, e}, VPathDirection::Descending);
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].end == SimplexRef{0, 0});
    CHECK(paths[1].end == SimplexRef{0, 5});
    for (const auto& p : paths) {
      CHECK(p.start == SimplexRef{1, e});
      CHECK(p.cells.front() == p.start);
      CHECK(p.cells.back() == p.end);
      CHECK(p.multiplicity == 1);
    }
    CHECK(paths[0].weight == 2.0);
    CHECK(paths[1].weight == 1.0);

    const auto lines = extract_separatrix_geometry(t, separatrices(t, f, g));
    int min_saddle = 0;
    for (const auto& l : lines) {
      CHECK(l.points.size() >= 2);
      if (l.kind != SeparatrixKind::MinSaddle) continue;
      ++min_saddle;
      const Point3 b = barycenter(t, {1, e});
      CHECK(l.points.front().x == b.x);
      CHECK(l.points.front().y == b.y);
      CHECK(l.points.front().z == b.z);
      const Point3 m = t.point(l.end.id);
      CHECK(l.points.back().z == m.z);
    }
    CHECK(min_saddle == 2);
  }
}

TEST_CASE("separatrix geometry has one point per simplex") {
  CHECK(extract_separatrix_geometry(ImplicitGridTriangulation(3, 3), {}).empty());
  std::mt19937 rng(61);
  auto t = fixtures::subdivided_octahedron(2);
  precondition_for_analysis(t);
  const auto f = fixtures::random_field(t.vertex_count(), rng);
  auto g = build_gradient(t, f);
  enforce_pl_compliance(t, f, g, match_pl(t, f, g, extract_critical_points(t, f)));
  const auto paths = separatrices(t, f, g);
  const auto lines = extract_separatrix_geometry(t, paths);
  REQUIRE(lines.size() == paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) CHECK(lines[i].points.size() == paths[i].cells.size());
}

TEST_CASE("saddle connectors in 3D") {
  SECTION("monotone field on a grid has none") {
    const ImplicitGridTriangulation t(5, 5, 5);
    const auto f = fixtures::index_field(t.vertex_count());
    const auto g = build_gradient(t, f);
    CHECK(saddle_connectors_3d(t, f, g).empty());
  }
  SECTION("connectors run from a critical edge to a critical triangle") {
    std::mt19937 rng(71);
    auto t = fixtures::coned_grid(ImplicitGridTriangulation(5, 5, 5));
    precondition_for_analysis(t);
    const auto f = fixtures::random_field(t.vertex_count(), rng);
    auto g = build_gradient(t, f);
    enforce_pl_compliance(t, f, g, match_pl(t, f, g, extract_critical_points(t, f)));
    for (const auto& c : saddle_connectors_3d(t, f, g, 2)) {
      CHECK(c.start.dim == 1);
      CHECK(c.end.dim == 2);
      CHECK(g.is_critical(1, c.start.id));
      CHECK(g.is_critical(2, c.end.id));
      for (std::size_t i = 0; i < c.cells.size(); ++i) CHECK(c.cells[i].dim == (i % 2 ? 2 : 1));
    }
    CHECK(saddle_connectors_3d(t, f, g, 1).size() == saddle_connectors_3d(t, f, g, 4).size());
  }
}

TEST_CASE("Morse segmentation") {
  SECTION("monotone octahedron is a single cell each way") {
    auto t = fixtures::octahedron();
    precondition_for_analysis(t);
    const auto f = fixtures::index_field(6);
    const auto g = build_gradient(t, f);
    const auto lab = morse_segmentation(t, f, g);
    for (SimplexId l : lab.vertex) CHECK(l == 0);
    for (SimplexId l : lab.cell) CHECK(l == g.critical(2).front());
  }
  SECTION("two-minima grid field splits the vertices in two") {
    const ImplicitGridTriangulation t(3, 3);
    const auto f = fixtures::f0_field();
    const auto g = build_gradient(t, f);
    const auto lab = morse_segmentation(t, f, g);
    CHECK(std::set<SimplexId>(lab.vertex.begin(), lab.vertex.end()) == std::set<SimplexId>{0, 2});
    CHECK(lab.vertex[0] == 0);
    CHECK(lab.vertex[2] == 2);
    for (SimplexId c : lab.cell)
      if (c != kNoSimplex) CHECK(g.is_critical(2, c));
  }
  SECTION("critical simplices label themselves") {
    std::mt19937 rng(81);
    auto t = fixtures::subdivided_octahedron(2);
    precondition_for_analysis(t);
    const auto f = fixtures::random_field(t.vertex_count(), rng);
    const auto g = build_gradient(t, f);
    const auto lab = morse_segmentation(t, f, g);
    for (SimplexId v : g.critical(0)) CHECK(lab.vertex[static_cast<std::size_t>(v)] == v);
    for (SimplexId c : g.critical(2)) CHECK(lab.cell[static_cast<std::size_t>(c)] == c);
    for (SimplexId c : lab.cell) CHECK(c != kNoSimplex);  // closed surface: no dead ends
  }
}
