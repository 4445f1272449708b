// One line per acceptance criterion; exit status 0 only when all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "cli/app.hpp"
#include "support/fixtures.hpp"
#include "support/golden_cases.hpp"
#include "support/gradient_oracle.hpp"
#include "support/grid_oracle.hpp"
#include "support/persistence_oracle.hpp"

using namespace topokit;
namespace fs = std::filesystem;

namespace {

constexpr double kMinSpeedup = 2.0;        // criterion 8
constexpr SimplexId kMinTetrahedra = 100000;
constexpr int kSpeedupTrials = 3;
constexpr int kGridSide = 27;              // 26^3 * 6 = 105456 tetrahedra
constexpr std::size_t kAcyclicityLimit = 500;  // simplices, criterion 4

struct Result {
  bool pass;
  std::string detail;
};

std::vector<ExplicitTriangulation> octahedra() {
  std::vector<ExplicitTriangulation> out;
  for (int level = 0; level <= 2; ++level) {
    out.push_back(fixtures::subdivided_octahedron(level));
    precondition_for_analysis(out.back());
  }
  return out;
}

Result implicit_matches_explicit() {
  int grids = 0;
  for (int w = 2; w <= 16; ++w)
    for (int h = 2; h <= 16; ++h, ++grids)
      if (auto e = oracle::compare_grid_with_explicit(ImplicitGridTriangulation(w, h)); !e.empty())
        return {false, std::to_string(w) + "x" + std::to_string(h) + ": " + e};
  for (int w = 2; w <= 8; ++w)
    for (int h = 2; h <= 8; ++h)
      for (int d = 2; d <= 8; ++d, ++grids)
        if (auto e = oracle::compare_grid_with_explicit(ImplicitGridTriangulation(w, h, d)); !e.empty())
          return {false, std::to_string(w) + "x" + std::to_string(h) + "x" + std::to_string(d) + ": " + e};
  return {true, std::to_string(grids) + " grids"};
}

Result euler_relation() {
  std::mt19937 rng(101);
  int trials = 0, bad = 0;
  for (const auto& t : octahedra())
    for (int k = 0; k < 50; ++k, ++trials) {
      const auto f = fixtures::random_field(t.vertex_count(), rng);
      const auto c = count_critical_points(extract_critical_points(t, f));
      bad += c.by_index[0] - c.by_index[1] + c.by_index[2] != 2;
    }
  return {bad == 0, std::to_string(trials - bad) + "/" + std::to_string(trials) + " fields"};
}

Result pl_matching() {
  std::mt19937 rng(102);
  int trials = 0, violations = 0;
  auto run = [&](const auto& t) {
    for (int k = 0; k < 50; ++k, ++trials) {
      const auto f = fixtures::random_field(t.vertex_count(), rng);
      const auto g = build_gradient(t, f);
      violations += oracle::unmatched_critical_points(t, g, extract_critical_points(t, f));
    }
  };
  for (const auto& t : octahedra()) run(t);
  run(ImplicitGridTriangulation(6, 6, 6));
  return {violations == 0, std::to_string(trials) + " fields, " + std::to_string(violations) + " unmatched points"};
}

Result compliance() {
  std::mt19937 rng(103);
  int trials = 0, bad = 0, cyclic = 0, dfs = 0;
  for (const auto& t : octahedra())
    for (int k = 0; k < 50; ++k, ++trials) {
      const auto f = fixtures::random_field(t.vertex_count(), rng);
      const auto pl = extract_critical_points(t, f);
      DiscreteGradient g = build_gradient(t, f);
      const auto rep = enforce_pl_compliance(t, f, g, match_pl(t, f, g, pl));
      const auto counts = count_critical_points(pl);
      const auto cc = g.critical_counts();
      bool ok = rep.residue.empty() && !rep.failed;
      for (int i = 0; i <= 2; ++i) ok = ok && cc[static_cast<std::size_t>(i)] == counts.by_index[static_cast<std::size_t>(i)];
      bad += !ok;
      if (static_cast<std::size_t>(total_simplex_count(t)) <= kAcyclicityLimit) {
        ++dfs;
        cyclic += oracle::has_closed_vpath(t, g);
      }
    }
  return {bad == 0 && cyclic == 0 && dfs > 0,
          std::to_string(trials - bad) + "/" + std::to_string(trials) + " fields compliant, " + std::to_string(dfs) +
              " checked acyclic, " + std::to_string(cyclic) + " cyclic"};
}

std::vector<oracle::VertexPair> pairs_of(const PersistenceDiagram& d, PairClass c) {
  std::vector<oracle::VertexPair> out;
  for (const auto& p : d.pairs)
    if (p.cls == c) out.push_back({p.birth_vertex, p.death_vertex});
  std::sort(out.begin(), out.end());
  return out;
}

Result diagram_oracle() {
  std::mt19937 rng(104);
  int trials = 0, bad = 0;
  auto run = [&](const auto& t, int n) {
    for (int k = 0; k < n; ++k, ++trials) {
      const auto f = fixtures::random_field(t.vertex_count(), rng);
      const auto d = build_diagram(t, f);
      auto sur = oracle::sublevel_component_pairs(t, f.negated());
      for (auto& [a, b] : sur) std::swap(a, b);
      std::sort(sur.begin(), sur.end());
      bad += pairs_of(d, PairClass::MinSaddle) != oracle::sublevel_component_pairs(t, f) ||
             pairs_of(d, PairClass::SaddleMax) != sur;
    }
  };
  run(ImplicitGridTriangulation(16, 16), 100);
  run(ImplicitGridTriangulation(6, 6, 6), 20);
  return {bad == 0, std::to_string(trials - bad) + "/" + std::to_string(trials) + " fields"};
}

// Two Gaussian bumps (or a ring and a bump) inside the grid plus a small
// deterministic perturbation.
OrderField bump_field(const ImplicitGridTriangulation& g, std::mt19937& rng, bool ring) {
  std::uniform_real_distribution<double> pos(0.8, 3.2), noise(0.0, 0.05);
  const Point3 a{pos(rng), pos(rng), pos(rng)}, b{pos(rng), pos(rng), pos(rng)};
  std::vector<double> v(static_cast<std::size_t>(g.vertex_count()));
  for (SimplexId i = 0; i < g.vertex_count(); ++i) {
    const Point3 p = g.point(i);
    auto sq = [](double x) { return x * x; };
    const double da = sq(p.x - a.x) + sq(p.y - a.y) + sq(p.z - a.z);
    const double db = sq(p.x - b.x) + sq(p.y - b.y) + sq(p.z - b.z);
    double bump_a = std::exp(-da);
    if (ring) {
      const double r = std::sqrt(sq(p.x - a.x) + sq(p.y - a.y));
      bump_a = std::exp(-(sq(r - 1.2) + sq(p.z - a.z)) * 2);
    }
    v[static_cast<std::size_t>(i)] = bump_a + 0.8 * std::exp(-db) + noise(rng);
  }
  return OrderField(std::move(v));
}

Result saddle_saddle_oracle() {
  std::mt19937 rng(105);
  int trials = 0, bad = 0;
  std::size_t pairs = 0;
  for (int side : {4, 5})
    for (int k = 0; k < 40; ++k, ++trials) {
      const ImplicitGridTriangulation g(side, side, side);
      const auto f = bump_field(g, rng, k % 2 == 1);
      const auto grad = build_gradient(g, f);
      auto got = pairs_of(build_diagram(g, f, &grad), PairClass::SaddleSaddle);
      auto want = oracle::lower_star_pairs(g, f)[1];
      std::sort(want.begin(), want.end());
      pairs += want.size();
      bad += got != want;
    }
  return {bad == 0 && pairs > 0, std::to_string(trials - bad) + "/" + std::to_string(trials) + " fields, " +
                                     std::to_string(pairs) + " (1,2) pairs in the oracle"};
}

Result unified_simplification() {
  // Fixture: threshold 3 keeps only the essential pair.
  const ImplicitGridTriangulation f0g(3, 3);
  const auto f0 = fixtures::f0_field();
  const auto s0 = simplify_field(f0g, f0, select_by_persistence(build_diagram(f0g, f0), 3));
  const auto d0 = build_diagram(f0g, s0);
  const bool fixture = d0.pairs.size() == 1 && d0.pairs[0].birth_value == 0 && d0.pairs[0].death_value == 10;

  std::mt19937 rng(106);
  const ImplicitGridTriangulation g(16, 16);
  int trials = 0, extrema_bad = 0, diagram_bad = 0;
  using Point = std::tuple<PairClass, double, double>;
  for (int k = 0; k < 100; ++k, ++trials) {
    const auto f = fixtures::random_field(g.vertex_count(), rng);
    const auto before = build_diagram(g, f);
    double top = 0;
    for (const auto& p : before.pairs)
      if (p.cls != PairClass::Essential) top = std::max(top, p.persistence());
    const double tau = std::uniform_real_distribution<double>(0.0, top)(rng);
    const auto req = select_by_persistence(before, tau);
    const auto s = simplify_field(g, f, req);

    std::vector<SimplexId> ext;
    for (const auto& p : extract_critical_points(g, s))
      if (p.index == 0 || p.index == 2) ext.push_back(p.vertex);
    std::sort(ext.begin(), ext.end());
    extrema_bad += ext != req.preserved;

    std::multiset<Point> want, got;
    for (const auto& p : before.pairs)
      if (p.cls == PairClass::Essential || p.persistence() >= tau) want.insert({p.cls, p.birth_value, p.death_value});
    for (const auto& p : build_diagram(g, s).pairs) got.insert({p.cls, p.birth_value, p.death_value});
    diagram_bad += want != got;
  }
  return {fixture && extrema_bad == 0 && diagram_bad == 0,
          std::string("fixture ") + (fixture ? "ok" : "wrong") + ", extrema exact in " +
              std::to_string(trials - extrema_bad) + "/" + std::to_string(trials) + ", diagram exact in " +
              std::to_string(trials - diagram_bad) + "/" + std::to_string(trials)};
}

std::int64_t link_traversal(const ExplicitTriangulation& t) {
  std::int64_t sum = 0;
  std::vector<SimplexId> nb;
  const int d = t.dimension();
  for (SimplexId v = 0; v < t.vertex_count(); ++v) {
    t.vertex_neighbors(v, nb);
    for (SimplexId u : nb) sum += u;
    for (SimplexId c : t.cofaces_view({0, v}, d))
      for (SimplexId w : t.vertices(d, c))
        if (w != v) sum ^= w + c;
  }
  return sum;
}

Result cached_speedup() {
  using clock = std::chrono::steady_clock;
  const ImplicitGridTriangulation grid(kGridSide, kGridSide, kGridSide);
  std::stringstream off;
  io::write_off(off, grid.emit_points(), grid.emit_cells(), 4);
  const std::string text = off.str();
  // Median over independent ingests, each measured cold then warm.
  std::vector<double> speedups, firsts, seconds;
  SimplexId cells = 0;
  for (int trial = 0; trial < kSpeedupTrials; ++trial) {
    std::istringstream in(text);
    ExplicitTriangulation t = io::read_off(in, "grid.off");
    cells = t.cell_count();
    if (cells < kMinTetrahedra) return {false, "mesh too small"};
    const auto t0 = clock::now();
    t.precondition(query::vertex_neighbors());
    t.precondition(query::vertex_cofaces(3));
    const auto first_sum = link_traversal(t);
    const auto t1 = clock::now();
    const auto second_sum = link_traversal(t);
    const auto t2 = clock::now();
    if (first_sum != second_sum) return {false, "traversals disagree"};
    firsts.push_back(std::chrono::duration<double>(t1 - t0).count());
    seconds.push_back(std::chrono::duration<double>(t2 - t1).count());
    speedups.push_back(firsts.back() / seconds.back());
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  const double speedup = median(speedups);
  char buf[200];
  std::snprintf(buf, sizeof buf, "%lld tetrahedra, median of %d: first %.3f s, second %.3f s, speedup %.1f (need %.1f)",
                static_cast<long long>(cells), kSpeedupTrials, median(firsts), median(seconds), speedup, kMinSpeedup);
  return {speedup >= kMinSpeedup, buf};
}

Result determinism() {
  const auto cases = golden::load_cases(std::string(TOPOKIT_GOLDEN_DIR) + "/cases.txt");
  const fs::path dir = fs::temp_directory_path() / "topokit_acceptance";
  fs::create_directories(dir);
  int runs = 0, bad = 0;
  for (const auto& c : cases) {
    const std::string expected = golden::slurp(fs::path(TOPOKIT_GOLDEN_DIR) / c.golden);
    for (int threads : {1, 4, 1, 4}) {
      const fs::path out = dir / "out", tmp = dir / "tmp";
      fs::remove(out);
      const auto args = golden::expand(c, TOPOKIT_TEST_DATA_DIR, out.string(), tmp.string(), threads);
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      ++runs;
      if (cli::run(static_cast<int>(argv.size()), argv.data()) != 0 || golden::slurp(out) != expected) {
        ++bad;
        std::cerr << "  differs: " << c.golden << " threads " << threads << '\n';
      }
    }
  }
  return {bad == 0 && !cases.empty(),
          std::to_string(cases.size()) + " golden files, " + std::to_string(runs - bad) + "/" + std::to_string(runs) +
              " runs identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"implicit grid queries equal the explicit rebuild", implicit_matches_explicit},
      {"PL Euler relation on octahedra", euler_relation},
      {"PL matching after build_gradient", pl_matching},
      {"PL compliance on closed surfaces", compliance},
      {"extremum pairs equal the union-find oracle", diagram_oracle},
      {"(1,2) pairs equal the boundary reduction oracle", saddle_saddle_oracle},
      {"unified simplification", unified_simplification},
      {"cached traversal speedup", cached_speedup},
      {"CLI determinism across runs and threads", determinism},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && r.pass;
    char time[32];
    std::snprintf(time, sizeof time, "%.1f s", secs);
    std::cout << (r.pass ? "PASS" : "FAIL") << "  criterion " << i + 1 << ": " << criteria[i].first << " (" << r.detail
              << "; " << time << ")" << std::endl;
  }
  return all ? 0 : 1;
}
