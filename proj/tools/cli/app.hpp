#pragma once

#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "topokit/gradient/morse_smale.hpp"
#include "topokit/gradient/pl_compliance.hpp"
#include "topokit/io/field.hpp"
#include "topokit/io/off.hpp"
#include "topokit/scalar/critical_points.hpp"
#include "topokit/simplify/simplification.hpp"
#include "topokit/trees/contour_tree.hpp"
#include "topokit/trees/persistence.hpp"

namespace topokit::cli {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct Options {
  std::string mesh;
  std::string grid;
  std::string values;
  std::string offsets;
  std::string format = "ascii";
  int threads = default_thread_count();
  std::string output = "-";

  bool saddle_saddle = true;
  bool saddle_saddle_set = false;
  bool compliance = true;
  std::string separatrices;
  std::string segmentation;
  std::string cell_segmentation;
  std::string arc_segmentation;

  std::optional<double> threshold;
  std::vector<SimplexId> preserve;
  bool remove_saddle_saddle = false;
  std::string offsets_out;
};

struct Dataset {
  AnyTriangulation mesh;
  OrderField field;
};

inline ImplicitGridTriangulation parse_grid(const std::string& s) {
  static const std::regex re(R"((\d+)x(\d+)(?:x(\d+))?)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw std::invalid_argument("--grid expects WxH or WxHxD, got '" + s + "'");
  const SimplexId w = std::stoll(m[1]), h = std::stoll(m[2]);
  if (m[3].matched) return {w, h, std::stoll(m[3])};
  return {w, h};
}

inline Dataset load(const Options& o) {
  if (o.mesh.empty() == o.grid.empty()) throw std::invalid_argument("give exactly one of --mesh and --grid");
  const auto fmt = io::parse_field_format(o.format);
  Dataset ds;
  if (!o.mesh.empty()) {
    auto t = io::read_off_file(o.mesh);
    precondition_for_analysis(t);
    ds.mesh = std::move(t);
  } else {
    ds.mesh = parse_grid(o.grid);
  }
  const SimplexId n = std::visit([](const auto& t) { return t.vertex_count(); }, ds.mesh);
  ds.field = io::load_field(o.values, n, o.offsets, fmt);
  spdlog::info("loaded {} vertices, dimension {}", n, std::visit([](const auto& t) { return t.dimension(); }, ds.mesh));
  return ds;
}

// Everything goes through a buffer so that a failed run leaves no partial file.
inline void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  if (!out) throw DataError("error writing " + path);
}

namespace detail {

using io::format_number;

template <Triangulation T>
std::string info(const T& t, const OrderField& f) {
  std::ostringstream out;
  const int d = t.dimension();
  out << "dimension: " << d << '\n';
  static const char* names[] = {"vertices", "edges", "triangles", "tetrahedra"};
  for (int k = 0; k <= d; ++k) out << names[k] << ": " << t.simplex_count(k) << '\n';
  out << "euler characteristic: " << euler_characteristic(t) << '\n';
  out << "closed: " << (is_closed(t) ? "yes" : "no") << '\n';
  const SimplexId n = t.vertex_count();
  out << "minimum value: " << format_number(f.value(f.vertex_at(0))) << '\n';
  out << "maximum value: " << format_number(f.value(f.vertex_at(n - 1))) << '\n';
  return out.str();
}

template <Triangulation T>
std::string critical_points_csv(const T& t, const OrderField& f, int threads) {
  std::ostringstream out;
  out << "vertexId,x,y,z,index,multiplicity,value,isBoundary\n";
  for (const auto& p : extract_critical_points(t, f, threads)) {
    const Point3 x = t.point(p.vertex);
    out << p.vertex << ',' << format_number(x.x) << ',' << format_number(x.y) << ',' << format_number(x.z) << ','
        << p.index << ',' << p.multiplicity << ',' << format_number(p.value) << ',' << (p.boundary ? 1 : 0) << '\n';
  }
  return out.str();
}

template <Triangulation T>
PersistenceDiagram diagram(const T& t, const OrderField& f, const Options& o) {
  if (t.dimension() == 2 && o.saddle_saddle_set && o.saddle_saddle)
    throw std::invalid_argument("--saddle-saddle: 2D input has no saddle-saddle pairs");
  if (t.dimension() == 3 && o.saddle_saddle) {
    // Initial gradient: it only pairs inside lower stars, which is what the
    // (1,2) pairing needs.
    const DiscreteGradient g = build_gradient(t, f, o.threads);
    return build_diagram(t, f, &g, o.threads);
  }
  return build_diagram(t, f, nullptr, o.threads);
}

inline std::string diagram_csv(const PersistenceDiagram& d) {
  std::ostringstream out;
  out << "birthVertex,deathVertex,birthValue,deathValue,persistence,pairClass\n";
  for (const auto& p : d.pairs)
    out << p.birth_vertex << ',' << p.death_vertex << ',' << format_number(p.birth_value) << ','
        << format_number(p.death_value) << ',' << format_number(p.persistence()) << ','
        << pair_class_name(p.cls, d.dimension) << '\n';
  return out.str();
}

inline std::string curve_csv(const PersistenceDiagram& d) {
  std::ostringstream out;
  out << "threshold,pairs\n";
  for (const auto& [x, n] : persistence_curve(d)) out << format_number(x) << ',' << n << '\n';
  return out.str();
}

template <Triangulation T>
int contour_tree(const T& t, const OrderField& f, const Options& o) {
  const ContourTree ct = build_contour_tree(t, f);
  std::ostringstream out;
  out << "arcId,lowerVertex,upperVertex,lowerType,upperType,lowerValue,upperValue\n";
  for (std::size_t i = 0; i < ct.arcs.size(); ++i) {
    const auto& lo = ct.nodes[ct.arcs[i].lower];
    const auto& hi = ct.nodes[ct.arcs[i].upper];
    out << i << ',' << lo.vertex << ',' << hi.vertex << ',' << contour_node_type_name(lo.type) << ','
        << contour_node_type_name(hi.type) << ',' << format_number(f.value(lo.vertex)) << ','
        << format_number(f.value(hi.vertex)) << '\n';
  }
  emit(o.output, out.str());
  if (!o.arc_segmentation.empty()) {
    std::ostringstream seg;
    for (auto a : ct.vertex_arc) seg << static_cast<SimplexId>(a) << '\n';
    emit(o.arc_segmentation, seg.str());
  }
  return kOk;
}

inline std::string ref_text(SimplexRef s) { return std::to_string(s.dim) + ":" + std::to_string(s.id); }

inline std::string separatrices_obj(const std::vector<Polyline>& lines) {
  std::ostringstream out;
  out << "# separatrices: " << lines.size() << '\n';
  std::size_t base = 1;
  for (const auto& l : lines) {
    out << "g " << separatrix_kind_name(l.kind) << ' ' << ref_text(l.start) << ' ' << ref_text(l.end) << ' '
        << l.multiplicity << '\n';
    for (const auto& p : l.points)
      out << "v " << format_number(p.x) << ' ' << format_number(p.y) << ' ' << format_number(p.z) << '\n';
    out << 'l';
    for (std::size_t i = 0; i < l.points.size(); ++i) out << ' ' << base + i;
    out << '\n';
    base += l.points.size();
  }
  return out.str();
}

template <Triangulation T>
int morse_smale(const T& t, const OrderField& f, const Options& o) {
  DiscreteGradient g = build_gradient(t, f, o.threads);
  int code = kOk;
  if (o.compliance) {
    const auto points = extract_critical_points(t, f, o.threads);
    const auto rep = enforce_pl_compliance(t, f, g, match_pl(t, f, g, points));
    spdlog::info("compliance: {} saddle-extremum and {} saddle-saddle cancellations, {} left", rep.saddle_extremum.size(),
                 rep.saddle_saddle.size(), rep.residue.size());
    if (rep.failed) {
      spdlog::error("PL compliance failed: {}", rep.message);
      code = kInternal;
    }
  }
  std::ostringstream out;
  out << "dimension,simplexId,maxVertex,value\n";
  for (int d = 0; d <= t.dimension(); ++d)
    for (SimplexId s : g.critical(d)) {
      const SimplexId v = max_vertex(t, f, d, s);
      out << d << ',' << s << ',' << v << ',' << format_number(f.value(v)) << '\n';
    }
  emit(o.output, out.str());
  if (!o.separatrices.empty()) {
    auto paths = separatrices(t, f, g, o.threads);
    if (t.dimension() == 3) {
      auto conn = saddle_connectors_3d(t, f, g, o.threads);
      paths.insert(paths.end(), conn.begin(), conn.end());
    }
    emit(o.separatrices, separatrices_obj(extract_separatrix_geometry(t, paths)));
  }
  if (!o.segmentation.empty() || !o.cell_segmentation.empty()) {
    const auto seg = morse_segmentation(t, f, g);
    auto lines = [](const std::vector<SimplexId>& v) {
      std::ostringstream s;
      for (auto x : v) s << x << '\n';
      return s.str();
    };
    if (!o.segmentation.empty()) emit(o.segmentation, lines(seg.vertex));
    if (!o.cell_segmentation.empty()) emit(o.cell_segmentation, lines(seg.cell));
  }
  return code;
}

template <Triangulation T>
int simplify(const T& t, const OrderField& f, const Options& o) {
  if (o.remove_saddle_saddle && t.dimension() == 2)
    throw std::invalid_argument("--remove-saddle-saddle: 2D input has no saddle-saddle pairs");
  if (o.threshold.has_value() == !o.preserve.empty())
    throw std::invalid_argument("give exactly one of --threshold and --preserve");
  if (o.output == "-" && o.offsets_out.empty())
    throw std::invalid_argument("writing values to stdout needs --offsets-out");
  SimplificationRequest req;
  if (o.threshold) req = select_by_persistence(build_diagram(t, f, nullptr, o.threads), *o.threshold);
  else req.preserved = o.preserve;
  req.remove_saddle_saddle = o.remove_saddle_saddle;
  const OrderField s = simplify_field(t, f, req);
  spdlog::info("simplified to {} extrema", req.preserved.size());
  std::ostringstream values, offsets;
  io::write_values(values, s.values());
  io::write_offsets(offsets, s.offsets());
  emit(o.output, values.str());
  emit(o.offsets_out.empty() ? o.output + ".offsets" : o.offsets_out, offsets.str());
  return kOk;
}

// Cross-module invariants on one input; one "name: pass|fail|skip" line each.
template <Triangulation T>
int check(const T& t, const OrderField& f, const Options& o) {
  std::ostringstream out;
  bool ok = true;
  auto report = [&](const std::string& name, std::optional<bool> pass, const std::string& detail = {}) {
    out << name << ": " << (!pass ? "skip" : *pass ? "pass" : "fail");
    if (!detail.empty()) out << " (" << detail << ')';
    out << '\n';
    if (pass && !*pass) ok = false;
  };
  const int d = t.dimension();
  const bool closed = is_closed(t);
  const auto points = extract_critical_points(t, f, o.threads);
  const auto counts = count_critical_points(points);
  std::vector<SimplexId> minima, maxima;
  for (const auto& p : points) {
    if (p.index == 0) minima.push_back(p.vertex);
    if (p.index == d) maxima.push_back(p.vertex);
  }

  if (closed)
    report("euler-relation", counts.alternating_sum() == euler_characteristic(t),
           "alternating sum " + std::to_string(counts.alternating_sum()) + ", euler characteristic " +
               std::to_string(euler_characteristic(t)));
  else
    report("euler-relation", std::nullopt, "domain has boundary");

  const MergeTree join = build_merge_tree(t, f, MergeVariant::Join);
  const MergeTree split = build_merge_tree(t, f, MergeVariant::Split);
  report("merge-tree-leaves", join.leaves() == minima && split.leaves() == maxima);

  const auto dg = build_diagram(t, f, nullptr, o.threads);
  std::size_t n01 = 0, nd = 0;
  for (const auto& p : dg.pairs) {
    n01 += p.cls == PairClass::MinSaddle;
    nd += p.cls == PairClass::SaddleMax;
  }
  report("diagram-extremum-pairs", n01 + 1 == minima.size() && nd + 1 == maxima.size());

  DiscreteGradient g = build_gradient(t, f, o.threads);
  SimplexId morse = 0;
  for (int k = 0; k <= d; ++k) morse += (k % 2 ? -1 : 1) * static_cast<SimplexId>(g.critical(k).size());
  report("gradient-morse-relation", morse == euler_characteristic(t));

  const auto xi = match_pl(t, f, g, points);
  report("pl-matching", xi.short_matches.empty(), std::to_string(xi.short_matches.size()) + " unmatched");

  const auto rep = enforce_pl_compliance(t, f, g, xi);
  if (closed) {
    const auto cc = g.critical_counts();
    bool same = !rep.failed;
    for (int k = 0; k <= d; ++k) same = same && cc[static_cast<std::size_t>(k)] == counts.by_index[static_cast<std::size_t>(k)];
    report("pl-compliance", same, std::to_string(rep.residue.size()) + " residue");
  } else {
    report("pl-compliance", std::nullopt, "domain has boundary");
  }

  std::optional<bool> ct_ok;
  try {
    const ContourTree ct = build_contour_tree(t, f);
    std::vector<SimplexId> leaves;
    for (const auto& n : ct.nodes)
      if (n.type != ContourNodeType::Saddle) leaves.push_back(n.vertex);
    std::sort(leaves.begin(), leaves.end());
    std::vector<SimplexId> extrema = minima;
    extrema.insert(extrema.end(), maxima.begin(), maxima.end());
    std::sort(extrema.begin(), extrema.end());
    ct_ok = leaves == extrema;
  } catch (const DataError&) {
  }
  report("contour-tree-extrema", ct_ok, ct_ok ? "" : "domain not simply connected");

  std::vector<SimplexId> all = minima;
  all.insert(all.end(), maxima.begin(), maxima.end());
  report("simplify-no-op", simplify_field(t, f, {all}) == f);

  emit(o.output, out.str());
  return ok ? kOk : kInternal;
}

inline void setup_logging() {
  auto logger = spdlog::stderr_logger_mt("topokit");
  logger->set_pattern("topokit: %l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("TOPOKIT_LOG")) spdlog::cfg::helpers::load_levels(env);
}

}  // namespace detail

/// Entry point of the command line tool; returns the process exit code.
inline int run(int argc, const char* const* argv) {
  if (!spdlog::get("topokit")) detail::setup_logging();
  Options o;
  CLI::App app{"Topological analysis of piecewise linear scalar fields on triangulations"};
  app.name("topokit");
  app.require_subcommand(1);

  auto dataset = [&](CLI::App* c) {
    c->add_option("--mesh", o.mesh, "OFF mesh (triangles or tetrahedra)");
    c->add_option("--grid", o.grid, "regular grid WxH or WxHxD, x fastest");
    c->add_option("--values", o.values, "scalar values, one per vertex")->required();
    c->add_option("--offsets", o.offsets, "integer offsets breaking ties, one per vertex");
    c->add_option("--format", o.format, "values format: ascii, f32 or f64")->check(CLI::IsMember({"ascii", "f32", "f64"}));
    c->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    c->add_option("-o,--output", o.output, "output file, - for stdout");
  };
  auto pairs_flag = [&](CLI::App* c) {
    c->add_flag("--saddle-saddle,!--no-saddle-saddle", o.saddle_saddle, "include (1,2) pairs (3D only; default on)")
        ->each([&](const std::string&) { o.saddle_saddle_set = true; });
  };

  auto* info = app.add_subcommand("info", "mesh and field summary");
  dataset(info);
  auto* cp = app.add_subcommand("critical-points", "PL critical points as CSV");
  dataset(cp);
  auto* pd = app.add_subcommand("persistence-diagram", "persistence pairs as CSV");
  dataset(pd);
  pairs_flag(pd);
  auto* pc = app.add_subcommand("persistence-curve", "pairs above each persistence threshold as CSV");
  dataset(pc);
  pairs_flag(pc);
  auto* ct = app.add_subcommand("contour-tree", "contour tree arcs as CSV");
  dataset(ct);
  ct->add_option("--arc-segmentation", o.arc_segmentation, "arc id of every vertex, one per line");
  auto* ms = app.add_subcommand("morse-smale", "critical cells of the PL-compliant gradient as CSV");
  dataset(ms);
  ms->add_flag("--compliance,!--no-compliance", o.compliance, "cancel critical cells not matched by PL points");
  ms->add_option("--separatrices", o.separatrices, "separatrix polylines as OBJ");
  ms->add_option("--segmentation", o.segmentation, "minimum reached from every vertex, one per line");
  ms->add_option("--cell-segmentation", o.cell_segmentation, "maximum reached from every top cell, one per line");
  auto* sp = app.add_subcommand("simplify", "keep only selected extrema; writes values and offsets");
  dataset(sp);
  sp->add_option("--threshold", o.threshold, "keep extrema of pairs with persistence >= threshold");
  sp->add_option("--preserve", o.preserve, "vertex ids of the extrema to keep")->delimiter(',');
  sp->add_flag("--remove-saddle-saddle", o.remove_saddle_saddle, "also remove (1,2) pairs (not supported)");
  sp->add_option("--offsets-out", o.offsets_out, "offsets output (default: <output>.offsets)");
  auto* ck = app.add_subcommand("check", "cross-module invariants, one line each");
  dataset(ck);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    const Dataset ds = load(o);
    return std::visit(
        [&](const auto& t) -> int {
          const OrderField& f = ds.field;
          if (*info) emit(o.output, detail::info(t, f));
          else if (*cp) emit(o.output, detail::critical_points_csv(t, f, o.threads));
          else if (*pd) emit(o.output, detail::diagram_csv(detail::diagram(t, f, o)));
          else if (*pc) emit(o.output, detail::curve_csv(detail::diagram(t, f, o)));
          else if (*ct) return detail::contour_tree(t, f, o);
          else if (*ms) return detail::morse_smale(t, f, o);
          else if (*sp) return detail::simplify(t, f, o);
          else if (*ck) return detail::check(t, f, o);
          return kOk;
        },
        ds.mesh);
  } catch (const std::invalid_argument& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const DataError& e) {
    spdlog::error("{}", e.what());
    return kData;
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return kInternal;
  }
}

}  // namespace topokit::cli
