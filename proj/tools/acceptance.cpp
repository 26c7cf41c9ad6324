// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance [--work DIR] [--keep]

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "brepforge/assembly.hpp"
#include "brepforge/brep.hpp"
#include "brepforge/cli.hpp"
#include "brepforge/config.hpp"
#include "brepforge/dataset.hpp"
#include "brepforge/error.hpp"
#include "brepforge/geom2d.hpp"
#include "brepforge/grammar.hpp"
#include "brepforge/mltasks.hpp"
#include "brepforge/storey.hpp"

namespace {

using namespace brepforge;
namespace fs = std::filesystem;

struct Line {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const Line& l) {
  std::cout << (l.pass ? "PASS  " : "FAIL  ") << name << ": " << l.detail << std::endl;
  if (!l.pass) ++failures;
}

// Runs one criterion; an escaping exception counts as a failure.
void criterion(const std::string& name, const std::function<Line()>& body) {
  try {
    report(name, body());
  } catch (const std::exception& e) {
    report(name, {false, std::string("exception: ") + e.what()});
  }
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0) std::cerr << "brepforge " << args.front() << " exited " << code << ": " << err.str();
  return code;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = dataset::read_file(e.path());
  return files;
}

grammar::GrowthTrace make_trace(const geom2d::Rect& core, const std::vector<geom2d::Rect>& rooms) {
  grammar::GrowthTrace t;
  t.core = core;
  geom2d::Footprint f = geom2d::Footprint::from_rect(core);
  for (const geom2d::Rect& r : rooms) {
    f = geom2d::union_rect(f, r);
    t.snapshots.push_back(f);
    t.rooms.push_back(r);
  }
  return t;
}

bool pattern_ok(const BuildingMeta& m) {
  int total = 0;
  for (int k = 0; k < kMaxStoreys; ++k) {
    const int want = k < m.storey_count ? m.storey_count - k : 0;
    if (m.room_per_floor[static_cast<std::size_t>(k)] != want) return false;
    total += want;
  }
  return m.room_total == total && total == m.storey_count * (m.storey_count + 1) / 2;
}

// Window fixture: one room whose exterior walls each carry one window.
std::pair<storey::StoreyPlan, std::vector<storey::Opening>> room_with(
    const std::vector<std::pair<storey::Orientation, storey::Millis>>& windows) {
  storey::StoreyPlan p;
  std::vector<storey::Opening> ops;
  for (const auto& [o, width] : windows) {
    storey::WallSegment w;
    w.kind = storey::WallKind::Exterior;
    w.orientation = o;
    const bool ns = o == storey::Orientation::N || o == storey::Orientation::S;
    w.axis = ns ? storey::WallAxis::X : storey::WallAxis::Y;
    w.b = ns ? geom2d::Point2{80, 0} : geom2d::Point2{0, 80};
    w.rooms = {1};
    ops.push_back({p.walls.size(), storey::OpeningKind::Window, 100, width, 900, 1200});
    p.walls.push_back(w);
  }
  return {p, ops};
}

std::vector<storey::Millis> widths(const std::vector<storey::Opening>& ops) {
  std::vector<storey::Millis> out;
  for (const auto& o : ops) out.push_back(o.width);
  return out;
}

// Little-endian float64 decoded byte by byte, independent of the host order.
double le_double(const std::string& bytes, std::size_t at) {
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) bits = (bits << 8) | static_cast<unsigned char>(bytes[at + static_cast<std::size_t>(b)]);
  return std::bit_cast<double>(bits);
}

}  // namespace

int main(int argc, char** argv) {
  fs::path work = fs::temp_directory_path() / ("brepforge_acceptance_" + std::to_string(::getpid()));
  bool keep = false;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--work" && i + 1 < argc) {
      work = argv[++i];
    } else if (a == "--keep") {
      keep = true;
    } else {
      std::cerr << "usage: acceptance [--work DIR] [--keep]\n";
      return 2;
    }
  }
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path batch = work / "batch";

  // The 1,000-sample default-config batch shared by several criteria.
  const auto t0 = std::chrono::steady_clock::now();
  const int gen_code = run_cli({"gen", "--count", "1000", "--seed", "0", "--out", batch.string()});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  dataset::DatasetMeta ds;
  std::vector<dataset::BrepFile> solids;
  if (gen_code == 0) {
    ds = dataset::parse_dataset_meta_json(dataset::read_file(batch / "meta.json"));
    for (const BuildingMeta& m : ds.records)
      solids.push_back(dataset::parse_brep_json(dataset::read_file(batch / (m.id + ".brep.json"))));
  }

  criterion("watertightness", [&]() -> Line {
    if (gen_code != 0) return {false, "gen exited " + std::to_string(gen_code)};
    std::size_t tight = 0;
    for (const auto& f : solids) tight += brep::is_watertight(f.solid) ? 1 : 0;
    const bool accounted = ds.records.size() + ds.discard_log.size() == 1000;
    const bool ok = !solids.empty() && tight == solids.size() && seconds < 300.0 && accounted;
    return {ok, std::to_string(tight) + "/" + std::to_string(solids.size()) + " exported solids watertight (" +
                    std::to_string(ds.discard_log.size()) + " discarded), seeds 0-999 in " + fmt("%.1f", seconds) +
                    " s (limit 300 s)"};
  });

  criterion("per-floor pattern", [&]() -> Line {
    if (ds.records.empty()) return {false, "no records"};
    std::size_t bad = 0;
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
      const auto& m = ds.records[i];
      const auto r = dataset::recompute(solids[i].plan);
      if (!pattern_ok(m) || r.room_total != m.room_total || r.storey_count != m.storey_count) ++bad;
    }
    return {bad == 0, std::to_string(bad) + " violations of (S, S-1, ..., 1, 0...) and S(S+1)/2 over " +
                          std::to_string(ds.records.size()) + " buildings"};
  });

  criterion("storey-class truncation", [&]() -> Line {
    const geom2d::Rect core{{0, 0}, {40, 40}};
    const std::vector<geom2d::Rect> rooms = {{{-12, -46}, {40, 0}},
                                             {{-47, -59}, {-12, 0}},
                                             {{-81, -59}, {-47, -3}},
                                             {{-47, 0}, {-15, 54}},
                                             {{-105, -31}, {-81, 26}}};
    SeededRng rng(86, 86);
    const grammar::GrowthTrace grown = grammar::grow(grammar::GrammarConfig{}, rng);
    const bool collided = grown.terminated_by == grammar::Termination::Collision && grown.rooms == rooms;
    const assembly::Building b = assembly::assemble(make_trace(core, rooms), assembly::BuildingConfig{}, "fixture", 86);
    const bool ok = collided && b.meta.storey_count == 5 && b.meta.room_total == 15 && brep::is_watertight(b.solid);
    return {ok, std::string("6th production ") + (collided ? "collides" : "does not collide") + ", building has " +
                    std::to_string(b.meta.storey_count) + " storeys, " + std::to_string(b.meta.room_total) +
                    " rooms"};
  });

  criterion("distribution shape", [&]() -> Line {
    if (ds.records.empty()) return {false, "no records"};
    const dataset::Stats s = dataset::stats(ds);
    int lo = 99, hi = 0;
    for (const auto& [k, c] : s.storeys)
      if (c > 0) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
      }
    const double share = static_cast<double>(s.storeys.at(10)) / s.records;
    const double mode = s.room_area.mode();
    const bool ok = lo == 2 && hi == 10 && s.storey_mode() == 10 && share >= 0.20 && share <= 0.70 && mode >= 10.0 &&
                    mode + s.room_area.bin_width <= 25.0;
    return {ok, "storeys " + std::to_string(lo) + "-" + std::to_string(hi) + ", mode " +
                    std::to_string(s.storey_mode()) + ", 10-storey share " + fmt("%.1f%%", 100 * share) +
                    ", room-area mode [" + fmt("%g", mode) + ", " + fmt("%g", mode + s.room_area.bin_width) + ") m^2"};
  });

  criterion("metric arithmetic", [&]() -> Line {
    const auto m = mltasks::binary_metrics(41, 9, 37, 13);
    const std::string acc = fmt("%.3f", m.accuracy), prec = fmt("%.3f", m.precision), rec = fmt("%.3f", m.recall);
    // F1 = 82/128 exactly; compared at the two decimals it is published with.
    const std::string f1 = fmt("%.2f", m.f1);
    bool ok = acc == "0.540" && prec == "0.526" && rec == "0.820" && f1 == "0.64" && m.f1 == 82.0 / 128.0;
    std::vector<mltasks::RegressionRow> truths;
    for (const auto& r : ds.records) truths.push_back(mltasks::truth_row(r));
    const auto g = mltasks::eval_regression(truths, truths);
    const bool zero = g.count == truths.size() && !truths.empty() && g.storey_accuracy == 1.0 && g.storey_mae == 0 &&
                      g.roomtot_mae == 0 && g.roomtot_rmse == 0 && g.avgarea_mae == 0 && g.perfloor_mae == 0;
    ok = ok && zero;
    return {ok, "binary acc " + acc + " prec " + prec + " rec " + rec + " f1 " + f1 + " (" + fmt("%.6f", m.f1) +
                    "); regression identity over " + std::to_string(g.count) + " buildings " +
                    (zero ? "all errors 0, accuracy 1" : "NONZERO")};
  });

  criterion("label and metric contract", [&]() -> Line {
    if (ds.records.empty()) return {false, "no records"};
    std::size_t bad = 0;
    std::vector<mltasks::RegressionRow> rows;
    for (const auto& m : ds.records) {
      const auto l = mltasks::oracle_labels(m);
      bool same = l.storey == m.storey_count && l.room_total == m.room_total && l.avg_area == m.avg_room_area;
      for (int k = 0; k < kMaxStoreys; ++k)
        same = same && l.room_per_floor[static_cast<std::size_t>(k)] == m.room_per_floor[static_cast<std::size_t>(k)];
      bad += same ? 0 : 1;
      rows.push_back(mltasks::truth_row(m));
    }
    const auto back = mltasks::parse_regression_csv(mltasks::regression_csv(rows));
    bool round_trip = back.size() == rows.size();
    for (std::size_t i = 0; round_trip && i < rows.size(); ++i)
      round_trip = back[i].filename == rows[i].filename && back[i].storey == rows[i].storey &&
                   back[i].room_total == rows[i].room_total && back[i].avg_area == rows[i].avg_area &&
                   back[i].room_per_floor == rows[i].room_per_floor;
    return {bad == 0 && round_trip, std::to_string(bad) + " label mismatches; truth CSV round trip " +
                                        (round_trip ? "exact" : "LOSSY") +
                                        " (trained-model scores are out of scope)"};
  });

  criterion("determinism", [&]() -> Line {
    const fs::path a = work / "det_a", b = work / "det_b";
    if (run_cli({"gen", "--count", "50", "--seed", "7", "--out", a.string()}) != 0 ||
        run_cli({"gen", "--count", "50", "--seed", "7", "--out", b.string()}) != 0)
      return {false, "gen failed"};
    const auto ta = tree(a), tb = tree(b);
    std::size_t differing = 0;
    for (const auto& [name, data] : ta) {
      const auto it = tb.find(name);
      if (it == tb.end() || config::fnv1a64(it->second) != config::fnv1a64(data) || it->second != data) ++differing;
    }
    const bool ok = ta.size() == tb.size() && differing == 0 && ta.count("meta.npy") == 1;
    return {ok, std::to_string(ta.size()) + " files per tree, " + std::to_string(differing) +
                    " differ (meta.npy included: " + (ta.count("meta.npy") ? "yes" : "no") + ")"};
  });

  criterion("NPY conformance", [&]() -> Line {
    const std::string bytes = dataset::read_file(batch / "meta.npy");
    const unsigned char magic[] = {0x93, 0x4E, 0x55, 0x4D, 0x50, 0x59, 0x01, 0x00};
    if (bytes.size() < 10 || std::memcmp(bytes.data(), magic, 8) != 0) return {false, "bad magic or version"};
    const std::size_t len = static_cast<unsigned char>(bytes[8]) + 256u * static_cast<unsigned char>(bytes[9]);
    const std::string header = bytes.substr(10, len);
    const std::size_t n = ds.records.size();
    const bool header_ok = header.find("'descr': '<f8'") != std::string::npos &&
                           header.find("'fortran_order': False") != std::string::npos &&
                           header.find("'shape': (" + std::to_string(n) + ", 14)") != std::string::npos &&
                           header.back() == '\n' && (10 + len) % 64 == 0;
    const std::size_t payload = bytes.size() - 10 - len;
    bool exact = payload == n * 14 * 8;
    const std::vector<double> want = dataset::meta_matrix(ds);
    for (std::size_t i = 0; exact && i < want.size(); ++i)
      exact = std::bit_cast<std::uint64_t>(le_double(bytes, 10 + len + 8 * i)) == std::bit_cast<std::uint64_t>(want[i]);
    return {header_ok && exact, "magic 93 4E 55 4D 50 59 01 00, header " + std::string(header_ok ? "ok" : "BAD") +
                                    ", shape (" + std::to_string(n) + ", 14), payload " +
                                    (exact ? "bit-exact" : "MISMATCH")};
  });

  criterion("defect oracle", [&]() -> Line {
    if (solids.size() < 100) return {false, "fewer than 100 exported buildings"};
    std::size_t good_pass = 0, defect_fail = 0, clouds_ok = 0;
    double worst_radius = 0;
    for (std::size_t i = 0; i < 100; ++i) {
      const auto& s = solids[i].solid;
      good_pass += brep::is_watertight(s) ? 1 : 0;
      SeededRng drng(i, 1);
      defect_fail += brep::is_watertight(mltasks::inject_defect(s, drng)) ? 0 : 1;
      const brep::TriMesh mesh = brep::triangulate(s);
      SeededRng crng(i, 2), srng(i, 3);
      const auto cube = mltasks::sample_points(mesh, mltasks::kDefaultPoints, mltasks::NormMode::UnitCube, crng);
      const auto sphere = mltasks::sample_points(mesh, mltasks::kDefaultPoints, mltasks::NormMode::UnitSphere, srng);
      bool in_cube = cube.size() == 4000 && sphere.size() == 4000;
      for (std::size_t p = 0; p < cube.size(); ++p)
        in_cube = in_cube && std::min({cube.x[p], cube.y[p], cube.z[p]}) >= 0.0 &&
                  std::max({cube.x[p], cube.y[p], cube.z[p]}) <= 1.0;
      double r = 0;
      for (std::size_t p = 0; p < sphere.size(); ++p)
        r = std::max(r, std::sqrt(sphere.x[p] * sphere.x[p] + sphere.y[p] * sphere.y[p] + sphere.z[p] * sphere.z[p]));
      worst_radius = std::max(worst_radius, std::abs(r - 1.0));
      clouds_ok += (in_cube && std::abs(r - 1.0) <= 1e-9) ? 1 : 0;
    }
    const bool ok = good_pass == 100 && defect_fail == 100 && clouds_ok == 100;
    return {ok, std::to_string(defect_fail) + "/100 defects open, " + std::to_string(good_pass) + "/100 GOOD closed, " +
                    std::to_string(clouds_ok) + "/100 building cloud pairs of 4000 points in [0,1]^3 and radius 1 (worst |r-1| " +
                    fmt("%.1e", worst_radius) + ")"};
  });

  criterion("geometry oracles", [&]() -> Line {
    // Union additivity: a 4x4 core plus a 4x3 side room is 28 m^2; every
    // exported plan's ground footprint equals its core plus rooms.
    const geom2d::Rect core{{0, 0}, {40, 40}};
    const geom2d::Rect side{{40, 0}, {80, 30}};
    bool additive = std::abs(geom2d::polygon_area(geom2d::union_rect(geom2d::Footprint::from_rect(core), side)) - 28.0) <= 1e-9;
    double worst_union = 0;
    for (const auto& f : solids) {
      double sum = f.plan.core.area_m2();
      for (const auto& r : f.plan.rooms.front()) sum += r.area_m2();
      worst_union = std::max(worst_union, std::abs(geom2d::polygon_area(f.plan.footprints.front()) - sum));
    }
    additive = additive && worst_union <= 1e-9;

    // Triangulation area conservation on the fixtures and the first 100 solids.
    const auto cube = brep::extrude_prism({{{0, 0}, {1000, 0}, {1000, 1000}, {0, 1000}}, {}}, 0, 1000);
    const auto ring = brep::extrude_prism(
        {{{0, 0}, {9000, 0}, {9000, 9000}, {0, 9000}}, {{{3000, 3000}, {3000, 6000}, {6000, 6000}, {6000, 3000}}}}, 0,
        3000);
    std::vector<const brep::BRepSolid*> meshes = {&cube, &ring};
    for (std::size_t i = 0; i < std::min<std::size_t>(100, solids.size()); ++i) meshes.push_back(&solids[i].solid);
    double worst_rel = 0;
    for (const auto* s : meshes) {
      const brep::TriMesh m = brep::triangulate(*s);
      double area = 0;
      for (std::size_t t = 0; t < m.triangles.size(); ++t) area += brep::triangle_area(m, t);
      worst_rel = std::max(worst_rel, std::abs(area - brep::surface_area(*s)) / brep::surface_area(*s));
    }
    const bool conserved = worst_rel <= 1e-6;

    const long chi_cube = brep::euler_counts(cube).characteristic();
    const long chi_ring = brep::euler_counts(ring).characteristic();
    const bool euler = chi_cube == 2 && chi_ring == 0;

    using storey::Orientation;
    auto [pa, oa] = room_with({{Orientation::S, 3200}, {Orientation::E, 1000}, {Orientation::N, 800}});
    auto [pb, ob] = room_with({{Orientation::S, 2400}, {Orientation::E, 1800}, {Orientation::N, 1200}});
    auto [pc, oc] = room_with({{Orientation::W, 900}, {Orientation::N, 800}, {Orientation::S, 700}});
    const bool rule_a = widths(storey::prune_windows(pa, oa)) == std::vector<storey::Millis>{3200};
    const bool rule_b = widths(storey::prune_windows(pb, ob)) == std::vector<storey::Millis>{2400, 1200};
    const auto kept_c = storey::prune_windows(pc, oc);
    const bool rule_c = kept_c.size() == 2 && pc.walls[kept_c[0].wall].orientation == Orientation::N &&
                        pc.walls[kept_c[1].wall].orientation == Orientation::S;

    const bool ok = additive && conserved && euler && rule_a && rule_b && rule_c;
    return {ok, std::string("union additivity ") + (additive ? "ok" : "FAILED") + " (worst " + fmt("%.1e", worst_union) +
                    " m^2), triangulation worst rel " + fmt("%.1e", worst_rel) + ", chi cube " +
                    std::to_string(chi_cube) + " ring " + std::to_string(chi_ring) + ", pruning a/b/c " +
                    (rule_a ? "ok" : "FAIL") + "/" + (rule_b ? "ok" : "FAIL") + "/" + (rule_c ? "ok" : "FAIL")};
  });

  if (!keep) fs::remove_all(work);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
