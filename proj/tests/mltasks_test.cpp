#include "brepforge/mltasks.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "brepforge/error.hpp"

namespace {

using namespace brepforge;
using mltasks::NormMode;

brep::BRepSolid cube(brep::Mm side = 1000) {
  return brep::extrude_prism({{{0, 0}, {side, 0}, {side, side}, {0, side}}, {}}, 0, side);
}

std::string dp(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Three-sigma half-width of a binomial count.
double three_sigma(double n, double p) { return 3.0 * std::sqrt(n * p * (1 - p)); }

TEST(SamplePoints, CubeCloudFillsUnitCube) {
  SeededRng rng(1, 1);
  const auto c = mltasks::sample_points(brep::triangulate(cube()), 4000, NormMode::UnitCube, rng);
  ASSERT_EQ(c.size(), 4000u);
  bool hits_zero = false, hits_one = false;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (double v : {c.x[i], c.y[i], c.z[i]}) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
      hits_zero |= v == 0.0;
      hits_one |= v == 1.0;
    }
  EXPECT_TRUE(hits_zero);
  EXPECT_TRUE(hits_one);
}

TEST(SamplePoints, CubeFaceSharesAreBinomial) {
  SeededRng rng(2, 7);
  const auto c = mltasks::sample_points(brep::triangulate(cube()), 4000, NormMode::UnitCube, rng);
  int counts[6] = {0, 0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double p[3] = {c.x[i], c.y[i], c.z[i]};
    int face = -1, on = 0;
    for (int a = 0; a < 3; ++a) {
      if (std::abs(p[a]) < 1e-9) face = 2 * a, ++on;
      if (std::abs(p[a] - 1) < 1e-9) face = 2 * a + 1, ++on;
    }
    ASSERT_GE(face, 0);
    if (on == 1) ++counts[face];
  }
  int total = 0;
  for (int f = 0; f < 6; ++f) {
    EXPECT_NEAR(counts[f], 4000.0 / 6, three_sigma(4000, 1.0 / 6)) << f;
    total += counts[f];
  }
  EXPECT_GE(total, 3990);
}

TEST(SamplePoints, LargerTriangleGetsTwoThirds) {
  brep::TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 5}, {2, 0, 5}, {0, 1, 5}};
  m.triangles = {{0, 1, 2}, {3, 4, 5}};
  SeededRng rng(3, 3);
  const auto c = mltasks::sample_points(m, 4000, NormMode::UnitCube, rng);
  const auto upper = std::count_if(c.z.begin(), c.z.end(), [](double z) { return z > 0.5; });
  EXPECT_NEAR(static_cast<double>(upper), 4000.0 * 2 / 3, three_sigma(4000, 2.0 / 3));
}

TEST(SamplePoints, UniformInsideTriangle) {
  // The corner triangle u + v < h/2 holds a quarter of the area, where h is
  // the hypotenuse level after normalization.
  brep::TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.triangles = {{0, 1, 2}};
  SeededRng rng(4, 4);
  const auto c = mltasks::sample_points(m, 4000, NormMode::UnitCube, rng);
  double h = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_GE(c.x[i], 0.0);
    EXPECT_GE(c.y[i], 0.0);
    EXPECT_EQ(c.z[i], 0.0);
    h = std::max(h, c.x[i] + c.y[i]);
  }
  int corner = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.x[i] + c.y[i] < h / 2) ++corner;
  EXPECT_NEAR(corner, 1000.0, three_sigma(4000, 0.25));
}

TEST(SamplePoints, SphereNormalization) {
  SeededRng rng(5, 5);
  const brep::TriMesh mesh = brep::triangulate(
      brep::extrude_prism({{{0, 0}, {8000, 0}, {8000, 3000}, {3000, 3000}, {3000, 9000}, {0, 9000}}, {}}, 0, 6000));
  const auto c = mltasks::sample_points(mesh, 4000, NormMode::UnitSphere, rng);
  ASSERT_EQ(c.size(), 4000u);
  double rmax = 0, mx = 0, my = 0, mz = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    rmax = std::max(rmax, std::sqrt(c.x[i] * c.x[i] + c.y[i] * c.y[i] + c.z[i] * c.z[i]));
    mx += c.x[i];
    my += c.y[i];
    mz += c.z[i];
  }
  EXPECT_NEAR(rmax, 1.0, 1e-9);
  EXPECT_NEAR(mx / 4000, 0.0, 1e-9);
  EXPECT_NEAR(my / 4000, 0.0, 1e-9);
  EXPECT_NEAR(mz / 4000, 0.0, 1e-9);
}

TEST(SamplePoints, DeterministicPerSeed) {
  const brep::TriMesh mesh = brep::triangulate(cube());
  SeededRng a(6, 1), b(6, 1), c(7, 1);
  const auto p = mltasks::sample_points(mesh, 500, NormMode::UnitCube, a);
  const auto q = mltasks::sample_points(mesh, 500, NormMode::UnitCube, b);
  const auto r = mltasks::sample_points(mesh, 500, NormMode::UnitCube, c);
  EXPECT_EQ(p.x, q.x);
  EXPECT_EQ(p.y, q.y);
  EXPECT_EQ(p.z, q.z);
  EXPECT_NE(p.x, r.x);
}

TEST(SamplePoints, EmptyOrFlatMeshIsRejected) {
  SeededRng rng(1, 1);
  try {
    mltasks::sample_points(brep::TriMesh{}, 10, NormMode::UnitCube, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyMesh);
  }
  brep::TriMesh flat;
  flat.vertices = {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}};
  flat.triangles = {{0, 1, 2}};
  try {
    mltasks::sample_points(flat, 10, NormMode::UnitCube, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyMesh);
  }
}

TEST(PointFiles, XyzAndF32Layout) {
  mltasks::PointCloud c;
  c.x = {0.5, 1};
  c.y = {0.25, 0};
  c.z = {1, 0.125};
  EXPECT_EQ(mltasks::to_xyz(c), "0.5 0.25 1\n1 0 0.125\n");
  const std::string f = mltasks::to_f32(c);
  ASSERT_EQ(f.size(), 24u);
  float v[6];
  std::memcpy(v, f.data(), sizeof v);
  EXPECT_EQ(v[0], 0.5f);
  EXPECT_EQ(v[2], 1.0f);
  EXPECT_EQ(v[5], 0.125f);
}

TEST(ExteriorFaces, CubeHasSix) { EXPECT_EQ(mltasks::exterior_faces(cube()).size(), 6u); }

TEST(ExteriorFaces, WindowTunnelFacesAreInterior) {
  const auto wall = brep::extrude_prism({{{0, 0}, {4000, 0}, {4000, 200}, {0, 200}}, {}}, 0, 3000);
  const auto cut = brep::cut_opening(wall, {{1000, 0, 900}, {2000, 200, 2100}});
  ASSERT_EQ(cut.faces.size(), 10u);
  const auto ext = mltasks::exterior_faces(cut);
  EXPECT_EQ(ext.size(), 6u);
  for (std::size_t i : ext) {
    const auto& f = cut.faces[i];
    const bool outer = (f.plane.axis == 0 && (f.plane.offset == 0 || f.plane.offset == 4000)) ||
                       (f.plane.axis == 1 && (f.plane.offset == 0 || f.plane.offset == 200)) ||
                       (f.plane.axis == 2 && (f.plane.offset == 0 || f.plane.offset == 3000));
    EXPECT_TRUE(outer) << "axis " << f.plane.axis << " offset " << f.plane.offset;
  }
}

TEST(ExteriorFaces, CourtyardFacesAreInterior) {
  const auto ring = brep::extrude_prism(
      {{{0, 0}, {9000, 0}, {9000, 9000}, {0, 9000}}, {{{3000, 3000}, {3000, 6000}, {6000, 6000}, {6000, 3000}}}}, 0, 3000);
  EXPECT_EQ(mltasks::exterior_faces(ring).size(), 6u);
  const auto ell = brep::extrude_prism({{{0, 0}, {5000, 0}, {5000, 2000}, {2000, 2000}, {2000, 6000}, {0, 6000}}, {}}, 0, 3000);
  EXPECT_EQ(mltasks::exterior_faces(ell).size(), ell.faces.size());
}

TEST(RemoveFaces, BoundaryEdgesMatchPerimeterOracle) {
  const auto c = cube();
  // Each removed quad leaves its 4 edges half-used; an edge shared by two
  // removed faces loses both uses and vanishes.
  EXPECT_EQ(brep::check_watertight(mltasks::remove_faces(c, {0})).issues.size(), 4u);
  std::size_t a = 0, b = 0, opp = 0;
  for (std::size_t i = 0; i < c.faces.size(); ++i) {
    if (c.faces[i].plane.axis == 2 && c.faces[i].plane.sign < 0) a = i;
    if (c.faces[i].plane.axis == 0 && c.faces[i].plane.sign < 0) b = i;
    if (c.faces[i].plane.axis == 2 && c.faces[i].plane.sign > 0) opp = i;
  }
  EXPECT_EQ(brep::check_watertight(mltasks::remove_faces(c, {a, b})).issues.size(), 6u);
  EXPECT_EQ(brep::check_watertight(mltasks::remove_faces(c, {a, opp})).issues.size(), 8u);
  EXPECT_EQ(mltasks::remove_faces(c, {a}).label, brep::Label::Defect);
}

TEST(InjectDefect, OpensTheShellAndRelabels) {
  const auto c = cube();
  std::vector<int> removed_counts(4, 0);
  for (std::uint64_t s = 0; s < 60; ++s) {
    SeededRng rng(s, 11);
    const auto d = mltasks::inject_defect(c, rng);
    EXPECT_EQ(d.label, brep::Label::Defect);
    EXPECT_FALSE(brep::is_watertight(d));
    const std::size_t k = c.faces.size() - d.faces.size();
    ASSERT_GE(k, 1u);
    ASSERT_LE(k, 3u);
    ++removed_counts[k];
  }
  for (int k = 1; k <= 3; ++k) EXPECT_GT(removed_counts[static_cast<std::size_t>(k)], 0);

  SeededRng rng(1, 1);
  auto d = mltasks::inject_defect(c, rng);
  try {
    mltasks::inject_defect(d, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AlreadyDefect);
  }
}

TEST(DefectNames, SuffixConvention) {
  EXPECT_EQ(mltasks::defect_id("bldg_000001", 2), "bldg_000001_def2");
  EXPECT_TRUE(mltasks::is_defect_name("out/bldg_000001_def2.xyz"));
  EXPECT_FALSE(mltasks::is_defect_name("out/bldg_000001.xyz"));
}

TEST(OracleLabels, Pattern) {
  BuildingMeta m;
  m.storey_count = 3;
  m.avg_room_area = 14.5;
  auto l = mltasks::oracle_labels(m);
  EXPECT_EQ(l.room_total, 6);
  EXPECT_EQ(l.room_per_floor, (std::array<double, 10>{3, 2, 1, 0, 0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(l.avg_area, 14.5);
  m.storey_count = 10;
  EXPECT_EQ(mltasks::oracle_labels(m).room_total, 55);
  m.storey_count = 2;
  l = mltasks::oracle_labels(m);
  EXPECT_EQ(l.room_total, 3);
  EXPECT_EQ(l.room_per_floor[0], 2);
  EXPECT_EQ(l.room_per_floor[1], 1);
  EXPECT_EQ(l.room_per_floor[2], 0);
}

mltasks::RegressionRow row(const std::string& name, double s, double tot, double area, bool per_floor = true) {
  mltasks::RegressionRow r;
  r.filename = name;
  r.storey = s;
  r.room_total = tot;
  r.avg_area = area;
  r.has_per_floor = per_floor;
  for (int i = 0; i < 10; ++i) r.room_per_floor[static_cast<std::size_t>(i)] = per_floor ? std::max(s - i, 0.0) : 0;
  return r;
}

TEST(EvalRegression, IdentityIsZero) {
  std::vector<mltasks::RegressionRow> t = {row("a", 3, 6, 12), row("b", 10, 55, 18.25), row("c", 2, 3, 9)};
  const auto m = mltasks::eval_regression(t, t);
  EXPECT_EQ(m.count, 3u);
  EXPECT_EQ(m.storey_accuracy, 1.0);
  EXPECT_EQ(m.storey_mae, 0.0);
  EXPECT_EQ(m.roomtot_mae, 0.0);
  EXPECT_EQ(m.roomtot_rmse, 0.0);
  EXPECT_EQ(m.avgarea_mae, 0.0);
  EXPECT_EQ(m.perfloor_mae, 0.0);
}

TEST(EvalRegression, HandArithmetic) {
  auto truth = row("x", 5, 15, 12);
  auto pred = row("x.xyz", 4, 15, 12);
  pred.room_per_floor = truth.room_per_floor;
  auto m = mltasks::eval_regression({pred}, {truth});
  EXPECT_EQ(m.storey_mae, 1.0);
  EXPECT_EQ(m.storey_accuracy, 0.0);

  // Per-floor truths reconstructed from s = 4: |0 - 4| + |0 - 3| + |0 - 2| + |0 - 1| over 10.
  auto t4 = row("y", 4, 10, 15, false);
  auto p0 = row("y", 4, 10, 15);
  p0.room_per_floor.fill(0);
  m = mltasks::eval_regression({p0}, {t4});
  EXPECT_DOUBLE_EQ(m.perfloor_mae, 1.0);

  // Room-total errors +3 and -4: MAE 3.5, RMSE sqrt(12.5); area errors 1 and 3.
  m = mltasks::eval_regression({row("a", 3, 9, 13), row("b", 3, 2, 9)}, {row("a", 3, 6, 12), row("b", 3, 6, 12)});
  EXPECT_DOUBLE_EQ(m.roomtot_mae, 3.5);
  EXPECT_DOUBLE_EQ(m.roomtot_rmse, std::sqrt(12.5));
  EXPECT_DOUBLE_EQ(m.avgarea_mae, 2.0);
}

TEST(EvalRegression, JoinErrorListsMissingIds) {
  try {
    mltasks::eval_regression({row("a", 3, 6, 12), row("q", 3, 6, 12)}, {row("a", 3, 6, 12), row("z", 2, 3, 9)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Join);
    const std::string what = e.what();
    EXPECT_NE(what.find("q"), std::string::npos);
    EXPECT_NE(what.find("z"), std::string::npos);
  }
}

TEST(EvalBinary, ReferenceConfusionMatrix) {
  std::vector<mltasks::BinaryRow> rows;
  auto add = [&](int n, bool defect, brep::Label pred) {
    for (int i = 0; i < n; ++i)
      rows.push_back({"m" + std::to_string(rows.size()) + (defect ? "_def1.xyz" : ".xyz"), pred});
  };
  add(41, true, brep::Label::Defect);
  add(9, true, brep::Label::Good);
  add(37, false, brep::Label::Defect);
  add(13, false, brep::Label::Good);
  const auto m = mltasks::eval_binary(rows);
  EXPECT_EQ(m.tp, 41);
  EXPECT_EQ(m.fn, 9);
  EXPECT_EQ(m.fp, 37);
  EXPECT_EQ(m.tn, 13);
  EXPECT_DOUBLE_EQ(m.accuracy, 54.0 / 100);
  EXPECT_DOUBLE_EQ(m.precision, 41.0 / 78);
  EXPECT_DOUBLE_EQ(m.recall, 41.0 / 50);
  EXPECT_DOUBLE_EQ(m.f1, 82.0 / 128);
  EXPECT_EQ(dp(m.accuracy, 3), "0.540");
  EXPECT_EQ(dp(m.precision, 3), "0.526");
  EXPECT_EQ(dp(m.recall, 3), "0.820");
  EXPECT_EQ(dp(m.f1, 2), "0.64");
  EXPECT_FALSE(m.degenerate);
}

TEST(EvalBinary, PerfectAndDegenerate) {
  auto m = mltasks::binary_metrics(5, 0, 0, 5);
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.f1, 1.0);
  m = mltasks::binary_metrics(0, 4, 0, 6);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_TRUE(m.degenerate);
  EXPECT_EQ(m.accuracy, 0.6);
}

TEST(Csv, BinaryRoundTripAndErrors) {
  const std::string text = "filename,prediction\na_def1.xyz,DEFECT\nb.xyz,GOOD\n";
  const auto rows = mltasks::parse_binary_csv(text);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].prediction, brep::Label::Defect);
  EXPECT_EQ(mltasks::binary_csv(rows), text);
  EXPECT_THROW(mltasks::parse_binary_csv("filename,prediction\na,MAYBE\n"), Error);
  EXPECT_THROW(mltasks::parse_binary_csv("file,pred\na,GOOD\n"), Error);
}

TEST(Csv, RegressionRoundTripAndEmptyPerFloor) {
  std::vector<mltasks::RegressionRow> rows = {row("a", 3, 6, 12.5), row("b", 2, 3, 9, false)};
  const std::string text = mltasks::regression_csv(rows);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "filename,pred_storey,pred_room_tot,pred_avg_area,pred_room_per_1,pred_room_per_2,pred_room_per_3,"
            "pred_room_per_4,pred_room_per_5,pred_room_per_6,pred_room_per_7,pred_room_per_8,pred_room_per_9,"
            "pred_room_per_10");
  const auto back = mltasks::parse_regression_csv(text);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].avg_area, 12.5);
  EXPECT_TRUE(back[0].has_per_floor);
  EXPECT_EQ(back[0].room_per_floor[0], 3);
  EXPECT_FALSE(back[1].has_per_floor);
}

TEST(IdOf, StripsDirectoryAndExtension) {
  EXPECT_EQ(mltasks::id_of("d/x/bldg_000003.brep.json"), "bldg_000003");
  EXPECT_EQ(mltasks::id_of("bldg_000003.xyz"), "bldg_000003");
  EXPECT_EQ(mltasks::id_of("bldg_000003"), "bldg_000003");
}

}  // namespace
