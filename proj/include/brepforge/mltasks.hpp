#pragma once

// Data preparation and scoring for the two baseline tasks: attribute
// regression from point clouds and GOOD/DEFECT classification.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "brepforge/brep.hpp"
#include "brepforge/meta.hpp"
#include "brepforge/rng.hpp"
#include "brepforge/simd/kernels.hpp"

namespace brepforge::mltasks {

enum class NormMode { UnitCube, UnitSphere };

const char* to_string(NormMode m);

inline constexpr std::size_t kDefaultPoints = 4000;

struct PointCloud {
  std::vector<double> x, y, z;
  NormMode mode = NormMode::UnitCube;
  std::string source_id;
  std::uint64_t seed = 0;

  std::size_t size() const { return x.size(); }
};

/// Area-weighted surface sampling: triangles are picked by inverting the
/// cumulative area sum, points inside them with sqrt-warped barycentrics.
/// UnitCube shifts by the bounding-box minimum and divides by the largest
/// extent; UnitSphere shifts by the centroid and divides by the largest
/// radius. Throws EmptyMesh when the total area is zero.
PointCloud sample_points(const brep::TriMesh& mesh, std::size_t n, NormMode mode, SeededRng& rng);
PointCloud sample_points(const brep::TriMesh& mesh, std::size_t n, NormMode mode, SeededRng& rng, simd::Isa isa);

/// `x y z` per line.
std::string to_xyz(const PointCloud& c);
/// Little-endian float32, n x 3 row-major.
std::string to_f32(const PointCloud& c);

/// Faces on the outer envelope: a ray leaving some part of the face along
/// its outward normal escapes without meeting another face.
std::vector<std::size_t> exterior_faces(const brep::BRepSolid& s);

/// Copy of `s` without the listed faces, labelled DEFECT.
brep::BRepSolid remove_faces(const brep::BRepSolid& s, std::vector<std::size_t> faces);

/// Removes 1 to 3 distinct exterior faces (count and faces drawn uniformly).
/// Throws AlreadyDefect for a DEFECT input.
brep::BRepSolid inject_defect(const brep::BRepSolid& s, SeededRng& rng);

/// Name of the k-th defect variant of a building, containing "_def".
std::string defect_id(const std::string& id, int k);
bool is_defect_name(const std::string& filename);

struct LabelVector {
  int storey = 0;
  int room_total = 0;
  std::array<double, kMaxStoreys> room_per_floor{};
  double avg_area = 0;
};

/// Storey count and mean area from the meta, room counts from the
/// (s, s-1, ..., 1, 0, ...) pattern.
LabelVector oracle_labels(const BuildingMeta& meta);

struct RegressionRow {
  std::string filename;
  double storey = 0;
  double room_total = 0;
  double avg_area = 0;
  std::array<double, kMaxStoreys> room_per_floor{};
  /// False when the per-floor columns were empty.
  bool has_per_floor = true;
};

struct RegressionMetrics {
  std::size_t count = 0;
  /// Fraction of buildings whose rounded predicted storey count is exact.
  double storey_accuracy = 0;
  double storey_mae = 0;
  double roomtot_mae = 0;
  double roomtot_rmse = 0;
  double avgarea_mae = 0;
  double perfloor_mae = 0;
};

/// Joins on the building id (file name without directory and extension).
/// Truth rows without per-floor counts get them from the storey pattern.
/// Throws Join listing ids missing on either side.
RegressionMetrics eval_regression(const std::vector<RegressionRow>& predictions, const std::vector<RegressionRow>& truths);

struct BinaryMetrics {
  long tp = 0, fn = 0, fp = 0, tn = 0;
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  /// Set when precision, recall or F1 had a zero denominator and was
  /// reported as 0.
  bool degenerate = false;
};

/// DEFECT is the positive class.
BinaryMetrics binary_metrics(long tp, long fn, long fp, long tn);

struct BinaryRow {
  std::string filename;
  brep::Label prediction = brep::Label::Good;
};

/// Truth is DEFECT iff the file name contains "_def".
BinaryMetrics eval_binary(const std::vector<BinaryRow>& predictions);

/// Building id of a file name: directory and known extensions stripped.
std::string id_of(const std::string& filename);

/// Header `filename,pred_storey,pred_room_tot,pred_avg_area,pred_room_per_1..10`.
std::vector<RegressionRow> parse_regression_csv(const std::string& text);
std::string regression_csv(const std::vector<RegressionRow>& rows);
/// Header `filename,prediction`, values GOOD or DEFECT.
std::vector<BinaryRow> parse_binary_csv(const std::string& text);
std::string binary_csv(const std::vector<BinaryRow>& rows);

/// Truth row for one building in the regression CSV layout.
RegressionRow truth_row(const BuildingMeta& meta);

}  // namespace brepforge::mltasks
