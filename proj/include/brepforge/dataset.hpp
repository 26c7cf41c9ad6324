#pragma once

// Post-processing filters, per-building export, the dataset META aggregate
// (JSON, NPY, discard log) and distribution statistics.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "brepforge/assembly.hpp"
#include "brepforge/brep.hpp"
#include "brepforge/meta.hpp"

namespace brepforge::dataset {

struct FilterConfig {
  double min_room_area = 8.0;   // m^2
  double max_room_area = 80.0;  // m^2
  double min_room_side = 2.0;   // m
  double max_aspect_ratio = 4.0;

  void validate() const;
};

struct RoomViolation {
  int storey = 1;
  std::size_t room = 0;
  std::string reason;
};

struct RoomCheck {
  bool ok = true;
  std::vector<RoomViolation> violations;
};

/// Checks every listed room of every storey against the filter bounds.
RoomCheck check_rooms(const BuildingMeta& meta, const FilterConfig& cfg);

struct SolidCheck {
  bool ok = false;
  std::string diagnostic;
};

/// Passes iff the solid has faces and is watertight.
SolidCheck check_solid(const brep::BRepSolid& solid);

enum class DiscardReason { GrowthFailed, BooleanFailure, RoomFilter, UnreachableRoom };

const char* to_string(DiscardReason r);

struct Discard {
  std::uint64_t seed = 0;
  DiscardReason reason = DiscardReason::GrowthFailed;
  friend bool operator==(const Discard&, const Discard&) = default;
};

struct DatasetMeta {
  std::vector<BuildingMeta> records;
  std::vector<Discard> discard_log;
};

/// Plan data carried next to the solid so that meta values can be recomputed
/// from the B-Rep file alone.
struct PlanRecord {
  geom2d::Rect core;
  /// Per storey, bottom to top.
  std::vector<geom2d::Footprint> footprints;
  std::vector<std::vector<geom2d::Rect>> rooms;
  friend bool operator==(const PlanRecord&, const PlanRecord&) = default;
};

struct BrepFile {
  std::string id;
  brep::BRepSolid solid;
  PlanRecord plan;
};

PlanRecord plan_record(const assembly::Building& b);

std::string brep_json(const std::string& id, const brep::BRepSolid& solid, const PlanRecord& plan);
std::string brep_json(const assembly::Building& b);
/// Throws Parse on malformed input.
BrepFile parse_brep_json(const std::string& text);

std::string meta_json(const BuildingMeta& meta);
BuildingMeta parse_meta_json(const std::string& text);

/// Values recomputed from a B-Rep file: storey_count, room_total and
/// footprint_area.
struct Recomputed {
  int storey_count = 0;
  int room_total = 0;
  double footprint_area = 0;
};

Recomputed recompute(const PlanRecord& plan);

/// Writes `<id>.brep.json`, `<id>.meta.json` and optionally `<id>.obj`.
/// Throws Io with the failing path.
void export_building(const assembly::Building& b, const std::filesystem::path& dir, bool with_obj);

inline constexpr std::size_t kMetaColumns = 14;

/// Row-major N x 14 matrix: storey_count, room_total, avg_room_area,
/// footprint_area, room_per_floor 1..10.
std::vector<double> meta_matrix(const DatasetMeta& ds);

/// NPY 1.0 bytes for a little-endian float64 C-order matrix.
std::string npy_bytes(const std::vector<double>& values, std::size_t rows, std::size_t cols);

struct NpyMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
};

/// Reads NPY 1.0 '<f8' two-dimensional C-order data; throws Parse otherwise.
NpyMatrix parse_npy(const std::string& bytes);

/// Throws EmptyDataset when there are no records.
void write_meta_npy(const DatasetMeta& ds, const std::filesystem::path& path);

std::string dataset_meta_json(const DatasetMeta& ds);
DatasetMeta parse_dataset_meta_json(const std::string& text);
std::string discards_csv(const DatasetMeta& ds);

struct Histogram {
  double bin_width = 0;
  /// Bin lower edge -> count.
  std::map<double, int> bins;
  int total() const;
  /// Lower edge of the fullest bin; the lowest edge wins ties.
  double mode() const;
};

struct Stats {
  std::map<int, int> storeys;  // 2..10, zero-filled
  Histogram room_area;
  Histogram footprint_area;
  int records = 0;
  int storey_mode() const;
};

/// Room areas are taken over distinct rooms, which are exactly the ground
/// storey's rooms. Throws EmptyDataset when there are no records.
Stats stats(const DatasetMeta& ds, double room_bin = 5.0, double footprint_bin = 25.0);

std::string stats_text(const Stats& s);
std::string stats_csv(const Stats& s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& data);

}  // namespace brepforge::dataset
