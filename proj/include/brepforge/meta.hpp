#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace brepforge {

inline constexpr int kMaxStoreys = 10;

struct RoomDims {
  double width = 0;  // m, along x
  double depth = 0;  // m, along y
  friend bool operator==(const RoomDims&, const RoomDims&) = default;
};

struct OpeningMeta {
  int storey = 1;  // 1 = ground floor
  std::string kind;
  std::string orientation;
  double width = 0;
  double sill = 0;
  double height = 0;
  friend bool operator==(const OpeningMeta&, const OpeningMeta&) = default;
};

struct BuildingMeta {
  std::string id;
  std::uint64_t seed = 0;
  int storey_count = 0;
  int room_total = 0;
  std::array<int, kMaxStoreys> room_per_floor{};
  /// Grafted rooms per storey, bottom to top.
  std::vector<std::vector<RoomDims>> rooms;
  std::vector<OpeningMeta> openings;
  double avg_room_area = 0;
  /// Ground-floor plan area, m^2.
  double footprint_area = 0;
  friend bool operator==(const BuildingMeta&, const BuildingMeta&) = default;
};

}  // namespace brepforge
