#pragma once

// One storey plan: walls, room graph, doors and windows.
//
// Plan geometry stays on the 0.1 m grid. Opening offsets and sizes are in
// millimetres because centered openings land on half-steps.

#include <array>
#include <cstdint>
#include <vector>

#include "brepforge/geom2d.hpp"

namespace brepforge::storey {

using geom2d::Coord;
using geom2d::Footprint;
using geom2d::Point2;
using geom2d::Rect;
using Millis = std::int64_t;

inline constexpr Millis kMmPerStep = 100;
inline constexpr Millis to_mm(Coord steps) { return steps * kMmPerStep; }

enum class WallAxis { X, Y };
enum class WallKind { Exterior, Interior };
enum class Orientation { N, E, S, W, None };

const char* to_string(Orientation o);

struct WallSegment {
  WallAxis axis = WallAxis::X;
  /// Centerline endpoints, a < b along the axis.
  Point2 a;
  Point2 b;
  Millis thickness = 200;
  WallKind kind = WallKind::Exterior;
  Orientation orientation = Orientation::None;
  /// Adjacent room ids: 0 is the core, grafted rooms are 1..n.
  std::vector<int> rooms;

  Coord length() const { return (b.x - a.x) + (b.y - a.y); }
  friend bool operator==(const WallSegment&, const WallSegment&) = default;
};

enum class OpeningKind { Door, Window, Entrance };

const char* to_string(OpeningKind k);

struct Opening {
  std::size_t wall = 0;
  OpeningKind kind = OpeningKind::Window;
  /// Distance from the wall's `a` end to the near jamb.
  Millis offset = 0;
  Millis width = 0;
  Millis sill = 0;
  Millis height = 0;
  friend bool operator==(const Opening&, const Opening&) = default;
};

struct WindowType {
  Millis width;
  Millis height;
  Millis sill;
};

struct StoreyConfig {
  Millis wall_thickness = 200;
  Millis storey_height = 3000;
  Millis door_width = 900;
  Millis door_height = 2100;
  /// Interior walls shorter than this carry no door.
  Coord min_door_wall = 13;
  Coord min_window_wall = 12;
  /// Lower bounds of the second and third length bins.
  std::array<Coord, 2> window_bins{30, 50};
  std::array<WindowType, 3> ns_windows{{{900, 1400, 900}, {1800, 1500, 900}, {2400, 1500, 900}}};
  std::array<WindowType, 3> ew_windows{{{600, 1200, 1000}, {900, 1200, 1000}, {1200, 1200, 1000}}};
  /// East/west windows start this far from the southern end of the wall.
  Millis ew_south_offset = 300;
};

struct StoreyPlan {
  Footprint footprint;
  std::vector<Rect> rooms;
  Rect core;
  std::vector<WallSegment> walls;
  std::vector<Opening> openings;
  Millis storey_height = 3000;

  /// Rect of room id (0 = core).
  const Rect& room_rect(int id) const { return id == 0 ? core : rooms[static_cast<std::size_t>(id - 1)]; }
  int room_count() const { return static_cast<int>(rooms.size()); }
};

/// Walls of a tiled plan, emitted per rectangle (core first) and side
/// (S, E, N, W). Exterior walls are the boundary pieces of each side;
/// interior walls are emitted once, from the lower room id. Throws
/// InconsistentPlan when the rectangles do not tile the snapshot.
std::vector<WallSegment> build_walls(const Footprint& snapshot, const std::vector<Rect>& rooms, const Rect& core,
                                     Millis thickness);

/// Room id of the room owning an exterior wall.
int wall_room(const WallSegment& w);

/// One centered door per edge of the breadth-first spanning tree rooted at
/// the core. Throws UnreachableRoom when some room has no path to the core.
std::vector<Opening> place_doors(const StoreyPlan& plan, const StoreyConfig& cfg);

/// One window per exterior wall long enough, sized by orientation group and
/// wall-length bin.
std::vector<Opening> generate_windows(const StoreyPlan& plan, const StoreyConfig& cfg);

/// Per-room window pruning. Doors and entrances pass through untouched.
std::vector<Opening> prune_windows(const StoreyPlan& plan, const std::vector<Opening>& openings);

/// Walls, doors, generated and pruned windows for one snapshot.
StoreyPlan make_storey(const Footprint& snapshot, const std::vector<Rect>& rooms, const Rect& core,
                       const StoreyConfig& cfg);

}  // namespace brepforge::storey
