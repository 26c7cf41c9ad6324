#pragma once

// Rectilinear plan geometry on the 0.1 m grid.
//
// Coordinates are integers counting 0.1 m steps; conversion to metres happens
// only at the API boundary (`to_metres`, `from_metres`). All footprints are
// simple counter-clockwise loops with axis-parallel edges, so every operation
// here is exact.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "brepforge/region.hpp"

namespace brepforge::geom2d {

using Coord = std::int64_t;

/// Grid steps per metre.
inline constexpr Coord kStepsPerMetre = 10;

inline constexpr double to_metres(Coord c) { return static_cast<double>(c) / kStepsPerMetre; }
/// Rounds to the nearest grid step.
Coord from_metres(double metres);

using Point2 = ortho::IPoint;

struct Rect {
  Point2 min;
  Point2 max;

  Coord width() const { return max.x - min.x; }
  Coord height() const { return max.y - min.y; }
  /// Area in grid steps squared.
  Coord area_steps() const { return width() * height(); }
  double area_m2() const { return to_metres(width()) * to_metres(height()); }
  ortho::IRect as_irect() const { return {min.x, min.y, max.x, max.y}; }
  static Rect from_irect(const ortho::IRect& r) { return {{r.x0, r.y0}, {r.x1, r.y1}}; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Counter-clockwise outer loop of a plan.
struct Footprint {
  std::vector<Point2> vertices;

  std::size_t size() const { return vertices.size(); }
  const Point2& operator[](std::size_t i) const { return vertices[i]; }
  const Point2& prev(std::size_t i) const { return vertices[(i + size() - 1) % size()]; }
  const Point2& next(std::size_t i) const { return vertices[(i + 1) % size()]; }

  static Footprint from_rect(const Rect& r);
  ortho::Region region() const;
  friend bool operator==(const Footprint&, const Footprint&) = default;
};

enum class VertexKind { Convex, Concave };

/// Shoelace area in m^2.
double polygon_area(const Footprint& f);
/// Twice the shoelace area in grid steps squared.
Coord twice_area_steps(const Footprint& f);
Coord perimeter_steps(const Footprint& f);

VertexKind classify_vertex(const Footprint& f, std::size_t i);

/// Cleaned outer loop of f ∪ r. Throws Collision when interiors overlap and
/// Conflict when the two shapes share no boundary segment or the union is not
/// a simple loop.
Footprint union_rect(const Footprint& f, const Rect& r);

/// Removes coincident and collinear vertices and orients the loop CCW.
Footprint clean(const Footprint& f);

/// Fills small U-shaped notches: two reflex corners joined by an edge shorter
/// than `max_gap` whose flanking edges are also shorter than `max_gap`.
Footprint fill_notches(const Footprint& f, Coord max_gap);

/// True iff the interiors of f and r overlap with positive area.
bool overlaps(const Footprint& f, const Rect& r);

struct OffsetLoops {
  Footprint outer;
  Footprint inner;
};

/// Rectilinear offset by d grid steps on both sides.
OffsetLoops offset_loop(const Footprint& f, Coord d);

/// Converts a traced single-loop region back into a footprint. Throws
/// Conflict when the region is empty or not a single simple loop.
Footprint footprint_of(const ortho::Region& region);

bool point_in_footprint(const Footprint& f, Point2 p);

/// Validates the footprint invariants: >= 4 vertices, axis-parallel edges,
/// no duplicate or collinear neighbours, CCW, simple.
bool is_valid_footprint(const Footprint& f);

}  // namespace brepforge::geom2d
