#pragma once

// Seeded plan-skeleton grammar.
//
// Starting from the core tube, each step picks a footprint vertex uniformly,
// grafts one rectangle with the concave-corner (yin) or convex-corner (yang)
// production, and unions it into the footprint. Growth stops at the room cap
// or after `retry_budget` consecutive failed productions.

#include <vector>

#include "brepforge/geom2d.hpp"
#include "brepforge/rng.hpp"

namespace brepforge::grammar {

using geom2d::Coord;
using geom2d::Footprint;
using geom2d::Rect;

struct GrammarConfig {
  Rect core_tube{{0, 0}, {40, 40}};
  Coord room_side_min = 24;
  Coord room_side_max = 60;
  int max_rooms = 10;
  Coord notch_gap = 5;
  int retry_budget = 4;
  /// A new room must share at least this much wall with the core or one room.
  Coord min_shared_wall = 13;

  /// Throws Error(Config) when an invariant is violated.
  void validate() const;
};

enum class Termination { Cap, Collision };

struct GrowthTrace {
  Rect core;
  /// snapshots[k] = core ∪ rooms[0..k].
  std::vector<Footprint> snapshots;
  std::vector<Rect> rooms;
  Termination terminated_by = Termination::Cap;
  /// Failed production attempts over the whole run.
  int failed_attempts = 0;

  friend bool operator==(const GrowthTrace&, const GrowthTrace&) = default;
};

enum class YangAnchor { AdjacentVertex, EdgeMidpoint };

/// Rectangle filling the exterior quadrant of concave vertex v, with sides
/// along the edge to the previous vertex and the edge to the next vertex.
Rect yin_rect(const Footprint& f, std::size_t v, Coord side_prev, Coord side_next);

/// Rectangle projected outward from the longer edge at convex vertex v (ties
/// pick the incoming edge).
Rect yang_rect(const Footprint& f, std::size_t v, YangAnchor anchor, Coord along, Coord out);

/// Concave-corner production. Sides are drawn on the grid from
/// [room_side_min, min(room_side_max, adjacent edge)]; throws
/// ProductionInfeasible when an adjacent edge is shorter than room_side_min.
Rect apply_yin(const Footprint& f, std::size_t v, SeededRng& rng, const GrammarConfig& cfg);

/// Convex-corner production: binary anchor choice, then both sides from the
/// room side range.
Rect apply_yang(const Footprint& f, std::size_t v, SeededRng& rng, const GrammarConfig& cfg);

/// Longest boundary segment shared by `r` and any of `existing`.
Coord longest_shared_wall(const Rect& r, const std::vector<Rect>& existing);

/// True when closing the footprint with radius ceil(notch_gap / 2) leaves it
/// unchanged and growing it by that radius still gives one simple loop, i.e.
/// no exterior slit, gap or pocket neck is narrower than the clearance.
bool has_clearance(const Footprint& f, Coord notch_gap);

GrowthTrace grow(const GrammarConfig& cfg, SeededRng& rng);

}  // namespace brepforge::grammar
