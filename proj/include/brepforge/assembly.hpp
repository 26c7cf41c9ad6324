#pragma once

// Whole-building assembly: storeys stacked by the tiered-setback rule, wall
// and slab solids, atrium, ground slab, entrance, and the merged solid.

#include <string>
#include <vector>

#include "brepforge/brep.hpp"
#include "brepforge/grammar.hpp"
#include "brepforge/meta.hpp"
#include "brepforge/storey.hpp"

namespace brepforge::assembly {

using storey::Millis;

struct BuildingConfig {
  storey::StoreyConfig storey;
  Millis slab_thickness = 200;
  Millis ground_offset = 3000;
  Millis entrance_min_wall = 4000;
  Millis entrance_width = 1200;
  Millis entrance_height = 2400;
  /// Free wall left on each side of the entrance.
  Millis entrance_clearance = 200;

  void validate() const;
};

struct StoreyInput {
  geom2d::Footprint footprint;
  std::vector<geom2d::Rect> rooms;
};

struct Building {
  /// Bottom to top.
  std::vector<storey::StoreyPlan> storeys;
  brep::BRepSolid solid;
  BuildingMeta meta;
};

/// Storey k (1 = ground) uses snapshot S - k + 1. Throws GrowthFailed for
/// fewer than two snapshots.
std::vector<StoreyInput> order_storeys(const grammar::GrowthTrace& trace);

/// Bounding box of the ground footprint grown by ground_offset, one slab
/// thickness below z = 0.
brep::BRepSolid ground_slab(const grammar::GrowthTrace& trace, const BuildingConfig& cfg);

/// Wall prism of one storey (base at `z`), windows already cut.
brep::BRepSolid storey_walls(const storey::StoreyPlan& plan, Millis z, const BuildingConfig& cfg);

/// Floor slab on top of a storey, without the atrium.
brep::BRepSolid storey_slab(const storey::StoreyPlan& plan, Millis z, const BuildingConfig& cfg);

/// Opens the core rectangle, shrunk by half a wall, through a slab. Throws
/// AssemblyInconsistency when the core does not lie inside the slab.
brep::BRepSolid cut_atrium(const brep::BRepSolid& slab, const geom2d::Rect& core, const BuildingConfig& cfg);

/// Entrance on the ground storey: exterior walls longer than
/// entrance_min_wall (else all walls) that can hold the entrance with its
/// clearance; the one whose midpoint is nearest the footprint centroid wins,
/// ties by wall id. Throws BooleanFailure when no wall can hold it.
storey::Opening place_entrance(const storey::StoreyPlan& ground, const BuildingConfig& cfg);

/// Box removed from the wall solid for a door, window or entrance.
brep::Box opening_box(const storey::StoreyPlan& plan, const storey::Opening& o, Millis z, const BuildingConfig& cfg);

Building assemble(const grammar::GrowthTrace& trace, const BuildingConfig& cfg, const std::string& id,
                  std::uint64_t seed);

BuildingMeta make_meta(const std::vector<storey::StoreyPlan>& storeys, const std::string& id, std::uint64_t seed);

}  // namespace brepforge::assembly
