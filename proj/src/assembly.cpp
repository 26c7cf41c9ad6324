#include "brepforge/assembly.hpp"

#include <algorithm>
#include <limits>

#include "brepforge/error.hpp"

namespace brepforge::assembly {

using brep::Box;
using brep::BRepSolid;
using brep::IVec3;
using geom2d::Coord;
using geom2d::Rect;
using storey::Opening;
using storey::OpeningKind;
using storey::StoreyPlan;
using storey::to_mm;
using storey::WallAxis;
using storey::WallKind;
using storey::WallSegment;

namespace {

ortho::Region footprint_mm(const geom2d::Footprint& f) {
  ortho::Loop l;
  for (const auto& p : f.vertices) l.push_back({to_mm(p.x), to_mm(p.y)});
  const ortho::Loop loops[1] = {l};
  return ortho::Region::from_loops(loops);
}

ortho::Loop single_loop(const ortho::Region& r) {
  std::vector<ortho::Loop> loops = r.boundary();
  if (loops.size() != 1) throw Error(ErrorKind::AssemblyInconsistency, "offset footprint is not a single loop");
  return std::move(loops.front());
}

ortho::Loop cw_rect(Millis x0, Millis y0, Millis x1, Millis y1) { return {{x0, y0}, {x0, y1}, {x1, y1}, {x1, y0}}; }

Millis half_wall(const BuildingConfig& cfg) { return cfg.storey.wall_thickness / 2; }

}  // namespace

void BuildingConfig::validate() const {
  const Millis t = storey.wall_thickness;
  if (t <= 0 || t % 2 != 0) throw Error(ErrorKind::Config, "wall_thickness must be a positive even number of mm");
  if (slab_thickness <= 0 || slab_thickness >= storey.storey_height)
    throw Error(ErrorKind::Config, "slab_thickness must lie in (0, storey_height)");
  if (ground_offset <= 0 || entrance_min_wall <= 0 || entrance_width <= 0 || entrance_height <= 0)
    throw Error(ErrorKind::Config, "entrance and ground settings must be positive");
  if (entrance_height >= storey.storey_height - slab_thickness ||
      storey.door_height >= storey.storey_height - slab_thickness)
    throw Error(ErrorKind::Config, "openings must be lower than the wall height");
}

std::vector<StoreyInput> order_storeys(const grammar::GrowthTrace& trace) {
  const std::size_t s = trace.snapshots.size();
  if (s < 2) throw Error(ErrorKind::GrowthFailed, "fewer than 2 snapshots");
  std::vector<StoreyInput> out;
  for (std::size_t k = 1; k <= s; ++k) {
    const std::size_t snap = s - k;  // 0-based index of snapshot S - k + 1
    out.push_back({trace.snapshots[snap],
                   std::vector<Rect>(trace.rooms.begin(), trace.rooms.begin() + static_cast<std::ptrdiff_t>(snap + 1))});
  }
  return out;
}

BRepSolid ground_slab(const grammar::GrowthTrace& trace, const BuildingConfig& cfg) {
  const ortho::IRect b = footprint_mm(trace.snapshots.back()).bounds();
  const Millis d = cfg.ground_offset;
  return brep::extrude_prism({{{b.x0 - d, b.y0 - d}, {b.x1 + d, b.y0 - d}, {b.x1 + d, b.y1 + d}, {b.x0 - d, b.y1 + d}}, {}},
                             -cfg.slab_thickness, 0);
}

Box opening_box(const StoreyPlan& plan, const Opening& o, Millis z, const BuildingConfig& cfg) {
  const WallSegment& w = plan.walls.at(o.wall);
  const Millis h = half_wall(cfg);
  Box b;
  if (w.axis == WallAxis::X) {
    b.min = IVec3(to_mm(w.a.x) + o.offset, to_mm(w.a.y) - h, z + o.sill);
    b.max = IVec3(to_mm(w.a.x) + o.offset + o.width, to_mm(w.a.y) + h, z + o.sill + o.height);
  } else {
    b.min = IVec3(to_mm(w.a.x) - h, to_mm(w.a.y) + o.offset, z + o.sill);
    b.max = IVec3(to_mm(w.a.x) + h, to_mm(w.a.y) + o.offset + o.width, z + o.sill + o.height);
  }
  return b;
}

BRepSolid storey_walls(const StoreyPlan& plan, Millis z, const BuildingConfig& cfg) {
  const Millis h = half_wall(cfg);
  brep::Polygon2 poly;
  poly.outer = single_loop(footprint_mm(plan.footprint).dilate(h));
  for (int id = 0; id <= plan.room_count(); ++id) {
    const Rect& r = plan.room_rect(id);
    poly.holes.push_back(cw_rect(to_mm(r.min.x) + h, to_mm(r.min.y) + h, to_mm(r.max.x) - h, to_mm(r.max.y) - h));
  }
  BRepSolid s = brep::extrude_prism(poly, z, z + plan.storey_height - cfg.slab_thickness);
  for (const Opening& o : plan.openings)
    if (o.kind == OpeningKind::Window) s = brep::cut_opening(s, opening_box(plan, o, z, cfg));
  return s;
}

BRepSolid storey_slab(const StoreyPlan& plan, Millis z, const BuildingConfig& cfg) {
  const Millis top = z + plan.storey_height;
  return brep::extrude_prism({single_loop(footprint_mm(plan.footprint).dilate(half_wall(cfg))), {}},
                             top - cfg.slab_thickness, top);
}

BRepSolid cut_atrium(const BRepSolid& slab, const Rect& core, const BuildingConfig& cfg) {
  Millis z0 = std::numeric_limits<Millis>::max(), z1 = std::numeric_limits<Millis>::min();
  for (const IVec3& v : slab.vertices) {
    z0 = std::min(z0, v[2]);
    z1 = std::max(z1, v[2]);
  }
  const Millis h = half_wall(cfg);
  const Box box{IVec3(to_mm(core.min.x) + h, to_mm(core.min.y) + h, z0),
                IVec3(to_mm(core.max.x) - h, to_mm(core.max.y) - h, z1)};
  try {
    return brep::cut_opening(slab, box);
  } catch (const Error& e) {
    throw Error(ErrorKind::AssemblyInconsistency, std::string("atrium: ") + e.what());
  }
}

Opening place_entrance(const StoreyPlan& ground, const BuildingConfig& cfg) {
  const Millis need = cfg.entrance_width + 2 * cfg.entrance_clearance;
  std::vector<std::size_t> long_walls, fitting;
  for (std::size_t i = 0; i < ground.walls.size(); ++i) {
    const WallSegment& w = ground.walls[i];
    if (w.kind != WallKind::Exterior || to_mm(w.length()) < need) continue;
    fitting.push_back(i);
    if (to_mm(w.length()) > cfg.entrance_min_wall) long_walls.push_back(i);
  }
  const std::vector<std::size_t>& candidates = long_walls.empty() ? fitting : long_walls;
  if (candidates.empty()) throw Error(ErrorKind::BooleanFailure, "no exterior wall can hold the entrance");

  // Centroid scaled by twice the area: c2 = sum(area * (x0 + x1)) / area.
  Coord area = 0, sx = 0, sy = 0;
  for (const ortho::IRect& r : ground.footprint.region().rectangles()) {
    const Coord a = (r.x1 - r.x0) * (r.y1 - r.y0);
    area += a;
    sx += a * (r.x0 + r.x1);
    sy += a * (r.y0 + r.y1);
  }
  std::size_t best = candidates.front();
  Coord best_d = std::numeric_limits<Coord>::max();
  for (std::size_t i : candidates) {
    const WallSegment& w = ground.walls[i];
    const Coord dx = area * (w.a.x + w.b.x) - sx, dy = area * (w.a.y + w.b.y) - sy;
    const Coord d = dx * dx + dy * dy;
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  const Millis len = to_mm(ground.walls[best].length());
  return {best, OpeningKind::Entrance, (len - cfg.entrance_width) / 2, cfg.entrance_width, 0, cfg.entrance_height};
}

BuildingMeta make_meta(const std::vector<StoreyPlan>& storeys, const std::string& id, std::uint64_t seed) {
  BuildingMeta m;
  m.id = id;
  m.seed = seed;
  m.storey_count = static_cast<int>(storeys.size());
  double total_area = 0;
  for (std::size_t k = 0; k < storeys.size(); ++k) {
    const StoreyPlan& p = storeys[k];
    if (k < static_cast<std::size_t>(kMaxStoreys)) m.room_per_floor[k] = p.room_count();
    m.room_total += p.room_count();
    std::vector<RoomDims> dims;
    for (const Rect& r : p.rooms) {
      dims.push_back({geom2d::to_metres(r.width()), geom2d::to_metres(r.height())});
      total_area += r.area_m2();
    }
    m.rooms.push_back(std::move(dims));
    for (const Opening& o : p.openings) {
      m.openings.push_back({static_cast<int>(k) + 1, storey::to_string(o.kind),
                            storey::to_string(p.walls[o.wall].orientation), static_cast<double>(o.width) / 1000.0,
                            static_cast<double>(o.sill) / 1000.0, static_cast<double>(o.height) / 1000.0});
    }
  }
  m.avg_room_area = m.room_total > 0 ? total_area / m.room_total : 0.0;
  m.footprint_area = storeys.empty() ? 0.0 : geom2d::polygon_area(storeys.front().footprint);
  return m;
}

Building assemble(const grammar::GrowthTrace& trace, const BuildingConfig& cfg, const std::string& id,
                  std::uint64_t seed) {
  cfg.validate();
  Building b;
  const std::vector<StoreyInput> inputs = order_storeys(trace);
  const Rect& core_rect = trace.core;
  for (const StoreyInput& in : inputs)
    b.storeys.push_back(storey::make_storey(in.footprint, in.rooms, core_rect, cfg.storey));

  StoreyPlan& ground = b.storeys.front();
  const Opening entrance = place_entrance(ground, cfg);
  std::erase_if(ground.openings,
                [&](const Opening& o) { return o.kind == OpeningKind::Window && o.wall == entrance.wall; });
  ground.openings.push_back(entrance);

  std::vector<BRepSolid> parts;
  std::vector<Box> carved;
  for (std::size_t k = 0; k < b.storeys.size(); ++k) {
    const StoreyPlan& p = b.storeys[k];
    const Millis z = static_cast<Millis>(k) * p.storey_height;
    parts.push_back(storey_walls(p, z, cfg));
    parts.push_back(cut_atrium(storey_slab(p, z, cfg), core_rect, cfg));
    for (const Opening& o : p.openings)
      if (o.kind != OpeningKind::Window) carved.push_back(opening_box(p, o, z, cfg));
  }
  parts.push_back(ground_slab(trace, cfg));
  b.solid = brep::carve(brep::merge(parts), carved);
  b.meta = make_meta(b.storeys, id, seed);
  return b;
}

}  // namespace brepforge::assembly
