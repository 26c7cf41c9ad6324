#include "brepforge/grammar.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "brepforge/error.hpp"

namespace brepforge::grammar {

using geom2d::Point2;
using geom2d::VertexKind;

namespace {

Coord edge_length(const Point2& a, const Point2& b) { return std::abs(b.x - a.x) + std::abs(b.y - a.y); }

Point2 unit_towards(const Point2& from, const Point2& to) {
  return {(to.x > from.x) - (to.x < from.x), (to.y > from.y) - (to.y < from.y)};
}

Rect rect_of(const Point2& p, const Point2& q) {
  return {{std::min(p.x, q.x), std::min(p.y, q.y)}, {std::max(p.x, q.x), std::max(p.y, q.y)}};
}

Coord draw_side(SeededRng& rng, Coord lo, Coord hi) {
  return lo + static_cast<Coord>(rng.bounded(static_cast<std::uint32_t>(hi - lo + 1)));
}

Coord overlap_1d(Coord a0, Coord a1, Coord b0, Coord b1) {
  return std::max<Coord>(0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

void GrammarConfig::validate() const {
  if (core_tube.width() <= 0 || core_tube.height() <= 0)
    throw Error(ErrorKind::Config, "core tube must have positive size");
  if (room_side_min <= 0 || room_side_min > room_side_max)
    throw Error(ErrorKind::Config, "room side range must satisfy 0 < min <= max");
  if (max_rooms < 2 || max_rooms > 10) throw Error(ErrorKind::Config, "max_rooms must lie in [2, 10]");
  if (retry_budget < 1) throw Error(ErrorKind::Config, "retry_budget must be positive");
  if (notch_gap < 0 || min_shared_wall < 0) throw Error(ErrorKind::Config, "negative length");
}

Rect yin_rect(const Footprint& f, std::size_t v, Coord side_prev, Coord side_next) {
  const Point2& p = f[v];
  const Point2 dp = unit_towards(p, f.prev(v));
  const Point2 dn = unit_towards(p, f.next(v));
  const Point2 far{p.x + dp.x * side_prev + dn.x * side_next, p.y + dp.y * side_prev + dn.y * side_next};
  return rect_of(p, far);
}

Rect yang_rect(const Footprint& f, std::size_t v, YangAnchor anchor, Coord along, Coord out) {
  const Point2& p = f[v];
  const Point2& prev = f.prev(v);
  const Point2& next = f.next(v);
  // The chosen edge runs from p to w; its outward normal is the right-hand
  // normal of the edge traversed in loop order.
  const bool incoming = edge_length(prev, p) >= edge_length(p, next);
  const Point2& w = incoming ? prev : next;
  const Point2 t = unit_towards(p, w);
  const Point2 dir = incoming ? unit_towards(prev, p) : unit_towards(p, next);
  const Point2 normal{dir.y, -dir.x};

  Point2 s0, s1;
  if (anchor == YangAnchor::AdjacentVertex) {
    s0 = p;
    s1 = {p.x + t.x * along, p.y + t.y * along};
  } else {
    // Grid-floored midpoint, then towards p.
    const Point2 m{p.x + t.x * (edge_length(p, w) / 2), p.y + t.y * (edge_length(p, w) / 2)};
    s0 = m;
    s1 = {m.x - t.x * along, m.y - t.y * along};
  }
  const Point2 far{s1.x + normal.x * out, s1.y + normal.y * out};
  return rect_of(s0, far);
}

Rect apply_yin(const Footprint& f, std::size_t v, SeededRng& rng, const GrammarConfig& cfg) {
  if (geom2d::classify_vertex(f, v) != VertexKind::Concave)
    throw Error(ErrorKind::ProductionInfeasible, "yin production needs a concave vertex");
  const Coord cap_prev = std::min(cfg.room_side_max, edge_length(f.prev(v), f[v]));
  const Coord cap_next = std::min(cfg.room_side_max, edge_length(f[v], f.next(v)));
  if (cap_prev < cfg.room_side_min || cap_next < cfg.room_side_min)
    throw Error(ErrorKind::ProductionInfeasible,
                "adjacent edges too short at vertex " + std::to_string(v));
  const Coord a = draw_side(rng, cfg.room_side_min, cap_prev);
  const Coord b = draw_side(rng, cfg.room_side_min, cap_next);
  return yin_rect(f, v, a, b);
}

Rect apply_yang(const Footprint& f, std::size_t v, SeededRng& rng, const GrammarConfig& cfg) {
  if (geom2d::classify_vertex(f, v) != VertexKind::Convex)
    throw Error(ErrorKind::ProductionInfeasible, "yang production needs a convex vertex");
  const auto anchor = rng.bounded(2) == 0 ? YangAnchor::AdjacentVertex : YangAnchor::EdgeMidpoint;
  const Coord along = draw_side(rng, cfg.room_side_min, cfg.room_side_max);
  const Coord out = draw_side(rng, cfg.room_side_min, cfg.room_side_max);
  return yang_rect(f, v, anchor, along, out);
}

Coord longest_shared_wall(const Rect& r, const std::vector<Rect>& existing) {
  Coord best = 0;
  for (const Rect& e : existing) {
    Coord s = 0;
    if (r.max.x == e.min.x || r.min.x == e.max.x) s = overlap_1d(r.min.y, r.max.y, e.min.y, e.max.y);
    if (r.max.y == e.min.y || r.min.y == e.max.y)
      s = std::max(s, overlap_1d(r.min.x, r.max.x, e.min.x, e.max.x));
    best = std::max(best, s);
  }
  return best;
}

bool has_clearance(const Footprint& f, Coord notch_gap) {
  const Coord radius = (notch_gap + 1) / 2;
  if (radius <= 0) return true;
  const ortho::Region r = f.region();
  const ortho::Region grown = r.dilate(radius);
  if (!(grown.erode(radius) == r)) return false;
  // A neck narrower than the clearance that opens onto a wide pocket survives
  // the closing but seals the pocket once the plan is grown.
  try {
    geom2d::footprint_of(grown);
  } catch (const Error&) {
    return false;
  }
  return true;
}

GrowthTrace grow(const GrammarConfig& cfg, SeededRng& rng) {
  cfg.validate();
  GrowthTrace trace;
  trace.core = cfg.core_tube;
  Footprint current = Footprint::from_rect(cfg.core_tube);
  std::vector<Rect> placed{cfg.core_tube};

  while (static_cast<int>(trace.rooms.size()) < cfg.max_rooms) {
    bool grafted = false;
    for (int attempt = 0; attempt < cfg.retry_budget && !grafted; ++attempt) {
      const auto v = static_cast<std::size_t>(rng.bounded(static_cast<std::uint32_t>(current.size())));
      Rect room;
      try {
        room = geom2d::classify_vertex(current, v) == VertexKind::Concave ? apply_yin(current, v, rng, cfg)
                                                                          : apply_yang(current, v, rng, cfg);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ProductionInfeasible) throw;
        ++trace.failed_attempts;
        continue;
      }
      if (geom2d::overlaps(current, room) || longest_shared_wall(room, placed) < cfg.min_shared_wall) {
        ++trace.failed_attempts;
        continue;
      }
      Footprint next;
      try {
        next = geom2d::clean(geom2d::union_rect(current, room));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Conflict && e.kind() != ErrorKind::Collision) throw;
        ++trace.failed_attempts;
        continue;
      }
      // Rooms must keep tiling the plan, so a union that still needs notch
      // filling or leaves a narrow exterior gap is treated as a conflict.
      if (geom2d::fill_notches(next, cfg.notch_gap) != next || !has_clearance(next, cfg.notch_gap)) {
        ++trace.failed_attempts;
        continue;
      }
      current = std::move(next);
      placed.push_back(room);
      trace.rooms.push_back(room);
      trace.snapshots.push_back(current);
      grafted = true;
    }
    if (!grafted) {
      trace.terminated_by = Termination::Collision;
      break;
    }
  }
  if (trace.rooms.size() < 2)
    throw Error(ErrorKind::GrowthFailed, "fewer than 2 snapshots (" + std::to_string(trace.rooms.size()) + ")");
  return trace;
}

}  // namespace brepforge::grammar
