#include "brepforge/storey.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <string>

#include "brepforge/error.hpp"

namespace brepforge::storey {

const char* to_string(Orientation o) {
  switch (o) {
    case Orientation::N: return "N";
    case Orientation::E: return "E";
    case Orientation::S: return "S";
    case Orientation::W: return "W";
    case Orientation::None: break;
  }
  return "none";
}

const char* to_string(OpeningKind k) {
  switch (k) {
    case OpeningKind::Door: return "door";
    case OpeningKind::Window: return "window";
    case OpeningKind::Entrance: break;
  }
  return "entrance";
}

namespace {

struct Side {
  Orientation facing;
  WallAxis axis;
  Coord line;  // fixed coordinate
  Coord lo, hi;
};

// S, E, N, W.
std::array<Side, 4> sides_of(const Rect& r) {
  return {{{Orientation::S, WallAxis::X, r.min.y, r.min.x, r.max.x},
           {Orientation::E, WallAxis::Y, r.max.x, r.min.y, r.max.y},
           {Orientation::N, WallAxis::X, r.max.y, r.min.x, r.max.x},
           {Orientation::W, WallAxis::Y, r.min.x, r.min.y, r.max.y}}};
}

Orientation opposite(Orientation o) {
  switch (o) {
    case Orientation::S: return Orientation::N;
    case Orientation::N: return Orientation::S;
    case Orientation::E: return Orientation::W;
    case Orientation::W: return Orientation::E;
    case Orientation::None: break;
  }
  return Orientation::None;
}

WallSegment make_wall(const Side& s, Coord lo, Coord hi, Millis thickness) {
  WallSegment w;
  w.axis = s.axis;
  w.thickness = thickness;
  if (s.axis == WallAxis::X) {
    w.a = {lo, s.line};
    w.b = {hi, s.line};
  } else {
    w.a = {s.line, lo};
    w.b = {s.line, hi};
  }
  return w;
}

bool is_ns(Orientation o) { return o == Orientation::N || o == Orientation::S; }

}  // namespace

std::vector<WallSegment> build_walls(const Footprint& snapshot, const std::vector<Rect>& rooms, const Rect& core,
                                     Millis thickness) {
  std::vector<Rect> rects{core};
  rects.insert(rects.end(), rooms.begin(), rooms.end());

  ortho::Region covered;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    const ortho::Region ri = ortho::Region::from_rect(rects[i].as_irect());
    if (covered.intersect(ri).area() > 0)
      throw Error(ErrorKind::InconsistentPlan, "room " + std::to_string(i) + " overlaps an earlier room");
    covered = covered.unite(ri);
  }
  if (!(covered == snapshot.region()))
    throw Error(ErrorKind::InconsistentPlan, "rooms and core do not tile the footprint");

  std::vector<WallSegment> walls;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    for (const Side& s : sides_of(rects[i])) {
      // Shared pieces along this side, keyed by start coordinate.
      std::map<Coord, std::pair<Coord, std::size_t>> shared;
      for (std::size_t j = 0; j < rects.size(); ++j) {
        if (j == i) continue;
        for (const Side& t : sides_of(rects[j])) {
          if (t.facing != opposite(s.facing) || t.line != s.line) continue;
          const Coord lo = std::max(s.lo, t.lo), hi = std::min(s.hi, t.hi);
          if (hi > lo) shared[lo] = {hi, j};
        }
      }
      Coord cursor = s.lo;
      auto emit_exterior = [&](Coord lo, Coord hi) {
        if (hi <= lo) return;
        WallSegment w = make_wall(s, lo, hi, thickness);
        w.kind = WallKind::Exterior;
        w.orientation = s.facing;
        w.rooms = {static_cast<int>(i)};
        walls.push_back(std::move(w));
      };
      for (const auto& [lo, piece] : shared) {
        const auto [hi, j] = piece;
        emit_exterior(cursor, lo);
        if (j > i) {
          WallSegment w = make_wall(s, lo, hi, thickness);
          w.kind = WallKind::Interior;
          w.orientation = Orientation::None;
          w.rooms = {static_cast<int>(i), static_cast<int>(j)};
          walls.push_back(std::move(w));
        }
        cursor = hi;
      }
      emit_exterior(cursor, s.hi);
    }
  }
  return walls;
}

int wall_room(const WallSegment& w) { return w.rooms.front(); }

std::vector<Opening> place_doors(const StoreyPlan& plan, const StoreyConfig& cfg) {
  const int n = plan.room_count() + 1;
  // best[a][b] = wall index carrying the door between rooms a and b.
  std::vector<std::vector<long>> best(static_cast<std::size_t>(n), std::vector<long>(static_cast<std::size_t>(n), -1));
  for (std::size_t k = 0; k < plan.walls.size(); ++k) {
    const WallSegment& w = plan.walls[k];
    if (w.kind != WallKind::Interior || w.length() < cfg.min_door_wall) continue;
    const auto a = static_cast<std::size_t>(w.rooms[0]), b = static_cast<std::size_t>(w.rooms[1]);
    const long cur = best[a][b];
    if (cur < 0 || plan.walls[static_cast<std::size_t>(cur)].length() < w.length()) {
      best[a][b] = best[b][a] = static_cast<long>(k);
    }
  }

  std::vector<Opening> doors;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::deque<int> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const int r = queue.front();
    queue.pop_front();
    for (int m = 0; m < n; ++m) {
      const long wk = best[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)];
      if (seen[static_cast<std::size_t>(m)] || wk < 0) continue;
      seen[static_cast<std::size_t>(m)] = true;
      queue.push_back(m);
      const WallSegment& w = plan.walls[static_cast<std::size_t>(wk)];
      doors.push_back({static_cast<std::size_t>(wk), OpeningKind::Door, (to_mm(w.length()) - cfg.door_width) / 2,
                       cfg.door_width, 0, cfg.door_height});
    }
  }
  for (int m = 0; m < n; ++m)
    if (!seen[static_cast<std::size_t>(m)])
      throw Error(ErrorKind::UnreachableRoom, "room " + std::to_string(m) + " is not reachable from the core");
  return doors;
}

std::vector<Opening> generate_windows(const StoreyPlan& plan, const StoreyConfig& cfg) {
  std::vector<Opening> out;
  for (std::size_t k = 0; k < plan.walls.size(); ++k) {
    const WallSegment& w = plan.walls[k];
    if (w.kind != WallKind::Exterior || w.length() < cfg.min_window_wall) continue;
    const std::size_t bin = w.length() < cfg.window_bins[0] ? 0 : w.length() < cfg.window_bins[1] ? 1 : 2;
    const bool ns = is_ns(w.orientation);
    const WindowType& t = ns ? cfg.ns_windows[bin] : cfg.ew_windows[bin];
    const Millis offset = ns ? (to_mm(w.length()) - t.width) / 2 : cfg.ew_south_offset;
    out.push_back({k, OpeningKind::Window, offset, t.width, t.sill, t.height});
  }
  return out;
}

std::vector<Opening> prune_windows(const StoreyPlan& plan, const std::vector<Opening>& openings) {
  std::map<int, std::vector<std::size_t>> by_room;
  for (std::size_t i = 0; i < openings.size(); ++i)
    if (openings[i].kind == OpeningKind::Window) by_room[wall_room(plan.walls[openings[i].wall])].push_back(i);

  std::vector<bool> keep(openings.size(), true);
  for (auto& [room, idx] : by_room) {
    if (idx.size() < 2 || idx.size() > 4) continue;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const Opening& x = openings[a];
      const Opening& y = openings[b];
      return x.wall != y.wall ? x.wall < y.wall : x.offset < y.offset;
    });
    // First widest and first narrowest in (wall, offset) order.
    std::size_t widest = idx.front(), narrowest = idx.front();
    for (std::size_t i : idx) {
      if (openings[i].width > openings[widest].width) widest = i;
      if (openings[i].width < openings[narrowest].width) narrowest = i;
    }
    const Millis max_span = openings[widest].width;
    if (max_span >= 3000) {
      for (std::size_t i : idx) keep[i] = i == widest;
    } else if (max_span > 1000) {
      for (std::size_t i : idx) keep[i] = i == widest || i == narrowest;
    } else if (max_span < 1000 && idx.size() > 2) {
      for (std::size_t i : idx) keep[i] = is_ns(plan.walls[openings[i].wall].orientation);
    }
  }
  std::vector<Opening> out;
  for (std::size_t i = 0; i < openings.size(); ++i)
    if (keep[i]) out.push_back(openings[i]);
  return out;
}

StoreyPlan make_storey(const Footprint& snapshot, const std::vector<Rect>& rooms, const Rect& core,
                       const StoreyConfig& cfg) {
  StoreyPlan plan;
  plan.footprint = snapshot;
  plan.rooms = rooms;
  plan.core = core;
  plan.storey_height = cfg.storey_height;
  plan.walls = build_walls(snapshot, rooms, core, cfg.wall_thickness);
  plan.openings = place_doors(plan, cfg);
  const std::vector<Opening> windows = prune_windows(plan, generate_windows(plan, cfg));
  plan.openings.insert(plan.openings.end(), windows.begin(), windows.end());
  return plan;
}

}  // namespace brepforge::storey
