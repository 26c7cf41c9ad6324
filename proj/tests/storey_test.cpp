#include "brepforge/storey.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "brepforge/error.hpp"
#include "brepforge/grammar.hpp"

namespace {

using namespace brepforge;
using namespace brepforge::storey;

const Rect kCore{{0, 0}, {40, 40}};

// Sums unit grid edges of the tiling by the pair of room ids on either side
// (-1 = outside). Independent of wall splitting.
std::map<std::pair<int, int>, Coord> edge_oracle(const std::vector<Rect>& rects) {
  auto owner = [&](Coord cx, Coord cy) {
    for (std::size_t i = 0; i < rects.size(); ++i)
      if (cx >= rects[i].min.x && cx < rects[i].max.x && cy >= rects[i].min.y && cy < rects[i].max.y)
        return static_cast<int>(i);
    return -1;
  };
  Coord x0 = 1 << 20, y0 = 1 << 20, x1 = -(1 << 20), y1 = -(1 << 20);
  for (const Rect& r : rects) {
    x0 = std::min(x0, r.min.x), y0 = std::min(y0, r.min.y);
    x1 = std::max(x1, r.max.x), y1 = std::max(y1, r.max.y);
  }
  std::map<std::pair<int, int>, Coord> out;
  for (Coord x = x0 - 1; x <= x1; ++x)
    for (Coord y = y0 - 1; y <= y1; ++y) {
      const int c = owner(x, y);
      const int right = owner(x + 1, y), up = owner(x, y + 1);
      if (c != right) ++out[{std::min(c, right), std::max(c, right)}];
      if (c != up) ++out[{std::min(c, up), std::max(c, up)}];
    }
  return out;
}

std::map<std::pair<int, int>, Coord> wall_totals(const std::vector<WallSegment>& walls) {
  std::map<std::pair<int, int>, Coord> out;
  for (const WallSegment& w : walls) {
    if (w.kind == WallKind::Exterior)
      out[{-1, w.rooms[0]}] += w.length();
    else
      out[{w.rooms[0], w.rooms[1]}] += w.length();
  }
  return out;
}

TEST(BuildWalls, CoreOnly) {
  const auto walls = build_walls(Footprint::from_rect(kCore), {}, kCore, 200);
  ASSERT_EQ(walls.size(), 4u);
  std::set<Orientation> seen;
  for (const auto& w : walls) {
    EXPECT_EQ(w.kind, WallKind::Exterior);
    EXPECT_EQ(w.length(), 40);
    seen.insert(w.orientation);
  }
  EXPECT_EQ(seen, (std::set<Orientation>{Orientation::N, Orientation::E, Orientation::S, Orientation::W}));
}

TEST(BuildWalls, CorePlusSideRoom) {
  const std::vector<Rect> rooms{{{40, 0}, {80, 40}}};
  const auto walls = build_walls(Footprint::from_rect({{0, 0}, {80, 40}}), rooms, kCore, 200);
  int ext = 0, inner = 0;
  for (const auto& w : walls) {
    if (w.kind == WallKind::Exterior) {
      ++ext;
      EXPECT_EQ(w.rooms.size(), 1u);
      EXPECT_NE(w.orientation, Orientation::None);
    } else {
      ++inner;
      EXPECT_EQ(w.length(), 40);
      EXPECT_EQ(w.rooms, (std::vector<int>{0, 1}));
      EXPECT_EQ(w.orientation, Orientation::None);
    }
  }
  EXPECT_EQ(ext, 6);
  EXPECT_EQ(inner, 1);
  EXPECT_EQ(wall_totals(walls), edge_oracle({kCore, rooms[0]}));
}

TEST(BuildWalls, LShapedTwoRoomPlan) {
  // Core plus a room on top of its left half: L with 6 vertices.
  const std::vector<Rect> rooms{{{0, 40}, {20, 70}}};
  const Footprint l{{{0, 0}, {40, 0}, {40, 40}, {20, 40}, {20, 70}, {0, 70}}};
  const auto walls = build_walls(l, rooms, kCore, 200);
  int ext = 0;
  for (const auto& w : walls) ext += w.kind == WallKind::Exterior;
  // The west side spans both rectangles, so it is split once more than the
  // footprint's edge count.
  EXPECT_EQ(ext, static_cast<int>(l.size()) + 1);
  EXPECT_EQ(wall_totals(walls), edge_oracle({kCore, rooms[0]}));
}

TEST(BuildWalls, RejectsNonTiling) {
  EXPECT_THROW(build_walls(Footprint::from_rect({{0, 0}, {80, 40}}), {{{40, 0}, {70, 40}}}, kCore, 200), Error);
  EXPECT_THROW(build_walls(Footprint::from_rect({{0, 0}, {80, 40}}), {{{30, 0}, {80, 40}}}, kCore, 200), Error);
}

TEST(BuildWalls, MatchesEdgeOracleOnGrammarPlans) {
  const grammar::GrammarConfig cfg;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SeededRng rng(seed, seed);
    grammar::GrowthTrace t;
    try {
      t = grammar::grow(cfg, rng);
    } catch (const Error&) {
      continue;
    }
    std::vector<Rect> rects{cfg.core_tube};
    rects.insert(rects.end(), t.rooms.begin(), t.rooms.end());
    const auto walls = build_walls(t.snapshots.back(), t.rooms, cfg.core_tube, 200);
    EXPECT_EQ(wall_totals(walls), edge_oracle(rects)) << "seed " << seed;
    Coord ext = 0;
    for (const auto& w : walls) {
      EXPECT_GE(w.length(), 1);
      if (w.kind == WallKind::Exterior) ext += w.length();
    }
    EXPECT_EQ(ext, geom2d::perimeter_steps(t.snapshots.back()));
  }
}

StoreyPlan plan_of(const Footprint& f, const std::vector<Rect>& rooms) {
  StoreyPlan p;
  p.footprint = f;
  p.rooms = rooms;
  p.core = kCore;
  p.walls = build_walls(f, rooms, kCore, 200);
  return p;
}

TEST(PlaceDoors, SingleRoom) {
  const StoreyPlan p = plan_of(Footprint::from_rect({{0, 0}, {80, 40}}), {{{40, 0}, {80, 40}}});
  const auto doors = place_doors(p, StoreyConfig{});
  ASSERT_EQ(doors.size(), 1u);
  const WallSegment& w = p.walls[doors[0].wall];
  EXPECT_EQ(w.kind, WallKind::Interior);
  EXPECT_EQ(doors[0].offset, (4000 - 900) / 2);
  EXPECT_EQ(doors[0].sill, 0);
  EXPECT_EQ(doors[0].width, 900);
  EXPECT_EQ(doors[0].height, 2100);
}

TEST(PlaceDoors, ChainFollowsBfsTree) {
  // core | r1 | r2 | r3 in a row.
  const std::vector<Rect> rooms{{{40, 0}, {80, 40}}, {{80, 0}, {120, 40}}, {{120, 0}, {160, 40}}};
  const StoreyPlan p = plan_of(Footprint::from_rect({{0, 0}, {160, 40}}), rooms);
  const auto doors = place_doors(p, StoreyConfig{});
  ASSERT_EQ(doors.size(), 3u);
  // Hand-built adjacency: 0-1, 1-2, 2-3; BFS from 0 visits 1, 2, 3 in turn.
  const std::vector<std::vector<int>> expect{{0, 1}, {1, 2}, {2, 3}};
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(p.walls[doors[i].wall].rooms, expect[i]);
}

TEST(PlaceDoors, OneIncomingDoorPerRoom) {
  // r1 east of the core, r2 north spanning both: r2 touches core and r1.
  const std::vector<Rect> rooms{{{40, 0}, {80, 40}}, {{0, 40}, {80, 70}}};
  const StoreyPlan p = plan_of(Footprint::from_rect({{0, 0}, {80, 70}}), rooms);
  const auto doors = place_doors(p, StoreyConfig{});
  ASSERT_EQ(doors.size(), 2u);
  std::map<int, int> incoming;
  for (const auto& d : doors) {
    const auto& r = p.walls[d.wall].rooms;
    EXPECT_EQ(r[0], 0);  // both rooms hang off the core
    ++incoming[r[1]];
  }
  EXPECT_EQ(incoming, (std::map<int, int>{{1, 1}, {2, 1}}));
}

TEST(PlaceDoors, UnreachableRoom) {
  // r2 touches r1 only along 1.0 m, too short for a door.
  const std::vector<Rect> rooms{{{40, 0}, {80, 40}}, {{70, 40}, {100, 70}}};
  const Footprint f{{{0, 0}, {80, 0}, {80, 40}, {100, 40}, {100, 70}, {70, 70}, {70, 40}, {0, 40}}};
  const StoreyPlan p = plan_of(f, rooms);
  try {
    place_doors(p, StoreyConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnreachableRoom);
  }
}

// A single exterior wall of the given length and orientation.
StoreyPlan one_wall(Coord length, Orientation o) {
  StoreyPlan p;
  WallSegment w;
  w.kind = WallKind::Exterior;
  w.orientation = o;
  w.axis = (o == Orientation::N || o == Orientation::S) ? WallAxis::X : WallAxis::Y;
  w.a = {0, 0};
  w.b = w.axis == WallAxis::X ? Point2{length, 0} : Point2{0, length};
  w.rooms = {1};
  p.walls.push_back(w);
  return p;
}

TEST(GenerateWindows, TableLookups) {
  const StoreyConfig cfg;
  auto s = generate_windows(one_wall(40, Orientation::S), cfg);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].width, 1800);
  EXPECT_EQ(s[0].height, 1500);
  EXPECT_EQ(s[0].sill, 900);
  EXPECT_EQ(s[0].offset, 1100);

  auto w = generate_windows(one_wall(20, Orientation::W), cfg);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].width, 600);
  EXPECT_EQ(w[0].height, 1200);
  EXPECT_EQ(w[0].sill, 1000);
  EXPECT_EQ(w[0].offset, 300);

  EXPECT_TRUE(generate_windows(one_wall(10, Orientation::N), cfg).empty());
  EXPECT_TRUE(generate_windows(one_wall(10, Orientation::E), cfg).empty());
}

TEST(GenerateWindows, NorthSouthAtLeastAsLargeAsEastWest) {
  const StoreyConfig cfg;
  for (Coord len = 12; len <= 80; ++len) {
    const auto ns = generate_windows(one_wall(len, Orientation::N), cfg);
    const auto ew = generate_windows(one_wall(len, Orientation::E), cfg);
    ASSERT_EQ(ns.size(), 1u);
    ASSERT_EQ(ew.size(), 1u);
    EXPECT_GE(ns[0].width * ns[0].height, ew[0].width * ew[0].height);
    for (const auto& o : {ns[0], ew[0]}) {
      EXPECT_GE(o.offset, 0);
      EXPECT_LE(o.offset + o.width, to_mm(len));
      EXPECT_LE(o.sill + o.height, cfg.storey_height);
    }
  }
}

// One room with one exterior wall per window; facades and widths given.
std::pair<StoreyPlan, std::vector<Opening>> room_with(const std::vector<std::pair<Orientation, Millis>>& spec) {
  StoreyPlan p;
  std::vector<Opening> ops;
  for (const auto& [o, width] : spec) {
    StoreyPlan w = one_wall(80, o);
    ops.push_back({p.walls.size(), OpeningKind::Window, 100, width, 900, 1200});
    p.walls.push_back(w.walls[0]);
  }
  return {p, ops};
}

std::vector<Millis> widths(const std::vector<Opening>& ops) {
  std::vector<Millis> out;
  for (const auto& o : ops) out.push_back(o.width);
  return out;
}

TEST(PruneWindows, RuleA) {
  auto [p, ops] = room_with({{Orientation::S, 3200}, {Orientation::E, 1000}, {Orientation::N, 800}});
  EXPECT_EQ(widths(prune_windows(p, ops)), (std::vector<Millis>{3200}));
}

TEST(PruneWindows, RuleB) {
  auto [p, ops] = room_with({{Orientation::S, 2400}, {Orientation::E, 1800}, {Orientation::N, 1200}});
  EXPECT_EQ(widths(prune_windows(p, ops)), (std::vector<Millis>{2400, 1200}));
}

TEST(PruneWindows, RuleC) {
  auto [p, ops] = room_with({{Orientation::W, 900}, {Orientation::N, 800}, {Orientation::S, 700}});
  const auto kept = prune_windows(p, ops);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(p.walls[kept[0].wall].orientation, Orientation::N);
  EXPECT_EQ(p.walls[kept[1].wall].orientation, Orientation::S);
}

TEST(PruneWindows, OutsideTwoToFourUnchanged) {
  auto [p1, one] = room_with({{Orientation::S, 3200}});
  EXPECT_EQ(prune_windows(p1, one), one);
  auto [p5, five] = room_with({{Orientation::S, 3200},
                               {Orientation::E, 900},
                               {Orientation::N, 800},
                               {Orientation::W, 600},
                               {Orientation::S, 700}});
  EXPECT_EQ(prune_windows(p5, five), five);
}

TEST(PruneWindows, TiesResolvedByWallThenOffset) {
  auto [p, ops] = room_with({{Orientation::S, 1800}, {Orientation::N, 1800}, {Orientation::E, 1200}, {Orientation::W, 1200}});
  const auto kept = prune_windows(p, ops);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].wall, 0u);
  EXPECT_EQ(kept[1].wall, 2u);
  EXPECT_EQ(prune_windows(p, ops), kept);
}

TEST(PruneWindows, DoorsSurvive) {
  auto [p, ops] = room_with({{Orientation::S, 3200}, {Orientation::E, 1000}});
  ops.push_back({0, OpeningKind::Door, 0, 900, 0, 2100});
  const auto kept = prune_windows(p, ops);
  EXPECT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept.back().kind, OpeningKind::Door);
}

TEST(MakeStorey, InvariantsOnGrammarPlans) {
  const grammar::GrammarConfig gcfg;
  const StoreyConfig cfg;
  int plans = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    SeededRng rng(seed, seed);
    grammar::GrowthTrace t;
    try {
      t = grammar::grow(gcfg, rng);
    } catch (const Error&) {
      continue;
    }
    for (std::size_t k = 0; k < t.snapshots.size(); ++k) {
      const std::vector<Rect> rooms(t.rooms.begin(), t.rooms.begin() + static_cast<std::ptrdiff_t>(k + 1));
      const StoreyPlan p = make_storey(t.snapshots[k], rooms, gcfg.core_tube, cfg);
      ++plans;
      int doors = 0;
      std::vector<int> incoming(rooms.size() + 1, 0);
      for (const Opening& o : p.openings) {
        const WallSegment& w = p.walls[o.wall];
        EXPECT_GE(o.offset, 0);
        EXPECT_LE(o.offset + o.width, to_mm(w.length()));
        EXPECT_LE(o.sill + o.height, cfg.storey_height);
        if (o.kind == OpeningKind::Door) {
          ++doors;
          EXPECT_EQ(o.sill, 0);
          EXPECT_EQ(w.kind, WallKind::Interior);
        } else {
          EXPECT_EQ(w.kind, WallKind::Exterior);
        }
      }
      EXPECT_EQ(doors, static_cast<int>(rooms.size()));
      const auto generated = generate_windows(p, cfg);
      EXPECT_LE(p.openings.size() - static_cast<std::size_t>(doors), generated.size());
    }
  }
  EXPECT_GT(plans, 500);
}

}  // namespace
