#include "brepforge/pipeline.hpp"

#include <cstdio>

#include "brepforge/error.hpp"

namespace brepforge::pipeline {

using dataset::DiscardReason;

std::string building_id(std::uint64_t seed) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "bldg_%06llu", static_cast<unsigned long long>(seed));
  return buf;
}

namespace {

Sample discarded(std::uint64_t seed, DiscardReason why, std::string detail) {
  Sample s;
  s.seed = seed;
  s.discard = dataset::Discard{seed, why};
  s.detail = std::move(detail);
  return s;
}

DiscardReason reason_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::GrowthFailed: return DiscardReason::GrowthFailed;
    case ErrorKind::UnreachableRoom: return DiscardReason::UnreachableRoom;
    default: return DiscardReason::BooleanFailure;
  }
}

}  // namespace

Sample produce(std::uint64_t seed, const config::GenConfig& cfg) {
  SeededRng rng(seed, seed);
  grammar::GrowthTrace trace;
  try {
    trace = grammar::grow(cfg.grammar, rng);
  } catch (const Error& e) {
    return discarded(seed, DiscardReason::GrowthFailed, e.what());
  }
  if (trace.snapshots.size() < 2) return discarded(seed, DiscardReason::GrowthFailed, "fewer than 2 rooms");

  // Every grafted room sits on the ground storey, so the trace alone decides
  // the room filter.
  BuildingMeta rooms_only;
  rooms_only.rooms.emplace_back();
  for (const geom2d::Rect& r : trace.rooms)
    rooms_only.rooms.front().push_back({geom2d::to_metres(r.width()), geom2d::to_metres(r.height())});
  if (const auto check = dataset::check_rooms(rooms_only, cfg.filter); !check.ok)
    return discarded(seed, DiscardReason::RoomFilter, check.violations.front().reason);

  Sample s;
  s.seed = seed;
  try {
    s.building = assembly::assemble(trace, cfg.building, building_id(seed), seed);
  } catch (const Error& e) {
    return discarded(seed, reason_of(e.kind()), e.what());
  }
  if (const auto solid = dataset::check_solid(s.building->solid); !solid.ok)
    return discarded(seed, DiscardReason::BooleanFailure, solid.diagnostic);
  if (const auto check = dataset::check_rooms(s.building->meta, cfg.filter); !check.ok)
    return discarded(seed, DiscardReason::RoomFilter, check.violations.front().reason);
  return s;
}

}  // namespace brepforge::pipeline
