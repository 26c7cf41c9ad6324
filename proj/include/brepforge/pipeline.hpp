#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "brepforge/assembly.hpp"
#include "brepforge/config.hpp"
#include "brepforge/dataset.hpp"

namespace brepforge::pipeline {

/// Building id for a sample seed, e.g. "bldg_000042".
std::string building_id(std::uint64_t seed);

struct Sample {
  std::uint64_t seed = 0;
  std::optional<assembly::Building> building;
  std::optional<dataset::Discard> discard;
  /// Error text behind a discard.
  std::string detail;
};

/// Grows, filters and assembles sample `seed` with generator stream
/// (seed, seed). Exactly one of `building` and `discard` is set.
Sample produce(std::uint64_t seed, const config::GenConfig& cfg);

}  // namespace brepforge::pipeline
