#pragma once

#include <cstdint>

namespace brepforge {

/// PCG-XSH-RR 32-bit generator (64-bit state, selectable stream).
///
/// Seeding follows the reference pcg32_srandom_r so that any implementation
/// of the published algorithm reproduces the same draws.
class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  /// Uniform integer in [0, bound) without modulo bias. bound must be > 0.
  std::uint32_t bounded(std::uint32_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace brepforge
