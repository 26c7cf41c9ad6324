#pragma once

// Point-cloud numeric kernels with a scalar and an AVX2 implementation.
//
// Both implementations perform the same IEEE operations in the same order
// (no fused multiply-add, fixed four-lane striping for reductions), so their
// results are bit-identical. Dispatch picks AVX2 when the CPU supports it
// unless BREPFORGE_SIMD=scalar is set.

#include <cstddef>

namespace brepforge::simd {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);

/// Pointers to the x, y and z coordinate arrays of n points.
struct Soa3 {
  const double* x;
  const double* y;
  const double* z;
};

struct Kernels {
  /// out[i] = |(b - a) x (c - a)| / 2.
  void (*triangle_areas)(Soa3 a, Soa3 b, Soa3 c, std::size_t n, double* out);
  /// out[i] = wa[i] * a[i] + wb[i] * b[i] + wc[i] * c[i], per coordinate.
  void (*barycentric)(Soa3 a, Soa3 b, Soa3 c, const double* wa, const double* wb, const double* wc, std::size_t n,
                      double* ox, double* oy, double* oz);
  /// Minimum and maximum of v[0..n); n > 0.
  void (*bounds)(const double* v, std::size_t n, double* lo, double* hi);
  /// v[i] = (v[i] - shift) / scale.
  void (*affine)(double* v, std::size_t n, double shift, double scale);
  /// Sum with lane j accumulating v[j], v[j+4], ...; lanes combined as
  /// (l0 + l1) + (l2 + l3).
  double (*striped_sum)(const double* v, std::size_t n);
  /// Largest sqrt(x^2 + y^2 + z^2); 0 for n = 0.
  double (*max_norm)(Soa3 p, std::size_t n);
};

const Kernels& scalar_kernels();
/// nullptr when the library was built without AVX2 support.
const Kernels* avx2_kernels();
bool cpu_has_avx2();

/// ISA chosen from the CPU and the BREPFORGE_SIMD environment variable
/// (`scalar` forces the scalar path), evaluated once.
Isa active_isa();
const Kernels& kernels();
const Kernels& kernels(Isa isa);

}  // namespace brepforge::simd
