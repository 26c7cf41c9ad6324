// Built with -mavx2. Only intrinsics live here so no inline library code is
// compiled for AVX2 and shared with the rest of the program.

#include <immintrin.h>

#include "brepforge/simd/kernels.hpp"

namespace brepforge::simd {

namespace {

void triangle_areas(Soa3 a, Soa3 b, Soa3 c, std::size_t n, double* out) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ax = _mm256_loadu_pd(a.x + i), ay = _mm256_loadu_pd(a.y + i), az = _mm256_loadu_pd(a.z + i);
    const __m256d ux = _mm256_sub_pd(_mm256_loadu_pd(b.x + i), ax);
    const __m256d uy = _mm256_sub_pd(_mm256_loadu_pd(b.y + i), ay);
    const __m256d uz = _mm256_sub_pd(_mm256_loadu_pd(b.z + i), az);
    const __m256d vx = _mm256_sub_pd(_mm256_loadu_pd(c.x + i), ax);
    const __m256d vy = _mm256_sub_pd(_mm256_loadu_pd(c.y + i), ay);
    const __m256d vz = _mm256_sub_pd(_mm256_loadu_pd(c.z + i), az);
    const __m256d cx = _mm256_sub_pd(_mm256_mul_pd(uy, vz), _mm256_mul_pd(uz, vy));
    const __m256d cy = _mm256_sub_pd(_mm256_mul_pd(uz, vx), _mm256_mul_pd(ux, vz));
    const __m256d cz = _mm256_sub_pd(_mm256_mul_pd(ux, vy), _mm256_mul_pd(uy, vx));
    const __m256d sq = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(cx, cx), _mm256_mul_pd(cy, cy)), _mm256_mul_pd(cz, cz));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_sqrt_pd(sq), half));
  }
  if (i < n) {
    const Soa3 ta{a.x + i, a.y + i, a.z + i}, tb{b.x + i, b.y + i, b.z + i}, tc{c.x + i, c.y + i, c.z + i};
    scalar_kernels().triangle_areas(ta, tb, tc, n - i, out + i);
  }
}

__m256d weigh(__m256d wa, __m256d wb, __m256d wc, const double* a, const double* b, const double* c) {
  return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(wa, _mm256_loadu_pd(a)), _mm256_mul_pd(wb, _mm256_loadu_pd(b))),
                       _mm256_mul_pd(wc, _mm256_loadu_pd(c)));
}

void barycentric(Soa3 a, Soa3 b, Soa3 c, const double* wa, const double* wb, const double* wc, std::size_t n,
                 double* ox, double* oy, double* oz) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d pa = _mm256_loadu_pd(wa + i), pb = _mm256_loadu_pd(wb + i), pc = _mm256_loadu_pd(wc + i);
    _mm256_storeu_pd(ox + i, weigh(pa, pb, pc, a.x + i, b.x + i, c.x + i));
    _mm256_storeu_pd(oy + i, weigh(pa, pb, pc, a.y + i, b.y + i, c.y + i));
    _mm256_storeu_pd(oz + i, weigh(pa, pb, pc, a.z + i, b.z + i, c.z + i));
  }
  if (i < n) {
    const Soa3 ta{a.x + i, a.y + i, a.z + i}, tb{b.x + i, b.y + i, b.z + i}, tc{c.x + i, c.y + i, c.z + i};
    scalar_kernels().barycentric(ta, tb, tc, wa + i, wb + i, wc + i, n - i, ox + i, oy + i, oz + i);
  }
}

double hmin(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  double m = t[0];
  for (int j = 1; j < 4; ++j) m = t[j] < m ? t[j] : m;
  return m;
}

double hmax(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  double m = t[0];
  for (int j = 1; j < 4; ++j) m = t[j] > m ? t[j] : m;
  return m;
}

void bounds(const double* v, std::size_t n, double* lo, double* hi) {
  if (n < 4) {
    scalar_kernels().bounds(v, n, lo, hi);
    return;
  }
  __m256d l = _mm256_loadu_pd(v), h = l;
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    l = _mm256_min_pd(l, x);
    h = _mm256_max_pd(h, x);
  }
  double a = hmin(l), b = hmax(h);
  for (; i < n; ++i) {
    a = v[i] < a ? v[i] : a;
    b = v[i] > b ? v[i] : b;
  }
  *lo = a;
  *hi = b;
}

void affine(double* v, std::size_t n, double shift, double scale) {
  const __m256d s = _mm256_set1_pd(shift), d = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(v + i, _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i), s), d));
  for (; i < n; ++i) v[i] = (v[i] - shift) / scale;
}

double striped_sum(const double* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t j = 0; i < n; ++i, ++j) lane[j] += v[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double max_norm(Soa3 p, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(p.x + i), y = _mm256_loadu_pd(p.y + i), z = _mm256_loadu_pd(p.z + i);
    const __m256d sq = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y)), _mm256_mul_pd(z, z));
    m = _mm256_max_pd(m, _mm256_sqrt_pd(sq));
  }
  double r = hmax(m);
  if (i < n) {
    const double t = scalar_kernels().max_norm({p.x + i, p.y + i, p.z + i}, n - i);
    r = t > r ? t : r;
  }
  return r;
}

}  // namespace

const Kernels* avx2_kernels() {
  static const Kernels k{triangle_areas, barycentric, bounds, affine, striped_sum, max_norm};
  return &k;
}

}  // namespace brepforge::simd
