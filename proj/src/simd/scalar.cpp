#include <algorithm>
#include <cmath>

#include "brepforge/simd/kernels.hpp"

namespace brepforge::simd {

namespace {

void triangle_areas(Soa3 a, Soa3 b, Soa3 c, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ux = b.x[i] - a.x[i], uy = b.y[i] - a.y[i], uz = b.z[i] - a.z[i];
    const double vx = c.x[i] - a.x[i], vy = c.y[i] - a.y[i], vz = c.z[i] - a.z[i];
    const double cx = uy * vz - uz * vy;
    const double cy = uz * vx - ux * vz;
    const double cz = ux * vy - uy * vx;
    out[i] = std::sqrt((cx * cx + cy * cy) + cz * cz) * 0.5;
  }
}

void barycentric(Soa3 a, Soa3 b, Soa3 c, const double* wa, const double* wb, const double* wc, std::size_t n,
                 double* ox, double* oy, double* oz) {
  for (std::size_t i = 0; i < n; ++i) {
    ox[i] = (wa[i] * a.x[i] + wb[i] * b.x[i]) + wc[i] * c.x[i];
    oy[i] = (wa[i] * a.y[i] + wb[i] * b.y[i]) + wc[i] * c.y[i];
    oz[i] = (wa[i] * a.z[i] + wb[i] * b.z[i]) + wc[i] * c.z[i];
  }
}

void bounds(const double* v, std::size_t n, double* lo, double* hi) {
  double l = v[0], h = v[0];
  for (std::size_t i = 1; i < n; ++i) {
    l = std::min(l, v[i]);
    h = std::max(h, v[i]);
  }
  *lo = l;
  *hi = h;
}

void affine(double* v, std::size_t n, double shift, double scale) {
  for (std::size_t i = 0; i < n; ++i) v[i] = (v[i] - shift) / scale;
}

double striped_sum(const double* v, std::size_t n) {
  double lane[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) lane[i % 4] += v[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double max_norm(Soa3 p, std::size_t n) {
  double m = 0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::sqrt((p.x[i] * p.x[i] + p.y[i] * p.y[i]) + p.z[i] * p.z[i]));
  return m;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{triangle_areas, barycentric, bounds, affine, striped_sum, max_norm};
  return k;
}

}  // namespace brepforge::simd
