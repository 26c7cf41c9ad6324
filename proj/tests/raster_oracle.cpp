#include "raster_oracle.hpp"

#include <algorithm>

namespace oracle {

bool centre_inside(const std::vector<brepforge::geom2d::Point2>& loop, std::int64_t cx, std::int64_t cy) {
  // Cell centre (cx + 0.5, cy + 0.5), evaluated in doubled coordinates.
  const std::int64_t px = 2 * cx + 1, py = 2 * cy + 1;
  bool in = false;
  for (std::size_t i = 0, n = loop.size(); i < n; ++i) {
    const auto& a = loop[i];
    const auto& b = loop[(i + 1) % n];
    const std::int64_t ay = 2 * a.y, by = 2 * b.y, ax = 2 * a.x, bx = 2 * b.x;
    if ((ay > py) == (by > py)) continue;
    // x coordinate of the edge at height py (edges may be arbitrary here).
    const double x = static_cast<double>(ax) + static_cast<double>(bx - ax) * static_cast<double>(py - ay) /
                                                   static_cast<double>(by - ay);
    if (x > static_cast<double>(px)) in = !in;
  }
  return in;
}

std::set<Cell> rasterize(const brepforge::geom2d::Footprint& f) {
  std::int64_t x0 = f[0].x, x1 = f[0].x, y0 = f[0].y, y1 = f[0].y;
  for (const auto& p : f.vertices) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  std::set<Cell> out;
  for (std::int64_t y = y0; y < y1; ++y)
    for (std::int64_t x = x0; x < x1; ++x)
      if (centre_inside(f.vertices, x, y)) out.insert({x, y});
  return out;
}

std::set<Cell> rasterize(const brepforge::geom2d::Rect& r) {
  std::set<Cell> out;
  for (std::int64_t y = r.min.y; y < r.max.y; ++y)
    for (std::int64_t x = r.min.x; x < r.max.x; ++x) out.insert({x, y});
  return out;
}

std::set<Cell> unite(const std::set<Cell>& a, const std::set<Cell>& b) {
  std::set<Cell> out = a;
  out.insert(b.begin(), b.end());
  return out;
}

std::size_t common(const std::set<Cell>& a, const std::set<Cell>& b) {
  std::size_t n = 0;
  for (const Cell& c : a) n += b.count(c);
  return n;
}

}  // namespace oracle
