#include "brepforge/geom2d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "brepforge/error.hpp"

namespace brepforge::geom2d {

namespace {

Coord cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool axis_parallel(const Point2& a, const Point2& b) { return a.x == b.x || a.y == b.y; }

}  // namespace

Coord from_metres(double metres) {
  return static_cast<Coord>(std::llround(metres * static_cast<double>(kStepsPerMetre)));
}

Footprint Footprint::from_rect(const Rect& r) {
  return {{r.min, {r.max.x, r.min.y}, r.max, {r.min.x, r.max.y}}};
}

ortho::Region Footprint::region() const {
  const ortho::Loop loops[1] = {vertices};
  return ortho::Region::from_loops(loops);
}

Coord twice_area_steps(const Footprint& f) { return ortho::twice_signed_area(f.vertices); }

double polygon_area(const Footprint& f) {
  if (f.size() < 4) throw Error(ErrorKind::InvalidFootprint, "footprint has fewer than 4 vertices");
  const double steps2 = static_cast<double>(twice_area_steps(f)) / 2.0;
  return steps2 / static_cast<double>(kStepsPerMetre * kStepsPerMetre);
}

Coord perimeter_steps(const Footprint& f) {
  Coord p = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Point2& a = f[i];
    const Point2& b = f.next(i);
    p += std::abs(b.x - a.x) + std::abs(b.y - a.y);
  }
  return p;
}

VertexKind classify_vertex(const Footprint& f, std::size_t i) {
  if (i >= f.size()) throw Error(ErrorKind::InvalidFootprint, "vertex index out of range");
  const Coord c = cross(f.prev(i), f[i], f.next(i));
  if (c == 0) throw Error(ErrorKind::MustCleanFirst, "collinear vertex " + std::to_string(i));
  return c > 0 ? VertexKind::Convex : VertexKind::Concave;
}

Footprint footprint_of(const ortho::Region& region) {
  if (region.empty()) throw Error(ErrorKind::InvalidFootprint, "empty region");
  std::vector<ortho::Loop> loops = region.boundary();
  if (loops.size() != 1) throw Error(ErrorKind::Conflict, "region is not bounded by a single simple loop");
  std::vector<Point2> sorted = loops.front();
  std::sort(sorted.begin(), sorted.end(), [](const Point2& a, const Point2& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(ErrorKind::Conflict, "boundary loop touches itself");
  return Footprint{std::move(loops.front())};
}

bool overlaps(const Footprint& f, const Rect& r) { return f.region().intersects_interior(r.as_irect()); }

Footprint union_rect(const Footprint& f, const Rect& r) {
  if (r.width() <= 0 || r.height() <= 0) throw Error(ErrorKind::Conflict, "degenerate rectangle");
  const ortho::Region a = f.region();
  const ortho::Region b = ortho::Region::from_rect(r.as_irect());
  if (!a.intersect(b).empty()) throw Error(ErrorKind::Collision, "rectangle overlaps footprint interior");
  const ortho::Region u = a.unite(b);
  // perimeter(a) + perimeter(b) - perimeter(a ∪ b) = 2 * shared boundary length.
  if (a.perimeter() + b.perimeter() - u.perimeter() <= 0)
    throw Error(ErrorKind::Conflict, "rectangle shares no boundary segment with footprint");
  return footprint_of(u);
}

Footprint clean(const Footprint& f) {
  std::vector<Point2> v;
  v.reserve(f.size());
  for (const Point2& p : f.vertices)
    if (v.empty() || v.back() != p) v.push_back(p);
  while (v.size() > 1 && v.front() == v.back()) v.pop_back();

  bool changed = true;
  while (changed && v.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < v.size() && v.size() >= 3; ++i) {
      const std::size_t n = v.size();
      const Point2& a = v[(i + n - 1) % n];
      const Point2& c = v[(i + 1) % n];
      if (v[i] == c || cross(a, v[i], c) == 0) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        --i;
      }
    }
  }
  if (v.size() < 4) throw Error(ErrorKind::InvalidFootprint, "loop collapses below 4 vertices");
  Footprint out{std::move(v)};
  if (twice_area_steps(out) < 0) std::reverse(out.vertices.begin(), out.vertices.end());
  return out;
}

Footprint fill_notches(const Footprint& f, Coord max_gap) {
  Footprint cur = f;
  bool changed = true;
  while (changed) {
    changed = false;
    const std::size_t n = cur.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& a = cur[i];
      const Point2& b = cur.next(i);
      if (classify_vertex(cur, i) != VertexKind::Concave ||
          classify_vertex(cur, (i + 1) % n) != VertexKind::Concave)
        continue;
      const Coord gap = std::abs(b.x - a.x) + std::abs(b.y - a.y);
      const Point2& before = cur.prev(i);
      const Point2& after = cur.next((i + 1) % n);
      const Coord side_in = std::abs(a.x - before.x) + std::abs(a.y - before.y);
      const Coord side_out = std::abs(after.x - b.x) + std::abs(after.y - b.y);
      if (gap >= max_gap || side_in >= max_gap || side_out >= max_gap) continue;
      const Coord depth = std::min(side_in, side_out);
      // Unit vector from the notch bottom towards its mouth.
      const Coord ux = (before.x > a.x) - (before.x < a.x);
      const Coord uy = (before.y > a.y) - (before.y < a.y);
      const Point2 c{a.x + ux * depth, a.y + uy * depth};
      const Point2 d{b.x + ux * depth, b.y + uy * depth};
      const Rect fill{{std::min({a.x, b.x, c.x, d.x}), std::min({a.y, b.y, c.y, d.y})},
                      {std::max({a.x, b.x, c.x, d.x}), std::max({a.y, b.y, c.y, d.y})}};
      cur = footprint_of(cur.region().unite(ortho::Region::from_rect(fill.as_irect())));
      changed = true;
      break;
    }
  }
  return cur;
}

OffsetLoops offset_loop(const Footprint& f, Coord d) {
  if (d <= 0) throw Error(ErrorKind::OffsetTooLarge, "offset distance must be positive");
  const ortho::Region r = f.region();
  const ortho::Region outer = r.dilate(d);
  const ortho::Region inner = r.erode(d);
  if (inner.empty()) throw Error(ErrorKind::OffsetTooLarge, "inner loop collapses");
  OffsetLoops out;
  try {
    out.outer = footprint_of(outer);
    out.inner = footprint_of(inner);
  } catch (const Error& e) {
    throw Error(ErrorKind::OffsetTooLarge, e.what());
  }
  return out;
}

bool point_in_footprint(const Footprint& f, Point2 p) {
  // Boundary points count as inside.
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = f[i];
    const Point2& b = f.next(i);
    if (p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) && p.y >= std::min(a.y, b.y) &&
        p.y <= std::max(a.y, b.y))
      return true;
  }
  bool in = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = f[i];
    const Point2& b = f.next(i);
    if (a.x != b.x) continue;
    if ((a.y > p.y) != (b.y > p.y) && a.x > p.x) in = !in;
  }
  return in;
}

bool is_valid_footprint(const Footprint& f) {
  const std::size_t n = f.size();
  if (n < 4 || n % 2 != 0) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (f[i] == f.next(i) || !axis_parallel(f[i], f.next(i))) return false;
    if (cross(f.prev(i), f[i], f.next(i)) == 0) return false;
  }
  if (twice_area_steps(f) <= 0) return false;
  try {
    const std::vector<ortho::Loop> loops = f.region().boundary();
    if (loops.size() != 1) return false;
    return ortho::twice_signed_area(loops.front()) == twice_area_steps(f) &&
           loops.front().size() == n;
  } catch (...) {
    return false;
  }
}

}  // namespace brepforge::geom2d
