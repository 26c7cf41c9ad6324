#pragma once

// Exact rectilinear regions on integer coordinates.
//
// A Region is stored as a cell bitmap over its own compressed grid (the sorted
// distinct x and y breakpoints). Every boolean is exact; boundary tracing
// returns counter-clockwise outer loops and clockwise holes. Where two cells
// touch only at a corner, tracing turns left so that each loop hugs a single
// 4-connected component.

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace brepforge::ortho {

using Coord = std::int64_t;

struct IPoint {
  Coord x = 0;
  Coord y = 0;
  friend auto operator<=>(const IPoint&, const IPoint&) = default;
};

using Loop = std::vector<IPoint>;

/// Closed axis-aligned rectangle, x0 < x1 and y0 < y1.
struct IRect {
  Coord x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  friend bool operator==(const IRect&, const IRect&) = default;
};

struct RegionFace {
  Loop outer;
  std::vector<Loop> holes;
};

/// Twice the signed area of a loop (positive for counter-clockwise).
Coord twice_signed_area(std::span<const IPoint> loop);

class Region {
 public:
  Region() = default;

  static Region from_rect(const IRect& r);
  static Region from_rects(std::span<const IRect> rects);
  /// Even-odd fill of axis-parallel loops. Throws std::invalid_argument on a
  /// diagonal edge.
  static Region from_loops(std::span<const Loop> loops);

  bool empty() const { return cells_.empty(); }
  Coord area() const;
  Coord perimeter() const;
  IRect bounds() const;

  Region unite(const Region& other) const;
  Region intersect(const Region& other) const;
  Region subtract(const Region& other) const;
  Region symmetric_difference(const Region& other) const;

  /// Minkowski sum with the square [-d, d]^2.
  Region dilate(Coord d) const;
  /// Points whose [-d, d]^2 neighbourhood lies in the region.
  Region erode(Coord d) const;

  bool contains(const IRect& r) const;
  bool intersects_interior(const IRect& r) const;

  std::vector<Loop> boundary() const;
  std::vector<RegionFace> faces() const;
  /// Disjoint rectangles covering the region (row runs merged vertically).
  std::vector<IRect> rectangles() const;

  std::size_t columns() const { return xs_.empty() ? 0 : xs_.size() - 1; }
  std::size_t rows() const { return ys_.empty() ? 0 : ys_.size() - 1; }
  const std::vector<Coord>& xs() const { return xs_; }
  const std::vector<Coord>& ys() const { return ys_; }
  bool cell(std::size_t i, std::size_t j) const { return cells_[j * columns() + i] != 0; }

  friend bool operator==(const Region& a, const Region& b) {
    return a.xs_ == b.xs_ && a.ys_ == b.ys_ && a.cells_ == b.cells_;
  }

 private:
  enum class Op { Union, Intersect, Subtract, Xor };
  static Region combine(const Region& a, const Region& b, Op op);
  void compact();

  std::vector<Coord> xs_;
  std::vector<Coord> ys_;
  std::vector<std::uint8_t> cells_;
};

}  // namespace brepforge::ortho
