#pragma once

// Boundary representation for axis-aligned solids on an integer millimetre
// grid.
//
// Every face lies in a plane x, y or z = const. Loops store vertex ids; the
// outer loop runs counter-clockwise about the outward normal and holes run
// clockwise. Inside a plane with normal axis a the 2-D coordinates are the
// cyclic pair (a+1, a+2), so x-planes use (y, z), y-planes (z, x) and
// z-planes (x, y); a loop that is counter-clockwise in those coordinates
// faces +a.

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "brepforge/region.hpp"

namespace brepforge::brep {

using Mm = std::int64_t;

struct IVec3 {
  std::array<Mm, 3> c{0, 0, 0};

  constexpr IVec3() = default;
  constexpr IVec3(Mm x, Mm y, Mm z) : c{x, y, z} {}
  Mm& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  Mm operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  friend auto operator<=>(const IVec3&, const IVec3&) = default;
};

enum class Label { Good, Defect };

const char* to_string(Label l);

struct Plane {
  int axis = 2;  // 0 = x, 1 = y, 2 = z
  int sign = 1;  // +1 or -1
  Mm offset = 0;
  friend auto operator<=>(const Plane&, const Plane&) = default;
};

struct Face {
  Plane plane;
  std::vector<std::uint32_t> outer;
  std::vector<std::vector<std::uint32_t>> inner;
  friend bool operator==(const Face&, const Face&) = default;
};

struct BRepSolid {
  std::vector<IVec3> vertices;
  std::vector<Face> faces;
  Label label = Label::Good;
  friend bool operator==(const BRepSolid&, const BRepSolid&) = default;
};

/// Closed box, min < max on every axis.
struct Box {
  IVec3 min;
  IVec3 max;
};

/// Rectilinear polygon with holes in (x, y) millimetres; outer CCW, holes CW.
struct Polygon2 {
  ortho::Loop outer;
  std::vector<ortho::Loop> holes;
};

ortho::IPoint project(const IVec3& p, int axis);
IVec3 lift(const ortho::IPoint& q, int axis, Mm offset);

/// Face loops resolved to plane coordinates.
std::vector<ortho::Loop> face_loops(const BRepSolid& s, const Face& f);
/// Region covered by a face in its plane coordinates.
ortho::Region face_region(const BRepSolid& s, const Face& f);
/// Total face area in mm^2.
double surface_area(const BRepSolid& s);

/// Closed prism over `poly` between z0 and z1. Throws InvalidExtrusion on a
/// degenerate polygon or non-positive height.
BRepSolid extrude_prism(const Polygon2& poly, Mm z0, Mm z1);

/// Cuts a rectangular through-opening. The box must span exactly one slab
/// between two opposed faces, stay at least 1 mm inside both and cross no
/// other face; otherwise throws BooleanFailure.
BRepSolid cut_opening(const BRepSolid& solid, const Box& box);

/// Union of solids that touch only along faces, rebuilt with maximal faces.
/// Overlapping interiors throw MergeConflict. A single solid is returned as is.
BRepSolid merge(const std::vector<BRepSolid>& solids);

/// Removes boxes from a solid and rebuilds its faces. Each box must lie in
/// material; otherwise throws BooleanFailure.
BRepSolid carve(const BRepSolid& solid, const std::vector<Box>& boxes);

struct EdgeIssue {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  int forward = 0;   // uses a -> b
  int backward = 0;  // uses b -> a
};

struct WatertightReport {
  bool ok = false;
  std::vector<EdgeIssue> issues;
  std::string message() const;
};

/// Every undirected edge must be used exactly once in each direction.
WatertightReport check_watertight(const BRepSolid& s);
bool is_watertight(const BRepSolid& s);

struct EulerCounts {
  long vertices = 0;
  long edges = 0;
  long faces = 0;
  long rings = 0;
  /// V - E + F - R.
  long characteristic() const { return vertices - edges + faces - rings; }
};

EulerCounts euler_counts(const BRepSolid& s);

struct TriMesh {
  /// Vertex positions in millimetres.
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
};

/// Conforming triangulation: faces are split into rectangles and every
/// rectangle edge is subdivided at all mesh points lying on it. Rectangles
/// with extra boundary points are fanned from their center.
TriMesh triangulate(const BRepSolid& s);

double triangle_area(const TriMesh& m, std::size_t t);
/// True when every triangle edge is shared by exactly one oppositely
/// oriented triangle edge.
bool is_closed(const TriMesh& m);

/// Wavefront OBJ in metres: `v x y z` lines, then 1-indexed `f i j k` lines.
std::string to_obj(const TriMesh& m);

}  // namespace brepforge::brep
