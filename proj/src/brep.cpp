#include "brepforge/brep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "brepforge/error.hpp"

namespace brepforge::brep {

using ortho::IPoint;
using ortho::IRect;
using ortho::Loop;
using ortho::Region;

const char* to_string(Label l) { return l == Label::Good ? "GOOD" : "DEFECT"; }

namespace {

constexpr int kU[3] = {1, 2, 0};
constexpr int kV[3] = {2, 0, 1};

using Loop3 = std::vector<IVec3>;

struct FaceSpec {
  Plane plane;
  std::vector<Loop3> loops;  // loops[0] is the outer loop
};

Loop reversed(Loop l) {
  std::reverse(l.begin(), l.end());
  return l;
}

Loop3 lift_loop(const Loop& l, int axis, Mm offset) {
  Loop3 out;
  out.reserve(l.size());
  for (const IPoint& p : l) out.push_back(lift(p, axis, offset));
  return out;
}

// Rectangle loop counter-clockwise about the plane normal.
Loop rect_loop(const IRect& r, int sign) {
  Loop l{{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
  return sign > 0 ? l : reversed(std::move(l));
}

FaceSpec spec_from_region_face(const Plane& plane, const ortho::RegionFace& rf) {
  FaceSpec f{plane, {}};
  const auto orient = [&](const Loop& l) { return plane.sign > 0 ? l : reversed(l); };
  f.loops.push_back(lift_loop(orient(rf.outer), plane.axis, plane.offset));
  for (const Loop& h : rf.holes) f.loops.push_back(lift_loop(orient(h), plane.axis, plane.offset));
  return f;
}

int edge_axis(const IVec3& p, const IVec3& q) {
  int axis = -1;
  for (int a = 0; a < 3; ++a)
    if (p[a] != q[a]) {
      if (axis >= 0) throw Error(ErrorKind::AssemblyInconsistency, "edge is not axis-parallel");
      axis = a;
    }
  if (axis < 0) throw Error(ErrorKind::AssemblyInconsistency, "zero-length edge");
  return axis;
}

// Points grouped by the axis-parallel line through them.
class LineIndex {
 public:
  void add(const IVec3& p) {
    for (int a = 0; a < 3; ++a) lines_[key(p, a)].push_back(p[a]);
  }
  void finalize() {
    for (auto& [k, v] : lines_) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }
  /// Points strictly between p and q, in travel order from p.
  void between(const IVec3& p, const IVec3& q, std::vector<IVec3>& out) const {
    const int a = edge_axis(p, q);
    const auto it = lines_.find(key(p, a));
    if (it == lines_.end()) return;
    const std::vector<Mm>& v = it->second;
    const Mm lo = std::min(p[a], q[a]), hi = std::max(p[a], q[a]);
    auto first = std::upper_bound(v.begin(), v.end(), lo);
    auto last = std::lower_bound(v.begin(), v.end(), hi);
    const std::size_t start = out.size();
    for (auto i = first; i != last; ++i) {
      IVec3 r = p;
      r[a] = *i;
      out.push_back(r);
    }
    if (p[a] > q[a]) std::reverse(out.begin() + static_cast<std::ptrdiff_t>(start), out.end());
  }

 private:
  static std::array<Mm, 3> key(const IVec3& p, int axis) { return {axis, p[kU[axis]], p[kV[axis]]}; }
  std::map<std::array<Mm, 3>, std::vector<Mm>> lines_;
};

// Assigns vertex ids and splits every edge at the vertices lying on it.
BRepSolid build_solid(const std::vector<FaceSpec>& faces) {
  LineIndex index;
  for (const FaceSpec& f : faces)
    for (const Loop3& l : f.loops)
      for (const IVec3& p : l) index.add(p);
  index.finalize();

  BRepSolid s;
  std::map<IVec3, std::uint32_t> ids;
  const auto id_of = [&](const IVec3& p) {
    const auto [it, inserted] = ids.try_emplace(p, static_cast<std::uint32_t>(s.vertices.size()));
    if (inserted) s.vertices.push_back(p);
    return it->second;
  };
  std::vector<IVec3> mids;
  for (const FaceSpec& f : faces) {
    Face face{f.plane, {}, {}};
    for (std::size_t li = 0; li < f.loops.size(); ++li) {
      const Loop3& l = f.loops[li];
      std::vector<std::uint32_t> ring;
      for (std::size_t i = 0; i < l.size(); ++i) {
        ring.push_back(id_of(l[i]));
        mids.clear();
        index.between(l[i], l[(i + 1) % l.size()], mids);
        for (const IVec3& m : mids) ring.push_back(id_of(m));
      }
      if (li == 0)
        face.outer = std::move(ring);
      else
        face.inner.push_back(std::move(ring));
    }
    s.faces.push_back(std::move(face));
  }
  return s;
}

// Solid as a stack of z-slabs: layers[i] is the (x, y) cross-section for
// z in (levels[i], levels[i + 1]).
struct Layered {
  std::vector<Mm> levels;
  std::vector<Region> layers;
};

Layered to_layers(const BRepSolid& s) {
  std::map<Mm, Region> at;
  for (const Face& f : s.faces) {
    if (f.plane.axis != 2) continue;
    Region& r = at[f.plane.offset];
    r = r.symmetric_difference(face_region(s, f));
  }
  Layered out;
  Region cur;
  for (const auto& [z, r] : at) {
    if (!out.levels.empty()) out.layers.push_back(cur);
    out.levels.push_back(z);
    cur = cur.symmetric_difference(r);
  }
  if (!cur.empty()) throw Error(ErrorKind::MergeConflict, "solid is not closed along z");
  return out;
}

// Re-samples a layered solid on a finer sorted level list.
std::vector<Region> resample(const Layered& l, const std::vector<Mm>& levels) {
  std::vector<Region> out(levels.size() - 1);
  std::size_t j = 0;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    while (j < l.layers.size() && l.levels[j + 1] <= levels[i]) ++j;
    if (j < l.layers.size() && l.levels[j] <= levels[i]) out[i] = l.layers[j];
  }
  return out;
}

BRepSolid from_layers(const Layered& l) {
  std::vector<FaceSpec> faces;
  const std::size_t m = l.layers.size();
  for (std::size_t i = 0; i < l.levels.size(); ++i) {
    static const Region kEmpty;
    const Region& below = i > 0 ? l.layers[i - 1] : kEmpty;
    const Region& above = i < m ? l.layers[i] : kEmpty;
    for (const ortho::RegionFace& rf : below.subtract(above).faces())
      faces.push_back(spec_from_region_face({2, 1, l.levels[i]}, rf));
    for (const ortho::RegionFace& rf : above.subtract(below).faces())
      faces.push_back(spec_from_region_face({2, -1, l.levels[i]}, rf));
  }

  std::map<Plane, std::vector<IRect>> walls;
  for (std::size_t i = 0; i < m; ++i) {
    const Mm z0 = l.levels[i], z1 = l.levels[i + 1];
    for (const Loop& loop : l.layers[i].boundary()) {
      for (std::size_t k = 0; k < loop.size(); ++k) {
        const IPoint& p = loop[k];
        const IPoint& q = loop[(k + 1) % loop.size()];
        if (p.x == q.x) {
          // Material on the left: +y travel faces +x.
          walls[{0, q.y > p.y ? 1 : -1, p.x}].push_back({std::min(p.y, q.y), z0, std::max(p.y, q.y), z1});
        } else {
          walls[{1, q.x > p.x ? -1 : 1, p.y}].push_back({z0, std::min(p.x, q.x), z1, std::max(p.x, q.x)});
        }
      }
    }
  }
  for (const auto& [plane, rects] : walls)
    for (const ortho::RegionFace& rf : Region::from_rects(rects).faces())
      faces.push_back(spec_from_region_face(plane, rf));
  return build_solid(faces);
}

Region box_section(const Box& b) { return Region::from_rect({b.min[0], b.min[1], b.max[0], b.max[1]}); }

IRect section_in_plane(const Box& b, int axis) {
  return {b.min[kU[axis]], b.min[kV[axis]], b.max[kU[axis]], b.max[kV[axis]]};
}

void check_box(const Box& b) {
  for (int a = 0; a < 3; ++a)
    if (b.min[a] >= b.max[a]) throw Error(ErrorKind::BooleanFailure, "degenerate box");
}

}  // namespace

IPoint project(const IVec3& p, int axis) { return {p[kU[axis]], p[kV[axis]]}; }

IVec3 lift(const IPoint& q, int axis, Mm offset) {
  IVec3 r;
  r[axis] = offset;
  r[kU[axis]] = q.x;
  r[kV[axis]] = q.y;
  return r;
}

std::vector<Loop> face_loops(const BRepSolid& s, const Face& f) {
  std::vector<Loop> out;
  const auto conv = [&](const std::vector<std::uint32_t>& ids) {
    Loop l;
    l.reserve(ids.size());
    for (std::uint32_t id : ids) l.push_back(project(s.vertices[id], f.plane.axis));
    return l;
  };
  out.push_back(conv(f.outer));
  for (const auto& h : f.inner) out.push_back(conv(h));
  return out;
}

Region face_region(const BRepSolid& s, const Face& f) {
  const std::vector<Loop> loops = face_loops(s, f);
  return Region::from_loops(loops);
}

double surface_area(const BRepSolid& s) {
  double a = 0;
  for (const Face& f : s.faces) a += static_cast<double>(face_region(s, f).area());
  return a;
}

BRepSolid extrude_prism(const Polygon2& poly, Mm z0, Mm z1) {
  if (z1 <= z0) throw Error(ErrorKind::InvalidExtrusion, "non-positive extrusion height");
  std::vector<Loop> loops{poly.outer};
  loops.insert(loops.end(), poly.holes.begin(), poly.holes.end());
  Mm expected = 0;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    const Loop& l = loops[i];
    if (l.size() < 4) throw Error(ErrorKind::InvalidExtrusion, "loop with fewer than 4 vertices");
    for (std::size_t k = 0; k < l.size(); ++k) {
      const IPoint& p = l[k];
      const IPoint& q = l[(k + 1) % l.size()];
      if ((p.x != q.x) == (p.y != q.y)) throw Error(ErrorKind::InvalidExtrusion, "edge not axis-parallel");
    }
    const Mm a2 = ortho::twice_signed_area(l);
    if ((i == 0) != (a2 > 0)) throw Error(ErrorKind::InvalidExtrusion, "loop orientation");
    expected += a2;
  }
  Region region;
  try {
    region = Region::from_loops(loops);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::InvalidExtrusion, e.what());
  }
  if (region.area() * 2 != expected || region.boundary().size() != loops.size())
    throw Error(ErrorKind::InvalidExtrusion, "holes overlap or leave the outer loop");

  std::vector<FaceSpec> faces;
  FaceSpec bottom{{2, -1, z0}, {}}, top{{2, 1, z1}, {}};
  for (const Loop& l : loops) {
    bottom.loops.push_back(lift_loop(reversed(l), 2, z0));
    top.loops.push_back(lift_loop(l, 2, z1));
  }
  faces.push_back(std::move(bottom));
  faces.push_back(std::move(top));
  for (const Loop& l : loops) {
    for (std::size_t k = 0; k < l.size(); ++k) {
      const IPoint& p = l[k];
      const IPoint& q = l[(k + 1) % l.size()];
      const Plane plane = p.x == q.x ? Plane{0, q.y > p.y ? 1 : -1, p.x} : Plane{1, q.x > p.x ? -1 : 1, p.y};
      faces.push_back({plane, {{{p.x, p.y, z0}, {q.x, q.y, z0}, {q.x, q.y, z1}, {p.x, p.y, z1}}}});
    }
  }
  return build_solid(faces);
}

BRepSolid cut_opening(const BRepSolid& solid, const Box& box) {
  check_box(box);
  int axis = -1;
  std::size_t f_lo = 0, f_hi = 0;
  for (int a = 0; a < 3; ++a) {
    IRect r = section_in_plane(box, a);
    r = {r.x0 - 1, r.y0 - 1, r.x1 + 1, r.y1 + 1};
    long lo = -1, hi = -1;
    for (std::size_t i = 0; i < solid.faces.size(); ++i) {
      const Plane& p = solid.faces[i].plane;
      if (p.axis != a) continue;
      const bool at_lo = p.sign < 0 && p.offset == box.min[a];
      const bool at_hi = p.sign > 0 && p.offset == box.max[a];
      if (!at_lo && !at_hi) continue;
      if (!face_region(solid, solid.faces[i]).contains(r)) continue;
      (at_lo ? lo : hi) = static_cast<long>(i);
    }
    if (lo < 0 || hi < 0) continue;
    if (axis >= 0) throw Error(ErrorKind::BooleanFailure, "opening box pierces more than one slab");
    axis = a;
    f_lo = static_cast<std::size_t>(lo);
    f_hi = static_cast<std::size_t>(hi);
  }
  if (axis < 0) throw Error(ErrorKind::BooleanFailure, "opening box does not pierce a slab");

  for (std::size_t i = 0; i < solid.faces.size(); ++i) {
    if (i == f_lo || i == f_hi) continue;
    const Plane& p = solid.faces[i].plane;
    const bool crosses = p.axis == axis ? (p.offset > box.min[p.axis] && p.offset < box.max[p.axis])
                                        : (p.offset >= box.min[p.axis] && p.offset <= box.max[p.axis]);
    if (crosses && face_region(solid, solid.faces[i]).intersects_interior(section_in_plane(box, p.axis)))
      throw Error(ErrorKind::BooleanFailure, "opening box meets another face");
  }

  BRepSolid out = solid;
  std::map<IVec3, std::uint32_t> ids;
  for (std::uint32_t i = 0; i < out.vertices.size(); ++i) ids.emplace(out.vertices[i], i);
  const auto id_of = [&](const IVec3& p) {
    const auto [it, inserted] = ids.try_emplace(p, static_cast<std::uint32_t>(out.vertices.size()));
    if (inserted) out.vertices.push_back(p);
    return it->second;
  };
  const auto ring = [&](const Loop& l, int ax, Mm offset) {
    std::vector<std::uint32_t> r;
    for (const IPoint& q : l) r.push_back(id_of(lift(q, ax, offset)));
    return r;
  };

  // Holes run clockwise about each face normal.
  const IRect sec = section_in_plane(box, axis);
  out.faces[f_lo].inner.push_back(ring(rect_loop(sec, 1), axis, box.min[axis]));
  out.faces[f_hi].inner.push_back(ring(rect_loop(sec, -1), axis, box.max[axis]));

  // Tunnel faces look into the opening.
  const int u = kU[axis], v = kV[axis];
  const IRect in_u{box.min[v], box.min[axis], box.max[v], box.max[axis]};   // (v, axis) coords
  const IRect in_v{box.min[axis], box.min[u], box.max[axis], box.max[u]};   // (axis, u) coords
  const std::array<std::pair<Plane, IRect>, 4> tunnel{{{{u, 1, box.min[u]}, in_u},
                                                       {{u, -1, box.max[u]}, in_u},
                                                       {{v, 1, box.min[v]}, in_v},
                                                       {{v, -1, box.max[v]}, in_v}}};
  for (const auto& [plane, rect] : tunnel)
    out.faces.push_back({plane, ring(rect_loop(rect, plane.sign), plane.axis, plane.offset), {}});
  return out;
}

BRepSolid merge(const std::vector<BRepSolid>& solids) {
  if (solids.empty()) return {};
  if (solids.size() == 1) return solids.front();
  std::vector<Layered> parts;
  std::set<Mm> level_set;
  for (const BRepSolid& s : solids) {
    parts.push_back(to_layers(s));
    level_set.insert(parts.back().levels.begin(), parts.back().levels.end());
  }
  Layered out;
  out.levels.assign(level_set.begin(), level_set.end());
  out.layers.assign(out.levels.size() - 1, Region{});
  for (const Layered& p : parts) {
    const std::vector<Region> r = resample(p, out.levels);
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i].empty()) continue;
      if (out.layers[i].intersect(r[i]).area() > 0)
        throw Error(ErrorKind::MergeConflict, "solids overlap between z = " + std::to_string(out.levels[i]) +
                                                  " and " + std::to_string(out.levels[i + 1]));
      out.layers[i] = out.layers[i].unite(r[i]);
    }
  }
  return from_layers(out);
}

BRepSolid carve(const BRepSolid& solid, const std::vector<Box>& boxes) {
  const Layered base = to_layers(solid);
  std::set<Mm> level_set(base.levels.begin(), base.levels.end());
  for (const Box& b : boxes) {
    check_box(b);
    level_set.insert(b.min[2]);
    level_set.insert(b.max[2]);
  }
  Layered out;
  out.levels.assign(level_set.begin(), level_set.end());
  out.layers = resample(base, out.levels);
  for (const Box& b : boxes) {
    const Region cut = box_section(b);
    for (std::size_t i = 0; i + 1 < out.levels.size(); ++i) {
      if (out.levels[i] < b.min[2] || out.levels[i + 1] > b.max[2]) continue;
      if (!(out.layers[i].intersect(cut) == cut))
        throw Error(ErrorKind::BooleanFailure, "carved box leaves the material");
      out.layers[i] = out.layers[i].subtract(cut);
    }
  }
  return from_layers(out);
}

std::string WatertightReport::message() const {
  if (ok) return "watertight";
  if (issues.empty()) return "empty solid";
  std::ostringstream os;
  os << issues.size() << " bad edge(s)";
  for (std::size_t i = 0; i < issues.size() && i < 8; ++i)
    os << "; (" << issues[i].a << "," << issues[i].b << ") used " << issues[i].forward << "/" << issues[i].backward;
  return os.str();
}

WatertightReport check_watertight(const BRepSolid& s) {
  WatertightReport rep;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<int, int>> uses;
  bool any = false;
  for (const Face& f : s.faces) {
    const auto visit = [&](const std::vector<std::uint32_t>& l) {
      for (std::size_t i = 0; i < l.size(); ++i) {
        const std::uint32_t a = l[i], b = l[(i + 1) % l.size()];
        any = true;
        if (a < b)
          ++uses[{a, b}].first;
        else
          ++uses[{b, a}].second;
      }
    };
    visit(f.outer);
    for (const auto& h : f.inner) visit(h);
  }
  for (const auto& [e, n] : uses)
    if (n.first != 1 || n.second != 1) rep.issues.push_back({e.first, e.second, n.first, n.second});
  rep.ok = any && rep.issues.empty();
  return rep;
}

bool is_watertight(const BRepSolid& s) { return check_watertight(s).ok; }

EulerCounts euler_counts(const BRepSolid& s) {
  std::set<std::uint32_t> verts;
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  EulerCounts c;
  for (const Face& f : s.faces) {
    ++c.faces;
    c.rings += static_cast<long>(f.inner.size());
    const auto visit = [&](const std::vector<std::uint32_t>& l) {
      for (std::size_t i = 0; i < l.size(); ++i) {
        const std::uint32_t a = l[i], b = l[(i + 1) % l.size()];
        verts.insert(a);
        edges.insert({std::min(a, b), std::max(a, b)});
      }
    };
    visit(f.outer);
    for (const auto& h : f.inner) visit(h);
  }
  c.vertices = static_cast<long>(verts.size());
  c.edges = static_cast<long>(edges.size());
  return c;
}

TriMesh triangulate(const BRepSolid& s) {
  struct Piece {
    Plane plane;
    IRect rect;
  };
  std::vector<Piece> pieces;
  LineIndex index;
  for (const IVec3& v : s.vertices) index.add(v);
  for (const Face& f : s.faces) {
    for (const IRect& r : face_region(s, f).rectangles()) {
      pieces.push_back({f.plane, r});
      for (const IPoint& q : rect_loop(r, 1)) index.add(lift(q, f.plane.axis, f.plane.offset));
    }
  }
  index.finalize();

  TriMesh m;
  std::map<IVec3, std::uint32_t> ids;
  const auto id_of = [&](const IVec3& p) {
    const auto [it, inserted] = ids.try_emplace(p, static_cast<std::uint32_t>(m.vertices.size()));
    if (inserted)
      m.vertices.push_back({static_cast<double>(p[0]), static_cast<double>(p[1]), static_cast<double>(p[2])});
    return it->second;
  };
  std::vector<IVec3> ring, mids;
  for (const Piece& pc : pieces) {
    const Loop corners = rect_loop(pc.rect, pc.plane.sign);
    ring.clear();
    for (std::size_t i = 0; i < 4; ++i) {
      const IVec3 p = lift(corners[i], pc.plane.axis, pc.plane.offset);
      ring.push_back(p);
      index.between(p, lift(corners[(i + 1) % 4], pc.plane.axis, pc.plane.offset), ring);
    }
    std::vector<std::uint32_t> ring_ids;
    for (const IVec3& p : ring) ring_ids.push_back(id_of(p));
    if (ring.size() == 4) {
      m.triangles.push_back({ring_ids[0], ring_ids[1], ring_ids[2]});
      m.triangles.push_back({ring_ids[0], ring_ids[2], ring_ids[3]});
      continue;
    }
    std::array<double, 3> center{};
    const int ax = pc.plane.axis;
    center[static_cast<std::size_t>(ax)] = static_cast<double>(pc.plane.offset);
    center[static_cast<std::size_t>(kU[ax])] = (static_cast<double>(pc.rect.x0) + static_cast<double>(pc.rect.x1)) / 2;
    center[static_cast<std::size_t>(kV[ax])] = (static_cast<double>(pc.rect.y0) + static_cast<double>(pc.rect.y1)) / 2;
    const auto c = static_cast<std::uint32_t>(m.vertices.size());
    m.vertices.push_back(center);
    for (std::size_t i = 0; i < ring_ids.size(); ++i)
      m.triangles.push_back({c, ring_ids[i], ring_ids[(i + 1) % ring_ids.size()]});
  }
  return m;
}

double triangle_area(const TriMesh& m, std::size_t t) {
  const auto& a = m.vertices[m.triangles[t][0]];
  const auto& b = m.vertices[m.triangles[t][1]];
  const auto& c = m.vertices[m.triangles[t][2]];
  const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
  const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
  const double cx = uy * vz - uz * vy, cy = uz * vx - ux * vz, cz = ux * vy - uy * vx;
  return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

bool is_closed(const TriMesh& m) {
  if (m.triangles.empty()) return false;
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
  for (const auto& t : m.triangles)
    for (int i = 0; i < 3; ++i) ++directed[{t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>((i + 1) % 3)]}];
  for (const auto& [e, n] : directed) {
    const auto back = directed.find({e.second, e.first});
    if (n != 1 || back == directed.end() || back->second != 1) return false;
  }
  return true;
}

std::string to_obj(const TriMesh& m) {
  std::string out;
  char buf[64];
  for (const auto& v : m.vertices) {
    out += 'v';
    for (double c : v) {
      const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, c / 1000.0);
      out += ' ';
      out.append(buf, end);
    }
    out += '\n';
  }
  for (const auto& t : m.triangles) {
    out += 'f';
    for (std::uint32_t i : t) {
      out += ' ';
      out += std::to_string(i + 1);
    }
    out += '\n';
  }
  return out;
}

}  // namespace brepforge::brep
