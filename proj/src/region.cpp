#include "brepforge/region.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace brepforge::ortho {

namespace {

std::vector<Coord> sorted_unique(std::vector<Coord> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::size_t index_of(const std::vector<Coord>& v, Coord c) {
  return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), c) - v.begin());
}

// For each interval of `merged`, the interval of `src` that contains it, or -1.
std::vector<std::ptrdiff_t> interval_map(const std::vector<Coord>& merged,
                                         const std::vector<Coord>& src) {
  std::vector<std::ptrdiff_t> out(merged.size() > 0 ? merged.size() - 1 : 0, -1);
  if (src.size() < 2) return out;
  for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
    auto it = std::upper_bound(src.begin(), src.end(), merged[i]);
    std::ptrdiff_t k = (it - src.begin()) - 1;
    if (k >= 0 && k + 1 < static_cast<std::ptrdiff_t>(src.size())) out[i] = k;
  }
  return out;
}

// Directions on the index grid: +x, +y, -x, -y.
constexpr std::array<int, 4> kDx = {1, 0, -1, 0};
constexpr std::array<int, 4> kDy = {0, 1, 0, -1};

}  // namespace

Coord twice_signed_area(std::span<const IPoint> loop) {
  Coord a = 0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const IPoint& p = loop[i];
    const IPoint& q = loop[(i + 1) % n];
    a += p.x * q.y - q.x * p.y;
  }
  return a;
}

Region Region::from_rect(const IRect& r) {
  Region out;
  if (r.x0 >= r.x1 || r.y0 >= r.y1) return out;
  out.xs_ = {r.x0, r.x1};
  out.ys_ = {r.y0, r.y1};
  out.cells_ = {1};
  return out;
}

Region Region::from_rects(std::span<const IRect> rects) {
  std::vector<Coord> xs, ys;
  for (const IRect& r : rects) {
    if (r.x0 >= r.x1 || r.y0 >= r.y1) continue;
    xs.push_back(r.x0);
    xs.push_back(r.x1);
    ys.push_back(r.y0);
    ys.push_back(r.y1);
  }
  Region out;
  if (xs.empty()) return out;
  out.xs_ = sorted_unique(std::move(xs));
  out.ys_ = sorted_unique(std::move(ys));
  const std::size_t nx = out.columns();
  out.cells_.assign(nx * out.rows(), 0);
  for (const IRect& r : rects) {
    if (r.x0 >= r.x1 || r.y0 >= r.y1) continue;
    const std::size_t i0 = index_of(out.xs_, r.x0), i1 = index_of(out.xs_, r.x1);
    const std::size_t j0 = index_of(out.ys_, r.y0), j1 = index_of(out.ys_, r.y1);
    for (std::size_t j = j0; j < j1; ++j)
      for (std::size_t i = i0; i < i1; ++i) out.cells_[j * nx + i] = 1;
  }
  out.compact();
  return out;
}

Region Region::from_loops(std::span<const Loop> loops) {
  std::vector<Coord> xs, ys;
  for (const Loop& l : loops)
    for (const IPoint& p : l) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
  Region out;
  if (xs.empty()) return out;
  out.xs_ = sorted_unique(std::move(xs));
  out.ys_ = sorted_unique(std::move(ys));
  if (out.xs_.size() < 2 || out.ys_.size() < 2) {
    out.xs_.clear();
    out.ys_.clear();
    return out;
  }
  const std::size_t nx = out.columns(), ny = out.rows();
  std::vector<std::uint8_t> flip(nx * ny, 0);
  for (const Loop& l : loops) {
    const std::size_t n = l.size();
    for (std::size_t e = 0; e < n; ++e) {
      const IPoint& p = l[e];
      const IPoint& q = l[(e + 1) % n];
      if (p.x != q.x && p.y != q.y) throw std::invalid_argument("loop edge is not axis-parallel");
      if (p.x != q.x || p.y == q.y) continue;
      const std::size_t k = index_of(out.xs_, p.x);
      if (k >= nx) continue;
      const std::size_t j0 = index_of(out.ys_, std::min(p.y, q.y));
      const std::size_t j1 = index_of(out.ys_, std::max(p.y, q.y));
      for (std::size_t j = j0; j < j1; ++j) flip[j * nx + k] ^= 1;
    }
  }
  out.cells_.assign(nx * ny, 0);
  for (std::size_t j = 0; j < ny; ++j) {
    std::uint8_t acc = 0;
    for (std::size_t i = 0; i < nx; ++i) {
      acc ^= flip[j * nx + i];
      out.cells_[j * nx + i] = acc;
    }
  }
  out.compact();
  return out;
}

void Region::compact() {
  std::size_t nx = columns(), ny = rows();
  if (nx == 0 || ny == 0) {
    xs_.clear();
    ys_.clear();
    cells_.clear();
    return;
  }
  auto at = [&](std::size_t i, std::size_t j) { return cells_[j * nx + i]; };

  // Bounding box of inside cells.
  std::size_t imin = nx, imax = 0, jmin = ny, jmax = 0;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      if (at(i, j)) {
        imin = std::min(imin, i);
        imax = std::max(imax, i);
        jmin = std::min(jmin, j);
        jmax = std::max(jmax, j);
      }
  if (imin == nx) {
    xs_.clear();
    ys_.clear();
    cells_.clear();
    return;
  }

  // Keep a column breakpoint only where adjacent columns differ.
  std::vector<std::size_t> keep_cols{imin};
  for (std::size_t i = imin + 1; i <= imax; ++i) {
    bool same = true;
    for (std::size_t j = jmin; j <= jmax && same; ++j) same = at(i, j) == at(i - 1, j);
    if (!same) keep_cols.push_back(i);
  }
  std::vector<std::size_t> keep_rows{jmin};
  for (std::size_t j = jmin + 1; j <= jmax; ++j) {
    bool same = true;
    for (std::size_t i = imin; i <= imax && same; ++i) same = at(i, j) == at(i, j - 1);
    if (!same) keep_rows.push_back(j);
  }

  std::vector<Coord> nxs, nys;
  for (std::size_t i : keep_cols) nxs.push_back(xs_[i]);
  nxs.push_back(xs_[imax + 1]);
  for (std::size_t j : keep_rows) nys.push_back(ys_[j]);
  nys.push_back(ys_[jmax + 1]);

  const std::size_t mx = keep_cols.size(), my = keep_rows.size();
  if (mx == nx && my == ny) return;
  std::vector<std::uint8_t> nc(mx * my);
  for (std::size_t b = 0; b < my; ++b)
    for (std::size_t a = 0; a < mx; ++a) nc[b * mx + a] = at(keep_cols[a], keep_rows[b]);
  xs_ = std::move(nxs);
  ys_ = std::move(nys);
  cells_ = std::move(nc);
}

Region Region::combine(const Region& a, const Region& b, Op op) {
  std::vector<Coord> xs = a.xs_, ys = a.ys_;
  xs.insert(xs.end(), b.xs_.begin(), b.xs_.end());
  ys.insert(ys.end(), b.ys_.begin(), b.ys_.end());
  Region out;
  out.xs_ = sorted_unique(std::move(xs));
  out.ys_ = sorted_unique(std::move(ys));
  if (out.xs_.size() < 2 || out.ys_.size() < 2) {
    out.xs_.clear();
    out.ys_.clear();
    return out;
  }
  const auto ax = interval_map(out.xs_, a.xs_), ay = interval_map(out.ys_, a.ys_);
  const auto bx = interval_map(out.xs_, b.xs_), by = interval_map(out.ys_, b.ys_);
  const std::size_t nx = out.columns(), ny = out.rows();
  const std::size_t anx = a.columns(), bnx = b.columns();
  out.cells_.assign(nx * ny, 0);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const bool in_a = ax[i] >= 0 && ay[j] >= 0 &&
                        a.cells_[static_cast<std::size_t>(ay[j]) * anx + static_cast<std::size_t>(ax[i])];
      const bool in_b = bx[i] >= 0 && by[j] >= 0 &&
                        b.cells_[static_cast<std::size_t>(by[j]) * bnx + static_cast<std::size_t>(bx[i])];
      bool v = false;
      switch (op) {
        case Op::Union: v = in_a || in_b; break;
        case Op::Intersect: v = in_a && in_b; break;
        case Op::Subtract: v = in_a && !in_b; break;
        case Op::Xor: v = in_a != in_b; break;
      }
      out.cells_[j * nx + i] = v ? 1 : 0;
    }
  }
  out.compact();
  return out;
}

Region Region::unite(const Region& other) const { return combine(*this, other, Op::Union); }
Region Region::intersect(const Region& other) const { return combine(*this, other, Op::Intersect); }
Region Region::subtract(const Region& other) const { return combine(*this, other, Op::Subtract); }
Region Region::symmetric_difference(const Region& other) const {
  return combine(*this, other, Op::Xor);
}

Coord Region::area() const {
  Coord a = 0;
  const std::size_t nx = columns();
  for (std::size_t j = 0; j < rows(); ++j)
    for (std::size_t i = 0; i < nx; ++i)
      if (cells_[j * nx + i]) a += (xs_[i + 1] - xs_[i]) * (ys_[j + 1] - ys_[j]);
  return a;
}

Coord Region::perimeter() const {
  Coord p = 0;
  const std::size_t nx = columns(), ny = rows();
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      if (!cell(i, j)) continue;
      const Coord w = xs_[i + 1] - xs_[i], h = ys_[j + 1] - ys_[j];
      if (i == 0 || !cell(i - 1, j)) p += h;
      if (i + 1 == nx || !cell(i + 1, j)) p += h;
      if (j == 0 || !cell(i, j - 1)) p += w;
      if (j + 1 == ny || !cell(i, j + 1)) p += w;
    }
  return p;
}

IRect Region::bounds() const {
  if (empty()) return {};
  return {xs_.front(), ys_.front(), xs_.back(), ys_.back()};
}

Region Region::dilate(Coord d) const {
  if (d == 0 || empty()) return *this;
  std::vector<IRect> rs = rectangles();
  for (IRect& r : rs) {
    r.x0 -= d;
    r.y0 -= d;
    r.x1 += d;
    r.y1 += d;
  }
  return from_rects(rs);
}

Region Region::erode(Coord d) const {
  if (d == 0 || empty()) return *this;
  IRect b = bounds();
  b.x0 -= 2 * d;
  b.y0 -= 2 * d;
  b.x1 += 2 * d;
  b.y1 += 2 * d;
  const Region frame = from_rect(b);
  return frame.subtract(frame.subtract(*this).dilate(d));
}

bool Region::contains(const IRect& r) const { return from_rect(r).subtract(*this).empty(); }

bool Region::intersects_interior(const IRect& r) const {
  return !intersect(from_rect(r)).empty();
}

std::vector<IRect> Region::rectangles() const {
  std::vector<IRect> out;
  const std::size_t nx = columns(), ny = rows();
  // Open rectangles from the previous row keyed by their column run.
  struct Open {
    std::size_t i0, i1, rect;
  };
  std::vector<Open> open;
  for (std::size_t j = 0; j < ny; ++j) {
    std::vector<Open> next;
    std::size_t i = 0;
    while (i < nx) {
      if (!cell(i, j)) {
        ++i;
        continue;
      }
      std::size_t i1 = i;
      while (i1 < nx && cell(i1, j)) ++i1;
      auto it = std::find_if(open.begin(), open.end(),
                             [&](const Open& o) { return o.i0 == i && o.i1 == i1; });
      if (it != open.end()) {
        out[it->rect].y1 = ys_[j + 1];
        next.push_back(*it);
      } else {
        out.push_back({xs_[i], ys_[j], xs_[i1], ys_[j + 1]});
        next.push_back({i, i1, out.size() - 1});
      }
      i = i1;
    }
    open = std::move(next);
  }
  return out;
}

namespace {

struct TracedLoop {
  Loop points;
  std::size_t left_cell_i = 0, left_cell_j = 0;
};

}  // namespace

static std::vector<TracedLoop> trace(const Region& r) {
  std::vector<TracedLoop> loops;
  const std::size_t nx = r.columns(), ny = r.rows();
  if (nx == 0 || ny == 0) return loops;
  const std::size_t vx = nx + 1;
  auto vid = [&](std::size_t i, std::size_t j) { return j * vx + i; };
  // out[v] bit d set when a directed boundary edge leaves vertex v in direction d.
  std::vector<std::uint8_t> out((nx + 1) * (ny + 1), 0), used((nx + 1) * (ny + 1), 0);
  auto inside = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
    return i >= 0 && j >= 0 && i < static_cast<std::ptrdiff_t>(nx) &&
           j < static_cast<std::ptrdiff_t>(ny) &&
           r.cell(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      if (!r.cell(i, j)) continue;
      const auto si = static_cast<std::ptrdiff_t>(i), sj = static_cast<std::ptrdiff_t>(j);
      if (!inside(si, sj - 1)) out[vid(i, j)] |= 1u << 0;          // bottom, +x
      if (!inside(si + 1, sj)) out[vid(i + 1, j)] |= 1u << 1;      // right, +y
      if (!inside(si, sj + 1)) out[vid(i + 1, j + 1)] |= 1u << 2;  // top, -x
      if (!inside(si - 1, sj)) out[vid(i, j + 1)] |= 1u << 3;      // left, -y
    }

  for (std::size_t j0 = 0; j0 <= ny; ++j0)
    for (std::size_t i0 = 0; i0 <= nx; ++i0)
      for (int d0 = 0; d0 < 4; ++d0) {
        if (!(out[vid(i0, j0)] & (1u << d0)) || (used[vid(i0, j0)] & (1u << d0))) continue;
        std::vector<std::pair<std::size_t, std::size_t>> verts;
        std::vector<int> dirs;
        std::size_t i = i0, j = j0;
        int d = d0;
        while (true) {
          used[vid(i, j)] |= static_cast<std::uint8_t>(1u << d);
          verts.emplace_back(i, j);
          dirs.push_back(d);
          i = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + kDx[d]);
          j = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(j) + kDy[d]);
          const std::uint8_t o = out[vid(i, j)];
          int nd = -1;
          for (int turn : {1, 0, 3}) {  // left, straight, right
            const int c = (d + turn) % 4;
            if (o & (1u << c)) {
              nd = c;
              break;
            }
          }
          if (nd < 0 || (used[vid(i, j)] & (1u << nd))) break;
          d = nd;
        }
        TracedLoop tl;
        const std::size_t n = dirs.size();
        for (std::size_t e = 0; e < n; ++e) {
          const int prev = dirs[(e + n - 1) % n];
          if (prev != dirs[e]) tl.points.push_back({r.xs()[verts[e].first], r.ys()[verts[e].second]});
        }
        // Cell on the left of the first edge.
        const auto [fi, fj] = verts[0];
        switch (d0) {
          case 0: tl.left_cell_i = fi; tl.left_cell_j = fj; break;
          case 1: tl.left_cell_i = fi - 1; tl.left_cell_j = fj; break;
          case 2: tl.left_cell_i = fi - 1; tl.left_cell_j = fj - 1; break;
          default: tl.left_cell_i = fi; tl.left_cell_j = fj - 1; break;
        }
        // Canonical start: lowest y, then lowest x.
        auto first = std::min_element(tl.points.begin(), tl.points.end(), [](const IPoint& a, const IPoint& b) {
          return a.y != b.y ? a.y < b.y : a.x < b.x;
        });
        std::rotate(tl.points.begin(), first, tl.points.end());
        loops.push_back(std::move(tl));
      }
  return loops;
}

std::vector<Loop> Region::boundary() const {
  std::vector<Loop> out;
  for (TracedLoop& t : trace(*this)) out.push_back(std::move(t.points));
  return out;
}

std::vector<RegionFace> Region::faces() const {
  std::vector<RegionFace> result;
  const std::size_t nx = columns(), ny = rows();
  if (nx == 0 || ny == 0) return result;
  // 4-connected component labels in scan order.
  std::vector<int> label(nx * ny, -1);
  int ncomp = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < nx * ny; ++s) {
    if (!cells_[s] || label[s] >= 0) continue;
    label[s] = ncomp;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      const std::size_t i = c % nx, j = c / nx;
      const std::size_t nb[4] = {i > 0 ? c - 1 : c, i + 1 < nx ? c + 1 : c, j > 0 ? c - nx : c,
                                 j + 1 < ny ? c + nx : c};
      for (std::size_t k : nb)
        if (cells_[k] && label[k] < 0) {
          label[k] = ncomp;
          stack.push_back(k);
        }
    }
    ++ncomp;
  }
  result.resize(static_cast<std::size_t>(ncomp));
  for (TracedLoop& t : trace(*this)) {
    const int comp = label[t.left_cell_j * nx + t.left_cell_i];
    RegionFace& f = result[static_cast<std::size_t>(comp)];
    if (twice_signed_area(t.points) > 0)
      f.outer = std::move(t.points);
    else
      f.holes.push_back(std::move(t.points));
  }
  return result;
}

}  // namespace brepforge::ortho
