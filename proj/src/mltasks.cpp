#include "brepforge/mltasks.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "brepforge/error.hpp"
#include "brepforge/simd/kernels.hpp"

namespace brepforge::mltasks {

const char* to_string(NormMode m) { return m == NormMode::UnitCube ? "cube" : "sphere"; }

PointCloud sample_points(const brep::TriMesh& mesh, std::size_t n, NormMode mode, SeededRng& rng) {
  return sample_points(mesh, n, mode, rng, simd::active_isa());
}

PointCloud sample_points(const brep::TriMesh& mesh, std::size_t n, NormMode mode, SeededRng& rng, simd::Isa isa) {
  const simd::Kernels& k = simd::kernels(isa);
  const std::size_t t = mesh.triangles.size();
  if (t == 0) throw Error(ErrorKind::EmptyMesh, "mesh has no triangles");

  std::vector<double> corner(9 * t);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t a = 0; a < 3; ++a) corner[(3 * c + a) * t + i] = mesh.vertices[mesh.triangles[i][c]][a];
  auto tri = [&](std::size_t c) { return simd::Soa3{&corner[3 * c * t], &corner[(3 * c + 1) * t], &corner[(3 * c + 2) * t]}; };

  std::vector<double> area(t);
  k.triangle_areas(tri(0), tri(1), tri(2), t, area.data());
  std::vector<double> cum(t);
  std::partial_sum(area.begin(), area.end(), cum.begin());
  const double total = cum.back();
  if (!(total > 0)) throw Error(ErrorKind::EmptyMesh, "mesh has zero surface area");

  std::vector<double> picked(9 * n), w(3 * n);
  for (std::size_t j = 0; j < n; ++j) {
    const double u = rng.uniform01() * total;
    std::size_t i = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (i == t) i = t - 1;
    const double s = std::sqrt(rng.uniform01());
    const double r2 = rng.uniform01();
    w[j] = 1.0 - s;
    w[n + j] = s * (1.0 - r2);
    w[2 * n + j] = s * r2;
    for (std::size_t q = 0; q < 9; ++q) picked[q * n + j] = corner[q * t + i];
  }
  auto at = [&](std::size_t c) { return simd::Soa3{&picked[3 * c * n], &picked[(3 * c + 1) * n], &picked[(3 * c + 2) * n]}; };

  PointCloud out;
  out.mode = mode;
  out.seed = rng.seed();
  out.x.resize(n);
  out.y.resize(n);
  out.z.resize(n);
  if (n == 0) return out;
  k.barycentric(at(0), at(1), at(2), w.data(), w.data() + n, w.data() + 2 * n, n, out.x.data(), out.y.data(),
                out.z.data());

  double* axes[3] = {out.x.data(), out.y.data(), out.z.data()};
  if (mode == NormMode::UnitCube) {
    double lo[3], hi[3], extent = 0;
    for (int a = 0; a < 3; ++a) {
      k.bounds(axes[a], n, &lo[a], &hi[a]);
      extent = std::max(extent, hi[a] - lo[a]);
    }
    if (!(extent > 0)) throw Error(ErrorKind::EmptyMesh, "sampled points coincide");
    for (int a = 0; a < 3; ++a) k.affine(axes[a], n, lo[a], extent);
  } else {
    for (double* v : axes) k.affine(v, n, k.striped_sum(v, n) / static_cast<double>(n), 1.0);
    const double r = k.max_norm({out.x.data(), out.y.data(), out.z.data()}, n);
    if (!(r > 0)) throw Error(ErrorKind::EmptyMesh, "sampled points coincide");
    for (double* v : axes) k.affine(v, n, 0.0, r);
  }
  return out;
}

std::string to_xyz(const PointCloud& c) {
  std::string out;
  out.reserve(c.size() * 60);
  char buf[32];
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double v[3] = {c.x[i], c.y[i], c.z[i]};
    for (int a = 0; a < 3; ++a) {
      if (a > 0) out += ' ';
      const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v[a]);
      out.append(buf, end);
    }
    out += '\n';
  }
  return out;
}

std::string to_f32(const PointCloud& c) {
  std::string out(c.size() * 3 * sizeof(float), '\0');
  char* p = out.data();
  for (std::size_t i = 0; i < c.size(); ++i)
    for (double v : {c.x[i], c.y[i], c.z[i]}) {
      const float f = static_cast<float>(v);
      std::memcpy(p, &f, sizeof f);
      p += sizeof f;
    }
  return out;
}

namespace {

struct PlaneFace {
  std::vector<ortho::Loop> loops;  // doubled plane coordinates
  ortho::IRect box;
};

// 1 inside, 0 outside, -1 on an edge. Coordinates are doubled.
int locate(const PlaneFace& f, ortho::IPoint p) {
  if (p.x < f.box.x0 || p.x > f.box.x1 || p.y < f.box.y0 || p.y > f.box.y1) return 0;
  bool in = false;
  for (const ortho::Loop& l : f.loops) {
    for (std::size_t i = 0; i < l.size(); ++i) {
      const ortho::IPoint& a = l[i];
      const ortho::IPoint& b = l[(i + 1) % l.size()];
      if (p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) && p.y >= std::min(a.y, b.y) &&
          p.y <= std::max(a.y, b.y))
        return -1;
      if (a.x == b.x && (a.y > p.y) != (b.y > p.y) && a.x > p.x) in = !in;
    }
  }
  return in ? 1 : 0;
}

}  // namespace

std::vector<std::size_t> exterior_faces(const brep::BRepSolid& s) {
  std::vector<PlaneFace> faces(s.faces.size());
  for (std::size_t i = 0; i < s.faces.size(); ++i) {
    PlaneFace& pf = faces[i];
    pf.box = {std::numeric_limits<ortho::Coord>::max(), std::numeric_limits<ortho::Coord>::max(),
              std::numeric_limits<ortho::Coord>::min(), std::numeric_limits<ortho::Coord>::min()};
    for (ortho::Loop l : brep::face_loops(s, s.faces[i])) {
      for (ortho::IPoint& p : l) {
        p = {2 * p.x, 2 * p.y};
        pf.box = {std::min(pf.box.x0, p.x), std::min(pf.box.y0, p.y), std::max(pf.box.x1, p.x), std::max(pf.box.y1, p.y)};
      }
      pf.loops.push_back(std::move(l));
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.faces.size(); ++i) {
    const brep::Plane& pl = s.faces[i].plane;
    bool escapes = false;
    for (const ortho::IRect& r : brep::face_region(s, s.faces[i]).rectangles()) {
      const ortho::IPoint c{r.x0 + r.x1, r.y0 + r.y1};
      bool blocked = false;
      for (std::size_t j = 0; j < s.faces.size() && !blocked; ++j) {
        const brep::Plane& q = s.faces[j].plane;
        if (j == i || q.axis != pl.axis || (q.offset - pl.offset) * pl.sign <= 0) continue;
        blocked = locate(faces[j], c) != 0;
      }
      if (!blocked) {
        escapes = true;
        break;
      }
    }
    if (escapes) out.push_back(i);
  }
  return out;
}

brep::BRepSolid remove_faces(const brep::BRepSolid& s, std::vector<std::size_t> faces) {
  std::sort(faces.begin(), faces.end());
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
  brep::BRepSolid out;
  out.vertices = s.vertices;
  out.label = brep::Label::Defect;
  std::size_t next = 0;
  for (std::size_t i = 0; i < s.faces.size(); ++i) {
    if (next < faces.size() && faces[next] == i) {
      ++next;
      continue;
    }
    out.faces.push_back(s.faces[i]);
  }
  return out;
}

brep::BRepSolid inject_defect(const brep::BRepSolid& s, SeededRng& rng) {
  if (s.label == brep::Label::Defect) throw Error(ErrorKind::AlreadyDefect, "solid is already labelled DEFECT");
  std::vector<std::size_t> pool = exterior_faces(s);
  if (pool.empty()) throw Error(ErrorKind::BooleanFailure, "solid has no exterior face");
  const std::size_t k = std::min<std::size_t>(1 + rng.bounded(3), pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.bounded(static_cast<std::uint32_t>(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return remove_faces(s, pool);
}

std::string defect_id(const std::string& id, int k) { return id + "_def" + std::to_string(k); }

bool is_defect_name(const std::string& filename) { return filename.find("_def") != std::string::npos; }

LabelVector oracle_labels(const BuildingMeta& meta) {
  LabelVector l;
  const int s = meta.storey_count;
  l.storey = s;
  l.room_total = s * (s + 1) / 2;
  for (int i = 0; i < kMaxStoreys; ++i) l.room_per_floor[static_cast<std::size_t>(i)] = std::max(s - i, 0);
  l.avg_area = meta.avg_room_area;
  return l;
}

std::string id_of(const std::string& filename) {
  std::string name = filename;
  const auto slash = name.find_last_of("/\\");
  if (slash != std::string::npos) name.erase(0, slash + 1);
  for (const char* ext : {".brep.json", ".meta.json", ".xyz", ".f32", ".obj", ".json", ".ply"}) {
    const std::size_t len = std::strlen(ext);
    if (name.size() > len && name.compare(name.size() - len, len, ext) == 0) {
      name.resize(name.size() - len);
      break;
    }
  }
  return name;
}

RegressionMetrics eval_regression(const std::vector<RegressionRow>& predictions, const std::vector<RegressionRow>& truths) {
  std::map<std::string, const RegressionRow*> truth_by_id;
  for (const RegressionRow& t : truths)
    if (!truth_by_id.emplace(id_of(t.filename), &t).second)
      throw Error(ErrorKind::Join, "duplicate truth id " + id_of(t.filename));
  std::map<std::string, const RegressionRow*> pred_by_id;
  for (const RegressionRow& p : predictions)
    if (!pred_by_id.emplace(id_of(p.filename), &p).second)
      throw Error(ErrorKind::Join, "duplicate prediction id " + id_of(p.filename));

  std::vector<std::string> no_truth, no_pred;
  for (const auto& [id, p] : pred_by_id)
    if (!truth_by_id.count(id)) no_truth.push_back(id);
  for (const auto& [id, t] : truth_by_id)
    if (!pred_by_id.count(id)) no_pred.push_back(id);
  if (!no_truth.empty() || !no_pred.empty()) {
    std::string msg;
    auto list = [&](const char* what, const std::vector<std::string>& ids) {
      if (ids.empty()) return;
      msg += std::string(msg.empty() ? "" : "; ") + what + ":";
      for (const std::string& id : ids) msg += " " + id;
    };
    list("no truth for", no_truth);
    list("no prediction for", no_pred);
    throw Error(ErrorKind::Join, msg);
  }

  RegressionMetrics m;
  m.count = pred_by_id.size();
  if (m.count == 0) return m;
  double exact = 0, storey = 0, roomtot = 0, roomtot_sq = 0, area = 0, perfloor = 0;
  for (const auto& [id, p] : pred_by_id) {
    const RegressionRow& t = *truth_by_id.at(id);
    std::array<double, kMaxStoreys> real = t.room_per_floor;
    if (!t.has_per_floor) {
      BuildingMeta meta;
      meta.storey_count = static_cast<int>(std::lround(t.storey));
      const LabelVector l = oracle_labels(meta);
      real = l.room_per_floor;
    }
    if (std::lround(p->storey) == std::lround(t.storey)) exact += 1;
    storey += std::abs(p->storey - t.storey);
    const double e = p->room_total - t.room_total;
    roomtot += std::abs(e);
    roomtot_sq += e * e;
    area += std::abs(p->avg_area - t.avg_area);
    double floor_sum = 0;
    for (std::size_t i = 0; i < real.size(); ++i) floor_sum += std::abs(p->room_per_floor[i] - real[i]);
    perfloor += floor_sum / kMaxStoreys;
  }
  const double n = static_cast<double>(m.count);
  m.storey_accuracy = exact / n;
  m.storey_mae = storey / n;
  m.roomtot_mae = roomtot / n;
  m.roomtot_rmse = std::sqrt(roomtot_sq / n);
  m.avgarea_mae = area / n;
  m.perfloor_mae = perfloor / n;
  return m;
}

BinaryMetrics binary_metrics(long tp, long fn, long fp, long tn) {
  BinaryMetrics m{tp, fn, fp, tn};
  auto ratio = [&](long num, long den) {
    if (den == 0) {
      m.degenerate = true;
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  m.accuracy = ratio(tp + tn, tp + fn + fp + tn);
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  m.f1 = ratio(2 * tp, 2 * tp + fp + fn);
  return m;
}

BinaryMetrics eval_binary(const std::vector<BinaryRow>& predictions) {
  long tp = 0, fn = 0, fp = 0, tn = 0;
  for (const BinaryRow& r : predictions) {
    const bool truth = is_defect_name(r.filename);
    const bool pred = r.prediction == brep::Label::Defect;
    if (truth && pred) ++tp;
    if (truth && !pred) ++fn;
    if (!truth && pred) ++fp;
    if (!truth && !pred) ++tn;
  }
  return binary_metrics(tp, fn, fp, tn);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::vector<std::string>> rows_of(const std::string& text, const std::vector<std::string>& header) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  bool seen_header = false;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split(line);
    if (!seen_header) {
      if (cells != header) throw Error(ErrorKind::Parse, "unexpected CSV header: " + trim(line));
      seen_header = true;
      continue;
    }
    if (cells.size() != header.size())
      throw Error(ErrorKind::Parse, "line " + std::to_string(n) + ": expected " + std::to_string(header.size()) + " columns");
    rows.push_back(std::move(cells));
  }
  if (!seen_header) throw Error(ErrorKind::Parse, "missing CSV header");
  return rows;
}

double number(const std::string& cell, int line) {
  double v = 0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || end != cell.data() + cell.size())
    throw Error(ErrorKind::Parse, "row " + std::to_string(line) + ": '" + cell + "' is not a number");
  return v;
}

std::string fmt(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

const std::vector<std::string>& regression_header() {
  static const std::vector<std::string> h = [] {
    std::vector<std::string> v = {"filename", "pred_storey", "pred_room_tot", "pred_avg_area"};
    for (int i = 1; i <= kMaxStoreys; ++i) v.push_back("pred_room_per_" + std::to_string(i));
    return v;
  }();
  return h;
}

}  // namespace

std::vector<RegressionRow> parse_regression_csv(const std::string& text) {
  std::vector<RegressionRow> out;
  int line = 0;
  for (const auto& cells : rows_of(text, regression_header())) {
    ++line;
    RegressionRow r;
    r.filename = cells[0];
    r.storey = number(cells[1], line);
    r.room_total = number(cells[2], line);
    r.avg_area = number(cells[3], line);
    const auto empty = std::count_if(cells.begin() + 4, cells.end(), [](const std::string& c) { return c.empty(); });
    if (empty == kMaxStoreys) {
      r.has_per_floor = false;
    } else {
      for (std::size_t i = 0; i < kMaxStoreys; ++i) r.room_per_floor[i] = number(cells[4 + i], line);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string regression_csv(const std::vector<RegressionRow>& rows) {
  std::string out;
  for (std::size_t i = 0; i < regression_header().size(); ++i) out += (i ? "," : "") + regression_header()[i];
  out += '\n';
  for (const RegressionRow& r : rows) {
    out += r.filename + "," + fmt(r.storey) + "," + fmt(r.room_total) + "," + fmt(r.avg_area);
    for (double v : r.room_per_floor) out += "," + (r.has_per_floor ? fmt(v) : std::string());
    out += '\n';
  }
  return out;
}

std::vector<BinaryRow> parse_binary_csv(const std::string& text) {
  std::vector<BinaryRow> out;
  int line = 0;
  for (const auto& cells : rows_of(text, {"filename", "prediction"})) {
    ++line;
    BinaryRow r{cells[0], brep::Label::Good};
    if (cells[1] == "DEFECT") {
      r.prediction = brep::Label::Defect;
    } else if (cells[1] != "GOOD") {
      throw Error(ErrorKind::Parse, "row " + std::to_string(line) + ": unknown label '" + cells[1] + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string binary_csv(const std::vector<BinaryRow>& rows) {
  std::string out = "filename,prediction\n";
  for (const BinaryRow& r : rows) out += r.filename + "," + brep::to_string(r.prediction) + "\n";
  return out;
}

RegressionRow truth_row(const BuildingMeta& meta) {
  RegressionRow r;
  r.filename = meta.id;
  r.storey = meta.storey_count;
  r.room_total = meta.room_total;
  r.avg_area = meta.avg_room_area;
  for (std::size_t i = 0; i < kMaxStoreys; ++i) r.room_per_floor[i] = meta.room_per_floor[i];
  return r;
}

}  // namespace brepforge::mltasks
