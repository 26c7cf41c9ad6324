#include "brepforge/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "brepforge/error.hpp"

namespace brepforge::dataset {

using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little, "NPY writer assumes a little-endian host");

double metres(brep::Mm mm) { return static_cast<double>(mm) / 1000.0; }

brep::Mm to_mm(double m) { return static_cast<brep::Mm>(std::llround(m * 1000.0)); }

json rect_json(const geom2d::Rect& r) {
  return json::array({geom2d::to_metres(r.min.x), geom2d::to_metres(r.min.y), geom2d::to_metres(r.max.x),
                      geom2d::to_metres(r.max.y)});
}

geom2d::Rect rect_of(const json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorKind::Parse, "rectangle must have 4 numbers");
  return {{geom2d::from_metres(j[0].get<double>()), geom2d::from_metres(j[1].get<double>())},
          {geom2d::from_metres(j[2].get<double>()), geom2d::from_metres(j[3].get<double>())}};
}

const char* axis_name(int axis) { return axis == 0 ? "x" : axis == 1 ? "y" : "z"; }

int axis_of(const std::string& s) {
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  throw Error(ErrorKind::Parse, "unknown plane axis '" + s + "'");
}

json meta_to_json(const BuildingMeta& m) {
  json rooms = json::array();
  for (const auto& storey : m.rooms) {
    json s = json::array();
    for (const RoomDims& d : storey) s.push_back(json::array({d.width, d.depth}));
    rooms.push_back(std::move(s));
  }
  json openings = json::array();
  for (const OpeningMeta& o : m.openings) {
    openings.push_back({{"storey", o.storey},
                        {"kind", o.kind},
                        {"orientation", o.orientation},
                        {"width", o.width},
                        {"sill", o.sill},
                        {"height", o.height}});
  }
  return {{"id", m.id},
          {"seed", m.seed},
          {"storey_count", m.storey_count},
          {"room_total", m.room_total},
          {"room_per_floor", m.room_per_floor},
          {"rooms", std::move(rooms)},
          {"openings", std::move(openings)},
          {"avg_room_area", m.avg_room_area},
          {"footprint_area", m.footprint_area}};
}

BuildingMeta meta_from_json(const json& j) {
  BuildingMeta m;
  m.id = j.at("id").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.storey_count = j.at("storey_count").get<int>();
  m.room_total = j.at("room_total").get<int>();
  const auto per = j.at("room_per_floor").get<std::vector<int>>();
  if (per.size() != static_cast<std::size_t>(kMaxStoreys)) throw Error(ErrorKind::Parse, "room_per_floor needs 10 entries");
  std::copy(per.begin(), per.end(), m.room_per_floor.begin());
  for (const json& s : j.at("rooms")) {
    std::vector<RoomDims> dims;
    for (const json& d : s) dims.push_back({d.at(0).get<double>(), d.at(1).get<double>()});
    m.rooms.push_back(std::move(dims));
  }
  for (const json& o : j.at("openings")) {
    m.openings.push_back({o.at("storey").get<int>(), o.at("kind").get<std::string>(),
                          o.at("orientation").get<std::string>(), o.at("width").get<double>(),
                          o.at("sill").get<double>(), o.at("height").get<double>()});
  }
  m.avg_room_area = j.at("avg_room_area").get<double>();
  m.footprint_area = j.at("footprint_area").get<double>();
  return m;
}

template <typename F>
auto parsing(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string(what) + ": " + e.what());
  }
}

}  // namespace

void FilterConfig::validate() const {
  if (!(min_room_area > 0) || !(min_room_area < max_room_area))
    throw Error(ErrorKind::Config, "filter needs 0 < min_room_area < max_room_area");
  if (!(min_room_side > 0)) throw Error(ErrorKind::Config, "filter min_room_side must be positive");
  if (!(max_aspect_ratio >= 1)) throw Error(ErrorKind::Config, "filter max_aspect_ratio must be >= 1");
}

RoomCheck check_rooms(const BuildingMeta& meta, const FilterConfig& cfg) {
  RoomCheck out;
  for (std::size_t k = 0; k < meta.rooms.size(); ++k) {
    for (std::size_t i = 0; i < meta.rooms[k].size(); ++i) {
      const RoomDims& d = meta.rooms[k][i];
      const double area = d.width * d.depth;
      const double lo = std::min(d.width, d.depth), hi = std::max(d.width, d.depth);
      auto add = [&](std::string why) { out.violations.push_back({static_cast<int>(k) + 1, i, std::move(why)}); };
      if (area < cfg.min_room_area) add("area below minimum");
      if (area > cfg.max_room_area) add("area above maximum");
      if (lo < cfg.min_room_side) add("side below minimum");
      if (lo > 0 && hi / lo > cfg.max_aspect_ratio) add("aspect ratio above maximum");
    }
  }
  out.ok = out.violations.empty();
  return out;
}

SolidCheck check_solid(const brep::BRepSolid& solid) {
  if (solid.faces.empty()) return {false, "solid has no faces"};
  const brep::WatertightReport r = brep::check_watertight(solid);
  return {r.ok, r.ok ? std::string() : r.message()};
}

const char* to_string(DiscardReason r) {
  switch (r) {
    case DiscardReason::GrowthFailed: return "growth-failed";
    case DiscardReason::BooleanFailure: return "boolean-failure";
    case DiscardReason::RoomFilter: return "room-filter";
    case DiscardReason::UnreachableRoom: return "unreachable-room";
  }
  return "unknown";
}

namespace {

DiscardReason reason_of(const std::string& s) {
  for (DiscardReason r : {DiscardReason::GrowthFailed, DiscardReason::BooleanFailure, DiscardReason::RoomFilter,
                          DiscardReason::UnreachableRoom})
    if (s == to_string(r)) return r;
  throw Error(ErrorKind::Parse, "unknown discard reason '" + s + "'");
}

}  // namespace

PlanRecord plan_record(const assembly::Building& b) {
  PlanRecord p;
  if (!b.storeys.empty()) p.core = b.storeys.front().core;
  for (const storey::StoreyPlan& s : b.storeys) {
    p.footprints.push_back(s.footprint);
    p.rooms.push_back(s.rooms);
  }
  return p;
}

std::string brep_json(const std::string& id, const brep::BRepSolid& solid, const PlanRecord& plan) {
  json vertices = json::array();
  for (const brep::IVec3& v : solid.vertices) vertices.push_back(json::array({metres(v[0]), metres(v[1]), metres(v[2])}));
  json faces = json::array();
  for (const brep::Face& f : solid.faces) {
    faces.push_back({{"plane", {{"axis", axis_name(f.plane.axis)}, {"sign", f.plane.sign}, {"offset", metres(f.plane.offset)}}},
                     {"outer", f.outer},
                     {"inner", f.inner}});
  }
  json storeys = json::array();
  for (std::size_t k = 0; k < plan.footprints.size(); ++k) {
    json fp = json::array();
    for (const geom2d::Point2& p : plan.footprints[k].vertices)
      fp.push_back(json::array({geom2d::to_metres(p.x), geom2d::to_metres(p.y)}));
    json rooms = json::array();
    if (k < plan.rooms.size())
      for (const geom2d::Rect& r : plan.rooms[k]) rooms.push_back(rect_json(r));
    storeys.push_back({{"footprint", std::move(fp)}, {"rooms", std::move(rooms)}});
  }
  const json doc = {{"id", id},
                    {"units", "m"},
                    {"label", brep::to_string(solid.label)},
                    {"vertices", std::move(vertices)},
                    {"faces", std::move(faces)},
                    {"building", {{"core", rect_json(plan.core)}, {"storeys", std::move(storeys)}}}};
  return doc.dump() + "\n";
}

std::string brep_json(const assembly::Building& b) { return brep_json(b.meta.id, b.solid, plan_record(b)); }

BrepFile parse_brep_json(const std::string& text) {
  return parsing("brep json", [&] {
    const json doc = json::parse(text);
    if (doc.at("units").get<std::string>() != "m") throw Error(ErrorKind::Parse, "units must be \"m\"");
    BrepFile out;
    out.id = doc.at("id").get<std::string>();
    const std::string label = doc.at("label").get<std::string>();
    if (label == "GOOD") {
      out.solid.label = brep::Label::Good;
    } else if (label == "DEFECT") {
      out.solid.label = brep::Label::Defect;
    } else {
      throw Error(ErrorKind::Parse, "unknown label '" + label + "'");
    }
    for (const json& v : doc.at("vertices")) {
      if (v.size() != 3) throw Error(ErrorKind::Parse, "vertex must have 3 coordinates");
      out.solid.vertices.emplace_back(to_mm(v[0].get<double>()), to_mm(v[1].get<double>()), to_mm(v[2].get<double>()));
    }
    const std::size_t nv = out.solid.vertices.size();
    auto ids = [&](const json& j) {
      auto loop = j.get<std::vector<std::uint32_t>>();
      for (std::uint32_t i : loop)
        if (i >= nv) throw Error(ErrorKind::Parse, "vertex index out of range");
      return loop;
    };
    for (const json& f : doc.at("faces")) {
      brep::Face face;
      const json& pl = f.at("plane");
      face.plane = {axis_of(pl.at("axis").get<std::string>()), pl.at("sign").get<int>(), to_mm(pl.at("offset").get<double>())};
      if (face.plane.sign != 1 && face.plane.sign != -1) throw Error(ErrorKind::Parse, "plane sign must be +1 or -1");
      face.outer = ids(f.at("outer"));
      for (const json& h : f.at("inner")) face.inner.push_back(ids(h));
      out.solid.faces.push_back(std::move(face));
    }
    if (doc.contains("building")) {
      const json& b = doc.at("building");
      out.plan.core = rect_of(b.at("core"));
      for (const json& s : b.at("storeys")) {
        geom2d::Footprint fp;
        for (const json& p : s.at("footprint"))
          fp.vertices.push_back({geom2d::from_metres(p.at(0).get<double>()), geom2d::from_metres(p.at(1).get<double>())});
        std::vector<geom2d::Rect> rooms;
        for (const json& r : s.at("rooms")) rooms.push_back(rect_of(r));
        out.plan.footprints.push_back(std::move(fp));
        out.plan.rooms.push_back(std::move(rooms));
      }
    }
    return out;
  });
}

std::string meta_json(const BuildingMeta& meta) { return meta_to_json(meta).dump(2) + "\n"; }

BuildingMeta parse_meta_json(const std::string& text) {
  return parsing("meta json", [&] { return meta_from_json(json::parse(text)); });
}

Recomputed recompute(const PlanRecord& plan) {
  Recomputed r;
  r.storey_count = static_cast<int>(plan.footprints.size());
  for (const auto& rooms : plan.rooms) r.room_total += static_cast<int>(rooms.size());
  if (!plan.footprints.empty()) r.footprint_area = geom2d::polygon_area(plan.footprints.front());
  return r;
}

void export_building(const assembly::Building& b, const std::filesystem::path& dir, bool with_obj) {
  write_file(dir / (b.meta.id + ".brep.json"), brep_json(b));
  write_file(dir / (b.meta.id + ".meta.json"), meta_json(b.meta));
  if (with_obj) write_file(dir / (b.meta.id + ".obj"), brep::to_obj(brep::triangulate(b.solid)));
}

std::vector<double> meta_matrix(const DatasetMeta& ds) {
  std::vector<double> out;
  out.reserve(ds.records.size() * kMetaColumns);
  for (const BuildingMeta& m : ds.records) {
    out.push_back(m.storey_count);
    out.push_back(m.room_total);
    out.push_back(m.avg_room_area);
    out.push_back(m.footprint_area);
    for (int c : m.room_per_floor) out.push_back(c);
  }
  return out;
}

std::string npy_bytes(const std::vector<double>& values, std::size_t rows, std::size_t cols) {
  if (values.size() != rows * cols) throw Error(ErrorKind::Io, "matrix size does not match its shape");
  std::string header = "{'descr': '<f8', 'fortran_order': False, 'shape': (" + std::to_string(rows) + ", " +
                       std::to_string(cols) + "), }";
  // Magic (6) + version (2) + length (2) + header, padded to a multiple of 64.
  const std::size_t unpadded = 10 + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header += '\n';
  std::string out = "\x93NUMPY";
  out += '\x01';
  out += '\x00';
  const auto len = static_cast<std::uint16_t>(header.size());
  out += static_cast<char>(len & 0xff);
  out += static_cast<char>(len >> 8);
  out += header;
  const std::size_t at = out.size();
  out.resize(at + values.size() * sizeof(double));
  if (!values.empty()) std::memcpy(out.data() + at, values.data(), values.size() * sizeof(double));
  return out;
}

NpyMatrix parse_npy(const std::string& bytes) {
  if (bytes.size() < 10 || bytes.compare(0, 6, "\x93NUMPY") != 0) throw Error(ErrorKind::Parse, "not an NPY file");
  if (bytes[6] != 1 || bytes[7] != 0) throw Error(ErrorKind::Parse, "only NPY version 1.0 is supported");
  const std::size_t len = static_cast<unsigned char>(bytes[8]) | (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
  if (bytes.size() < 10 + len) throw Error(ErrorKind::Parse, "truncated NPY header");
  const std::string header = bytes.substr(10, len);
  static const std::regex descr(R"('descr':\s*'<f8')"), order(R"('fortran_order':\s*False)"),
      shape(R"('shape':\s*\((\d+),\s*(\d+)\))");
  std::smatch m;
  if (!std::regex_search(header, descr)) throw Error(ErrorKind::Parse, "dtype must be '<f8'");
  if (!std::regex_search(header, order)) throw Error(ErrorKind::Parse, "data must be C-ordered");
  if (!std::regex_search(header, m, shape)) throw Error(ErrorKind::Parse, "shape must be two-dimensional");
  NpyMatrix out;
  out.rows = std::stoull(m[1].str());
  out.cols = std::stoull(m[2].str());
  const std::size_t payload = out.rows * out.cols * sizeof(double);
  if (bytes.size() != 10 + len + payload) throw Error(ErrorKind::Parse, "payload size does not match the shape");
  out.values.resize(out.rows * out.cols);
  if (payload > 0) std::memcpy(out.values.data(), bytes.data() + 10 + len, payload);
  return out;
}

void write_meta_npy(const DatasetMeta& ds, const std::filesystem::path& path) {
  if (ds.records.empty()) throw Error(ErrorKind::EmptyDataset, "refusing to write an empty meta.npy");
  write_file(path, npy_bytes(meta_matrix(ds), ds.records.size(), kMetaColumns));
}

std::string dataset_meta_json(const DatasetMeta& ds) {
  json records = json::array();
  for (const BuildingMeta& m : ds.records) records.push_back(meta_to_json(m));
  json discards = json::array();
  for (const Discard& d : ds.discard_log) discards.push_back({{"seed", d.seed}, {"reason", to_string(d.reason)}});
  const json doc = {{"count", ds.records.size()}, {"records", std::move(records)}, {"discards", std::move(discards)}};
  return doc.dump(1) + "\n";
}

DatasetMeta parse_dataset_meta_json(const std::string& text) {
  return parsing("dataset meta json", [&] {
    const json doc = json::parse(text);
    DatasetMeta ds;
    for (const json& r : doc.at("records")) ds.records.push_back(meta_from_json(r));
    for (const json& d : doc.at("discards"))
      ds.discard_log.push_back({d.at("seed").get<std::uint64_t>(), reason_of(d.at("reason").get<std::string>())});
    return ds;
  });
}

std::string discards_csv(const DatasetMeta& ds) {
  std::string out = "seed,reason\n";
  for (const Discard& d : ds.discard_log) out += std::to_string(d.seed) + "," + to_string(d.reason) + "\n";
  return out;
}

int Histogram::total() const {
  int n = 0;
  for (const auto& [edge, count] : bins) n += count;
  return n;
}

double Histogram::mode() const {
  double best = 0;
  int best_count = -1;
  for (const auto& [edge, count] : bins)
    if (count > best_count) {
      best = edge;
      best_count = count;
    }
  return best;
}

int Stats::storey_mode() const {
  int best = 0, best_count = -1;
  for (const auto& [s, count] : storeys)
    if (count > best_count) {
      best = s;
      best_count = count;
    }
  return best;
}

Stats stats(const DatasetMeta& ds, double room_bin, double footprint_bin) {
  if (ds.records.empty()) throw Error(ErrorKind::EmptyDataset, "no records to summarize");
  Stats s;
  s.records = static_cast<int>(ds.records.size());
  s.room_area.bin_width = room_bin;
  s.footprint_area.bin_width = footprint_bin;
  for (int k = 2; k <= kMaxStoreys; ++k) s.storeys[k] = 0;
  auto bin = [](Histogram& h, double v) { ++h.bins[std::floor(v / h.bin_width) * h.bin_width]; };
  for (const BuildingMeta& m : ds.records) {
    ++s.storeys[m.storey_count];
    if (!m.rooms.empty())
      for (const RoomDims& d : m.rooms.front()) bin(s.room_area, d.width * d.depth);
    bin(s.footprint_area, m.footprint_area);
  }
  return s;
}

namespace {

std::string num(double v) {
  std::ostringstream o;
  o << v;
  return o.str();
}

}  // namespace

std::string stats_text(const Stats& s) {
  std::string out = "records: " + std::to_string(s.records) + "\n";
  out += "storey histogram (mode " + std::to_string(s.storey_mode()) + "):\n";
  for (const auto& [k, c] : s.storeys) out += "  " + std::to_string(k) + ": " + std::to_string(c) + "\n";
  auto hist = [&](const char* name, const Histogram& h) {
    out += std::string(name) + " histogram, m^2 (mode [" + num(h.mode()) + ", " + num(h.mode() + h.bin_width) + ")):\n";
    for (const auto& [edge, c] : h.bins)
      out += "  [" + num(edge) + ", " + num(edge + h.bin_width) + "): " + std::to_string(c) + "\n";
  };
  hist("room area", s.room_area);
  hist("footprint area", s.footprint_area);
  return out;
}

std::string stats_csv(const Stats& s) {
  std::string out = "histogram,lower,upper,count\n";
  for (const auto& [k, c] : s.storeys)
    out += "storeys," + std::to_string(k) + "," + std::to_string(k) + "," + std::to_string(c) + "\n";
  auto hist = [&](const char* name, const Histogram& h) {
    for (const auto& [edge, c] : h.bins)
      out += std::string(name) + "," + num(edge) + "," + num(edge + h.bin_width) + "," + std::to_string(c) + "\n";
  };
  hist("room_area", s.room_area);
  hist("footprint_area", s.footprint_area);
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::Io, "cannot read " + path.string());
  return data;
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.close();
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
}

}  // namespace brepforge::dataset
