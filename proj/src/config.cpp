#include "brepforge/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "brepforge/error.hpp"

namespace brepforge::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size() || !std::isfinite(out))
    throw Error(ErrorKind::Config, key + ": '" + v + "' is not a number");
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) throw Error(ErrorKind::Config, key + ": '" + v + "' is not an integer");
  return out;
}

// Metres to an integer count of `per_metre` units; the value must land on it.
std::int64_t quantize(const std::string& key, const std::string& v, double per_metre) {
  const double scaled = parse_double(key, v) * per_metre;
  const double r = std::round(scaled);
  if (std::abs(scaled - r) > 1e-6) throw Error(ErrorKind::Config, key + ": '" + v + "' is off the length grid");
  return static_cast<std::int64_t>(r);
}

std::string fmt(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string steps(std::int64_t s) { return fmt(static_cast<double>(s) / 10.0); }
std::string mm(std::int64_t m) { return fmt(static_cast<double>(m) / 1000.0); }

struct Key {
  std::function<void(GenConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const GenConfig&)> get;
};

template <typename Get>
Key step_key(Get get) {
  return {[get](GenConfig& c, const std::string& k, const std::string& v) { get(c) = quantize(k, v, 10.0); },
          [get](const GenConfig& c) { return steps(get(c)); }};
}

template <typename Get>
Key mm_key(Get get) {
  return {[get](GenConfig& c, const std::string& k, const std::string& v) { get(c) = quantize(k, v, 1000.0); },
          [get](const GenConfig& c) { return mm(get(c)); }};
}

template <typename Get>
Key int_key(Get get) {
  return {[get](GenConfig& c, const std::string& k, const std::string& v) { get(c) = static_cast<int>(parse_int(k, v)); },
          [get](const GenConfig& c) { return std::to_string(get(c)); }};
}

template <typename Get>
Key real_key(Get get) {
  return {[get](GenConfig& c, const std::string& k, const std::string& v) { get(c) = parse_double(k, v); },
          [get](const GenConfig& c) { return fmt(get(c)); }};
}

const std::map<std::string, Key>& keys() {
  static const std::map<std::string, Key> table = {
      {"grammar.core_width", step_key([](auto& c) -> auto& { return c.grammar.core_tube.max.x; })},
      {"grammar.core_depth", step_key([](auto& c) -> auto& { return c.grammar.core_tube.max.y; })},
      {"grammar.room_side_min", step_key([](auto& c) -> auto& { return c.grammar.room_side_min; })},
      {"grammar.room_side_max", step_key([](auto& c) -> auto& { return c.grammar.room_side_max; })},
      {"grammar.notch_gap", step_key([](auto& c) -> auto& { return c.grammar.notch_gap; })},
      {"grammar.min_shared_wall", step_key([](auto& c) -> auto& { return c.grammar.min_shared_wall; })},
      {"grammar.max_rooms", int_key([](auto& c) -> auto& { return c.grammar.max_rooms; })},
      {"grammar.retry_budget", int_key([](auto& c) -> auto& { return c.grammar.retry_budget; })},
      {"storey.wall_thickness", mm_key([](auto& c) -> auto& { return c.building.storey.wall_thickness; })},
      {"storey.height", mm_key([](auto& c) -> auto& { return c.building.storey.storey_height; })},
      {"storey.door_width", mm_key([](auto& c) -> auto& { return c.building.storey.door_width; })},
      {"storey.door_height", mm_key([](auto& c) -> auto& { return c.building.storey.door_height; })},
      {"storey.min_door_wall", step_key([](auto& c) -> auto& { return c.building.storey.min_door_wall; })},
      {"storey.min_window_wall",
       step_key([](auto& c) -> auto& { return c.building.storey.min_window_wall; })},
      {"assembly.slab_thickness", mm_key([](auto& c) -> auto& { return c.building.slab_thickness; })},
      {"assembly.ground_offset", mm_key([](auto& c) -> auto& { return c.building.ground_offset; })},
      {"assembly.entrance_min_wall", mm_key([](auto& c) -> auto& { return c.building.entrance_min_wall; })},
      {"assembly.entrance_width", mm_key([](auto& c) -> auto& { return c.building.entrance_width; })},
      {"assembly.entrance_height", mm_key([](auto& c) -> auto& { return c.building.entrance_height; })},
      {"assembly.entrance_clearance",
       mm_key([](auto& c) -> auto& { return c.building.entrance_clearance; })},
      {"filter.min_room_area", real_key([](auto& c) -> auto& { return c.filter.min_room_area; })},
      {"filter.max_room_area", real_key([](auto& c) -> auto& { return c.filter.max_room_area; })},
      {"filter.min_room_side", real_key([](auto& c) -> auto& { return c.filter.min_room_side; })},
      {"filter.max_aspect_ratio", real_key([](auto& c) -> auto& { return c.filter.max_aspect_ratio; })},
      {"output.obj",
       {[](GenConfig& c, const std::string& k, const std::string& v) {
          if (v == "true") {
            c.write_obj = true;
          } else if (v == "false") {
            c.write_obj = false;
          } else {
            throw Error(ErrorKind::Config, k + ": expected true or false");
          }
        },
        [](const GenConfig& c) { return std::string(c.write_obj ? "true" : "false"); }}},
  };
  return table;
}

}  // namespace

void GenConfig::validate() const {
  grammar.validate();
  building.validate();
  filter.validate();
}

std::map<std::string, std::string> parse_pairs(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Config, "line " + std::to_string(n) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw Error(ErrorKind::Config, "line " + std::to_string(n) + ": empty key or value");
    if (!out.emplace(key, value).second) throw Error(ErrorKind::Config, "line " + std::to_string(n) + ": repeated key " + key);
  }
  return out;
}

void apply(GenConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = keys().find(key);
  if (it == keys().end()) throw Error(ErrorKind::Config, "unknown key " + key);
  it->second.set(cfg, key, value);
}

void apply(GenConfig& cfg, const std::map<std::string, std::string>& pairs) {
  for (const auto& [k, v] : pairs) apply(cfg, k, v);
}

std::string canonical_text(const GenConfig& cfg) {
  std::string out;
  for (const auto& [k, key] : keys()) out += k + "=" + key.get(cfg) + "\n";
  return out;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const GenConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_text(cfg))));
  return buf;
}

}  // namespace brepforge::config
