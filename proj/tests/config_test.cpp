#include "brepforge/config.hpp"

#include <gtest/gtest.h>

#include <functional>

#include "brepforge/error.hpp"

namespace {

using namespace brepforge;
using config::GenConfig;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

TEST(ParsePairs, CommentsBlanksAndWhitespace) {
  const auto p = config::parse_pairs("# header\n\n grammar.max_rooms = 7  # trailing\nfilter.min_room_area=9\r\n");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.at("grammar.max_rooms"), "7");
  EXPECT_EQ(p.at("filter.min_room_area"), "9");
}

TEST(ParsePairs, MalformedLines) {
  EXPECT_EQ(kind_of([] { config::parse_pairs("no equals sign\n"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { config::parse_pairs("a =\n"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { config::parse_pairs("a = 1\na = 2\n"); }), ErrorKind::Config);
}

TEST(Apply, LengthsLandOnTheirGrids) {
  GenConfig c;
  config::apply(c, "grammar.room_side_min", "2.5");
  EXPECT_EQ(c.grammar.room_side_min, 25);
  config::apply(c, "storey.wall_thickness", "0.25");
  EXPECT_EQ(c.building.storey.wall_thickness, 250);
  config::apply(c, "assembly.entrance_width", "1.5");
  EXPECT_EQ(c.building.entrance_width, 1500);
  config::apply(c, "filter.max_aspect_ratio", "3.5");
  EXPECT_EQ(c.filter.max_aspect_ratio, 3.5);
  config::apply(c, "output.obj", "false");
  EXPECT_FALSE(c.write_obj);
}

TEST(Apply, BadValues) {
  GenConfig c;
  EXPECT_EQ(kind_of([&] { config::apply(c, "grammar.nope", "1"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([&] { config::apply(c, "grammar.room_side_min", "2.55"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([&] { config::apply(c, "storey.wall_thickness", "0.2005"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([&] { config::apply(c, "grammar.max_rooms", "7.5"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([&] { config::apply(c, "filter.min_room_area", "big"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([&] { config::apply(c, "output.obj", "yes"); }), ErrorKind::Config);
}

TEST(Canonical, DefaultsRoundTripThroughText) {
  const GenConfig d;
  const std::string text = config::canonical_text(d);
  GenConfig c;
  config::apply(c, "grammar.max_rooms", "3");
  config::apply(c, config::parse_pairs(text));
  EXPECT_EQ(config::canonical_text(c), text);
  EXPECT_NE(text.find("grammar.max_rooms=10\n"), std::string::npos);
  EXPECT_NE(text.find("filter.min_room_area=8\n"), std::string::npos);
  EXPECT_NE(text.find("storey.wall_thickness=0.2\n"), std::string::npos);
}

TEST(Canonical, KeysAreSorted) {
  const std::string text = config::canonical_text(GenConfig{});
  std::string prev;
  std::size_t at = 0;
  while (at < text.size()) {
    const auto nl = text.find('\n', at);
    const std::string key = text.substr(at, text.find('=', at) - at);
    EXPECT_LT(prev, key);
    prev = key;
    at = nl + 1;
  }
}

TEST(Hash, Fnv1aReferenceVectors) {
  EXPECT_EQ(config::fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(config::fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(config::fnv1a64("foobar"), 0x85944171f73967e8ull);
}

TEST(Hash, StableAndSensitive) {
  GenConfig a, b;
  EXPECT_EQ(config::config_hash(a), config::config_hash(b));
  EXPECT_EQ(config::config_hash(a).size(), 16u);
  config::apply(b, "filter.min_room_area", "9");
  EXPECT_NE(config::config_hash(a), config::config_hash(b));
  // The same value spelled differently hashes the same.
  config::apply(a, "filter.min_room_area", "9.0");
  EXPECT_EQ(config::config_hash(a), config::config_hash(b));
}

TEST(Validate, InconsistentValuesAreRejected) {
  GenConfig c;
  config::apply(c, "filter.min_room_area", "100");
  EXPECT_THROW(c.validate(), Error);
  EXPECT_NO_THROW(GenConfig{}.validate());
}

}  // namespace
