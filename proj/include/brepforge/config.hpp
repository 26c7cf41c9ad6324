#pragma once

// Run configuration as flat `section.key = value` pairs. Lengths are metres,
// areas square metres.

#include <cstdint>
#include <map>
#include <string>

#include "brepforge/assembly.hpp"
#include "brepforge/dataset.hpp"
#include "brepforge/grammar.hpp"

namespace brepforge::config {

struct GenConfig {
  grammar::GrammarConfig grammar;
  assembly::BuildingConfig building;
  dataset::FilterConfig filter;
  bool write_obj = true;

  void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Throws Config on a
/// malformed line or a repeated key.
std::map<std::string, std::string> parse_pairs(const std::string& text);

/// Sets one key. Throws Config for an unknown key or a bad value.
void apply(GenConfig& cfg, const std::string& key, const std::string& value);
void apply(GenConfig& cfg, const std::map<std::string, std::string>& pairs);

/// Every key in sorted order with its current value, one `key=value` line
/// each.
std::string canonical_text(const GenConfig& cfg);

std::uint64_t fnv1a64(const std::string& data);
/// 16 lowercase hex digits of fnv1a64(canonical_text(cfg)).
std::string config_hash(const GenConfig& cfg);

}  // namespace brepforge::config
