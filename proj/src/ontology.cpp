// SPDX-License-Identifier: Apache-2.0

#include "odal/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <span>

#include "odal/error.hpp"
#include "odal/kernels/kernels.hpp"
#include "odal/resources.hpp"

namespace odal {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::kOntologyInvalid, what); }

std::string require_string(const nlohmann::json& v, const std::string& where) {
  if (!v.is_string()) invalid(where + " must be a string");
  return v.get<std::string>();
}

}  // namespace

std::string normalize_token(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  std::string out(text.substr(begin, end - begin));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

CabinOntology CabinOntology::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) invalid("document must be a JSON object");
  for (const char* key : {"positions", "undefined", "classes"}) {
    if (!doc.contains(key)) invalid(std::string("missing key \"") + key + "\"");
  }
  CabinOntology o;
  o.undefined_ = require_string(doc.at("undefined"), "undefined");
  if (normalize_token(o.undefined_).empty()) invalid("undefined label is empty");

  const auto& positions = doc.at("positions");
  if (!positions.is_array()) invalid("positions must be an array");
  auto add_position = [&](const std::string& p) {
    const std::string key = normalize_token(p);
    if (key.empty()) invalid("empty position");
    if (!o.position_index_.emplace(key, p).second) invalid("duplicate position \"" + p + "\"");
    o.positions_.push_back(p);
  };
  for (const auto& p : positions) {
    const std::string name = require_string(p, "positions[]");
    if (normalize_token(name) == normalize_token(o.undefined_)) continue;
    add_position(name);
  }
  add_position(o.undefined_);

  if (doc.contains("mirror")) {
    const auto& mirror = doc.at("mirror");
    if (!mirror.is_object()) invalid("mirror must be an object");
    for (const auto& [from_raw, to_json] : mirror.items()) {
      const auto from = o.find_position(from_raw);
      const auto to = o.find_position(require_string(to_json, "mirror value"));
      if (!from || !to) invalid("mirror entry \"" + from_raw + "\" references an unknown position");
      for (const auto& [a, b] : {std::pair{*from, *to}, std::pair{*to, *from}}) {
        auto [it, inserted] = o.mirror_.emplace(a, b);
        if (!inserted && it->second != b) invalid("mirror map is not an involution at \"" + a + "\"");
      }
    }
  }
  // An entry a->b with a second entry b->c (c != a) would break involution;
  // the symmetric insertion above already rejects that, but check the whole map.
  for (const auto& [a, b] : o.mirror_) {
    const auto back = o.mirror_.find(b);
    if (back == o.mirror_.end() || back->second != a) invalid("mirror map is not an involution at \"" + a + "\"");
  }

  const auto& classes = doc.at("classes");
  if (!classes.is_array()) invalid("classes must be an array");
  for (const auto& c : classes) {
    const std::string name = normalize_token(require_string(c, "classes[]"));
    if (name.empty()) invalid("empty class name");
    if (!o.class_index_.emplace(name, name).second) invalid("duplicate class \"" + name + "\"");
    o.classes_.push_back(name);
  }

  if (doc.contains("aliases")) {
    const auto& aliases = doc.at("aliases");
    if (!aliases.is_object()) invalid("aliases must be an object");
    for (const auto& [alias_raw, target_json] : aliases.items()) {
      const std::string alias = normalize_token(alias_raw);
      const std::string target = normalize_token(require_string(target_json, "alias target"));
      if (alias.empty()) invalid("empty alias");
      if (!o.class_index_.contains(target)) invalid("alias \"" + alias + "\" targets unknown class \"" + target + "\"");
      if (o.class_index_.contains(alias)) invalid("alias \"" + alias + "\" collides with a canonical class");
      if (!o.aliases_.emplace(alias, target).second) invalid("duplicate alias \"" + alias + "\"");
    }
  }
  return o;
}

CabinOntology CabinOntology::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open ontology file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    invalid(path.string() + ": " + e.what());
  }
  return from_json(doc);
}

const CabinOntology& CabinOntology::builtin() {
  static const CabinOntology instance = from_json(nlohmann::json::parse(resources::ontology_json));
  return instance;
}

nlohmann::json CabinOntology::to_json() const {
  nlohmann::json doc;
  nlohmann::json positions = nlohmann::json::array();
  for (const auto& p : positions_) {
    if (p != undefined_) positions.push_back(p);
  }
  doc["positions"] = positions;
  doc["undefined"] = undefined_;
  nlohmann::json mirror = nlohmann::json::object();
  for (const auto& [a, b] : mirror_) {
    if (a < b) mirror[a] = b;
  }
  doc["mirror"] = mirror;
  doc["classes"] = classes_;
  doc["aliases"] = aliases_;
  return doc;
}

std::string CabinOntology::checksum() const {
  const std::string canonical = to_json().dump();
  const auto crc = kernels::crc32c(std::as_bytes(std::span(canonical.data(), canonical.size())));
  char buf[9];
  std::snprintf(buf, sizeof(buf), "%08x", crc);
  return buf;
}

std::optional<std::string> CabinOntology::canonicalize_class(std::string_view name) const {
  const std::string key = normalize_token(name);
  if (const auto it = class_index_.find(key); it != class_index_.end()) return it->second;
  if (const auto it = aliases_.find(key); it != aliases_.end()) return it->second;
  return std::nullopt;
}

std::optional<std::string> CabinOntology::find_position(std::string_view label) const {
  const auto it = position_index_.find(normalize_token(label));
  if (it == position_index_.end()) return std::nullopt;
  return it->second;
}

std::string CabinOntology::validate_position(std::string_view label) const {
  if (auto p = find_position(label)) return *p;
  throw Error(ErrorCode::kUnknownPosition, "\"" + std::string(label) + "\"");
}

const std::string& CabinOntology::mirror_position(std::string_view canonical) const {
  if (const auto it = mirror_.find(std::string(canonical)); it != mirror_.end()) return it->second;
  const auto self = position_index_.find(normalize_token(canonical));
  if (self == position_index_.end()) {
    throw Error(ErrorCode::kUnknownPosition, "\"" + std::string(canonical) + "\"");
  }
  return self->second;
}

bool CabinOntology::is_position(std::string_view canonical) const {
  return std::find(positions_.begin(), positions_.end(), canonical) != positions_.end();
}

bool CabinOntology::is_class(std::string_view canonical) const {
  return class_index_.contains(std::string(canonical));
}

}  // namespace odal
