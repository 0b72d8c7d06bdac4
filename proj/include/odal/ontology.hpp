// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace odal {

// Closed vocabulary of cabin positions and object classes.
//
// Positions use the dot-separated path form ("Seat.Row2.Middle"). Lookups are
// case-insensitive and ignore surrounding whitespace; the canonical spelling
// from the ontology file is what gets returned. The mirror map is stored
// symmetrically, positions without a counterpart mirror onto themselves.
class CabinOntology {
 public:
  // Keys: "positions", "undefined", "mirror", "classes", "aliases".
  static CabinOntology from_json(const nlohmann::json& doc);
  static CabinOntology load(const std::filesystem::path& path);
  // The ontology shipped in config/ontology.json.
  static const CabinOntology& builtin();

  nlohmann::json to_json() const;
  // Hex CRC-32C of the canonical JSON form; recorded in manifests and runs.
  std::string checksum() const;

  const std::vector<std::string>& positions() const noexcept { return positions_; }
  const std::string& undefined_label() const noexcept { return undefined_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::map<std::string, std::string>& aliases() const noexcept { return aliases_; }

  // nullopt means Unknown.
  std::optional<std::string> canonicalize_class(std::string_view name) const;
  std::optional<std::string> find_position(std::string_view label) const;
  // Throws Error(kUnknownPosition) when the label is not configured.
  std::string validate_position(std::string_view label) const;
  const std::string& mirror_position(std::string_view canonical) const;
  bool is_position(std::string_view canonical) const;
  bool is_class(std::string_view canonical) const;

 private:
  std::vector<std::string> positions_;
  std::string undefined_;
  std::map<std::string, std::string> mirror_;
  std::vector<std::string> classes_;
  std::map<std::string, std::string> aliases_;  // normalized alias -> canonical class
  std::map<std::string, std::string> position_index_;  // lowercase -> canonical
  std::map<std::string, std::string> class_index_;
};

// Lowercase ASCII and strip surrounding whitespace.
std::string normalize_token(std::string_view text);

}  // namespace odal
