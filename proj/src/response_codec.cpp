// SPDX-License-Identifier: Apache-2.0

#include "odal/response_codec.hpp"

#include <nlohmann/json.hpp>

namespace odal {

namespace {

using ordered_json = nlohmann::ordered_json;

enum class EntryShape { kStrict, kLoose, kUnrecognized };

EntryShape classify_entry(const ordered_json& value, Detection& out) {
  if (value.is_string()) {
    out.raw_position = value.get<std::string>();
    out.claimed_visible = true;
    return EntryShape::kLoose;
  }
  if (!value.is_object() || !value.contains("position") || !value.at("position").is_string()) {
    return EntryShape::kUnrecognized;
  }
  out.raw_position = value.at("position").get<std::string>();
  std::optional<bool> visible;
  if (value.contains("is_visible")) {
    const auto v = value.at("is_visible");
    if (v.is_boolean()) {
      visible = v.get<bool>();
    } else if (v.is_string()) {
      visible = parse_visibility(nlohmann::json(v.get<std::string>()));
    }
  }
  out.claimed_visible = visible.value_or(true);
  return value.size() == 2 && visible.has_value() ? EntryShape::kStrict : EntryShape::kLoose;
}

std::optional<ordered_json> try_parse(std::string_view text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::optional<std::string> extract_single_fenced_block(std::string_view text) {
  std::optional<std::string> found;
  std::size_t pos = 0;
  int blocks = 0;
  while (true) {
    const auto open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    // Skip the info string ("json") up to the end of the fence line.
    auto content_start = text.find('\n', open + 3);
    const auto close = text.find("```", open + 3);
    if (close == std::string_view::npos) break;
    if (content_start == std::string_view::npos || content_start > close) content_start = open + 3;
    else ++content_start;
    found = std::string(text.substr(content_start, close - content_start));
    ++blocks;
    pos = close + 3;
  }
  if (blocks != 1) return std::nullopt;
  return found;
}

ParsedResponse parse_response(std::string_view text, const CabinOntology& ontology, const ParseOptions& options) {
  ParsedResponse result;
  auto doc = try_parse(text);
  if (!doc && options.extract_fenced) {
    if (auto block = extract_single_fenced_block(text)) {
      doc = try_parse(*block);
      if (doc) result.diagnostics.emplace_back("extracted JSON from a fenced block");
    }
  }
  if (!doc) {
    result.status = ParseStatus::kInvalid;
    result.diagnostics.emplace_back("response is not JSON");
    return result;
  }
  if (!doc->is_object()) {
    result.status = ParseStatus::kValidJsonOnly;
    result.diagnostics.emplace_back("JSON is not an object of detections");
    return result;
  }

  bool all_strict = true;
  std::vector<Detection> detections;
  for (const auto& [name, value] : doc->items()) {
    Detection d;
    d.raw_name = name;
    const EntryShape shape = classify_entry(value, d);
    if (shape == EntryShape::kUnrecognized) {
      result.status = ParseStatus::kValidJsonOnly;
      result.diagnostics.emplace_back("unrecognized entry \"" + name + "\"; no detections taken");
      return result;
    }
    all_strict = all_strict && shape == EntryShape::kStrict;
    detections.push_back(std::move(d));
  }
  result.status = all_strict ? ParseStatus::kValidStrict : ParseStatus::kValidJsonOnly;
  if (!all_strict) result.diagnostics.emplace_back("shorthand or loosely shaped entries");
  result.detections = normalize_detections(detections, ontology);
  return result;
}

std::vector<Detection> normalize_detections(const std::vector<Detection>& detections, const CabinOntology& ontology) {
  std::vector<Detection> out;
  out.reserve(detections.size());
  for (const auto& d : detections) {
    Detection n = d;
    n.canonical_class = ontology.canonicalize_class(d.raw_name);
    n.position = ontology.find_position(d.raw_position);
    out.push_back(std::move(n));
  }
  return out;
}

}  // namespace odal
