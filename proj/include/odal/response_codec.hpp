// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odal/model.hpp"
#include "odal/ontology.hpp"

namespace odal {

struct ParseOptions {
  // Accept a single ```-fenced block embedded in prose.
  bool extract_fenced = true;
};

struct ParsedResponse {
  ParseStatus status = ParseStatus::kInvalid;
  std::vector<Detection> detections;
  std::vector<std::string> diagnostics;
};

// Classifies a model response:
//   ValidStrict   JSON object of {name: {"position", "is_visible"}} entries
//                 (the empty object included)
//   ValidJsonOnly parses as JSON but uses the {name: position} shorthand or
//                 loosely shaped entries (detections kept), or has a
//                 structure that cannot be read as detections (none kept)
//   Invalid       not JSON
// Never throws. Detections come back normalized, in text order.
ParsedResponse parse_response(std::string_view text, const CabinOntology& ontology, const ParseOptions& options = {});

// Canonicalizes class names and positions from the raw fields. Positions that
// do not validate become Unparseable rather than errors.
std::vector<Detection> normalize_detections(const std::vector<Detection>& detections, const CabinOntology& ontology);

// The contents of the only ```-fenced block in text; nullopt when there are
// zero or several blocks.
std::optional<std::string> extract_single_fenced_block(std::string_view text);

}  // namespace odal
