// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "odal/ontology.hpp"

namespace odal {

struct ObjectState {
  std::string position;
  bool is_visible = true;

  friend bool operator==(const ObjectState&, const ObjectState&) = default;
};

// Ground truth of one image. Object keys are canonical class names.
struct FrameLabel {
  std::string frame_id;
  std::string image_ref;
  std::map<std::string, ObjectState> objects;

  std::size_t visible_count() const;
  friend bool operator==(const FrameLabel&, const FrameLabel&) = default;
};

// Parses the per-image label document ({name: {position, is_visible}}),
// canonicalizing names and positions. Errors carry the frame id.
std::map<std::string, ObjectState> parse_label_objects(const nlohmann::json& doc, const CabinOntology& ontology,
                                                       std::string_view frame_id);
// Writes the label document; is_visible is emitted as "True"/"False".
nlohmann::json label_objects_to_json(const std::map<std::string, ObjectState>& objects);

// Accepts "True"/"False" in any case as well as JSON booleans.
std::optional<bool> parse_visibility(const nlohmann::json& value);

nlohmann::json frame_to_json(const FrameLabel& frame);
FrameLabel frame_from_json(const nlohmann::json& doc, const CabinOntology& ontology);

// One object reported by a model.
struct Detection {
  std::string raw_name;
  std::string raw_position;
  std::optional<std::string> canonical_class;  // nullopt: Unknown
  std::optional<std::string> position;         // nullopt: Unparseable
  bool claimed_visible = true;

  bool is_unknown() const noexcept { return !canonical_class.has_value(); }
  friend bool operator==(const Detection&, const Detection&) = default;
};

enum class ParseStatus { kValidStrict, kValidJsonOnly, kInvalid };
enum class PromptVersion { kV1, kV2 };
enum class JudgeKind { kRules, kLlm };

std::string_view parse_status_name(ParseStatus status);
ParseStatus parse_status_from_name(std::string_view name);
std::string_view judge_kind_name(JudgeKind kind);
std::string_view prompt_version_name(PromptVersion version);  // "v1" / "v2"
PromptVersion prompt_version_from_name(std::string_view name);
JudgeKind judge_kind_from_name(std::string_view name);

struct ObjectOutcome {
  std::string gt_class;
  bool detected = false;
  bool localized = false;

  friend bool operator==(const ObjectOutcome&, const ObjectOutcome&) = default;
};

// Judged outcome of one frame. per_object lists every visible ground-truth
// object; detections are split into matched, hallucinated and neutral.
struct Verdict {
  std::string frame_id;
  ParseStatus parse_status = ParseStatus::kInvalid;
  std::vector<ObjectOutcome> per_object;
  std::vector<std::string> hallucinations;
  std::vector<std::string> neutral;
  JudgeKind judge_kind = JudgeKind::kRules;
  std::vector<std::string> diagnostics;

  std::size_t detected_count() const;
  std::size_t localized_count() const;
  // Matched + hallucinated + neutral.
  std::size_t accounted_detections() const { return detected_count() + hallucinations.size() + neutral.size(); }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

nlohmann::json verdict_to_json(const Verdict& verdict);
Verdict verdict_from_json(const nlohmann::json& doc);

}  // namespace odal
