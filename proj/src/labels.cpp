// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "odal/error.hpp"
#include "odal/model.hpp"

namespace odal {

namespace {

std::string frame_context(std::string_view frame_id) { return "frame \"" + std::string(frame_id) + "\": "; }

}  // namespace

std::size_t FrameLabel::visible_count() const {
  return static_cast<std::size_t>(
      std::count_if(objects.begin(), objects.end(), [](const auto& kv) { return kv.second.is_visible; }));
}

std::optional<bool> parse_visibility(const nlohmann::json& value) {
  if (value.is_boolean()) return value.get<bool>();
  if (value.is_string()) {
    const std::string s = normalize_token(value.get<std::string>());
    if (s == "true") return true;
    if (s == "false") return false;
  }
  return std::nullopt;
}

std::map<std::string, ObjectState> parse_label_objects(const nlohmann::json& doc, const CabinOntology& ontology,
                                                       std::string_view frame_id) {
  if (!doc.is_object()) throw Error(ErrorCode::kMalformedLabel, frame_context(frame_id) + "label must be an object");
  std::map<std::string, ObjectState> objects;
  for (const auto& [name, entry] : doc.items()) {
    const auto canonical = ontology.canonicalize_class(name);
    if (!canonical) throw Error(ErrorCode::kUnknownClass, frame_context(frame_id) + "\"" + name + "\"");
    if (!entry.is_object() || !entry.contains("position") || !entry.at("position").is_string() ||
        !entry.contains("is_visible")) {
      throw Error(ErrorCode::kMalformedLabel,
                  frame_context(frame_id) + "object \"" + name + "\" needs \"position\" and \"is_visible\"");
    }
    const auto visible = parse_visibility(entry.at("is_visible"));
    if (!visible) {
      throw Error(ErrorCode::kMalformedLabel, frame_context(frame_id) + "object \"" + name + "\" has a bad is_visible");
    }
    const std::string raw_position = entry.at("position").get<std::string>();
    const auto position = ontology.find_position(raw_position);
    if (!position) throw Error(ErrorCode::kUnknownPosition, frame_context(frame_id) + "\"" + raw_position + "\"");
    if (!objects.emplace(*canonical, ObjectState{*position, *visible}).second) {
      throw Error(ErrorCode::kMalformedLabel, frame_context(frame_id) + "class \"" + *canonical + "\" listed twice");
    }
  }
  return objects;
}

nlohmann::json label_objects_to_json(const std::map<std::string, ObjectState>& objects) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [name, state] : objects) {
    doc[name] = {{"position", state.position}, {"is_visible", state.is_visible ? "True" : "False"}};
  }
  return doc;
}

nlohmann::json frame_to_json(const FrameLabel& frame) {
  return {{"frame_id", frame.frame_id}, {"image", frame.image_ref}, {"objects", label_objects_to_json(frame.objects)}};
}

FrameLabel frame_from_json(const nlohmann::json& doc, const CabinOntology& ontology) {
  if (!doc.is_object() || !doc.contains("frame_id") || !doc.at("frame_id").is_string()) {
    throw Error(ErrorCode::kMalformedLabel, "manifest entry without frame_id");
  }
  FrameLabel frame;
  frame.frame_id = doc.at("frame_id").get<std::string>();
  frame.image_ref = doc.value("image", std::string());
  frame.objects = parse_label_objects(doc.value("objects", nlohmann::json::object()), ontology, frame.frame_id);
  return frame;
}

std::string_view parse_status_name(ParseStatus status) {
  switch (status) {
    case ParseStatus::kValidStrict: return "ValidStrict";
    case ParseStatus::kValidJsonOnly: return "ValidJsonOnly";
    case ParseStatus::kInvalid: return "Invalid";
  }
  return "Invalid";
}

ParseStatus parse_status_from_name(std::string_view name) {
  if (name == "ValidStrict") return ParseStatus::kValidStrict;
  if (name == "ValidJsonOnly") return ParseStatus::kValidJsonOnly;
  if (name == "Invalid") return ParseStatus::kInvalid;
  throw Error(ErrorCode::kInvalidArgument, "unknown parse status \"" + std::string(name) + "\"");
}

std::string_view judge_kind_name(JudgeKind kind) { return kind == JudgeKind::kRules ? "Rules" : "LLM"; }

JudgeKind judge_kind_from_name(std::string_view name) {
  if (name == "Rules") return JudgeKind::kRules;
  if (name == "LLM") return JudgeKind::kLlm;
  throw Error(ErrorCode::kInvalidArgument, "unknown judge kind \"" + std::string(name) + "\"");
}

std::string_view prompt_version_name(PromptVersion version) { return version == PromptVersion::kV1 ? "v1" : "v2"; }

PromptVersion prompt_version_from_name(std::string_view name) {
  const std::string n = normalize_token(name);
  if (n == "v1") return PromptVersion::kV1;
  if (n == "v2") return PromptVersion::kV2;
  throw Error(ErrorCode::kInvalidArgument, "unknown prompt version \"" + std::string(name) + "\"");
}

std::size_t Verdict::detected_count() const {
  return static_cast<std::size_t>(
      std::count_if(per_object.begin(), per_object.end(), [](const ObjectOutcome& o) { return o.detected; }));
}

std::size_t Verdict::localized_count() const {
  return static_cast<std::size_t>(
      std::count_if(per_object.begin(), per_object.end(), [](const ObjectOutcome& o) { return o.localized; }));
}

nlohmann::json verdict_to_json(const Verdict& v) {
  nlohmann::json per_object = nlohmann::json::array();
  for (const auto& o : v.per_object) {
    per_object.push_back({{"class", o.gt_class}, {"d", o.detected ? 1 : 0}, {"l", o.localized ? 1 : 0}});
  }
  return {{"frame_id", v.frame_id},
          {"parse_status", parse_status_name(v.parse_status)},
          {"judge_kind", judge_kind_name(v.judge_kind)},
          {"per_object", per_object},
          {"hallucinations", v.hallucinations},
          {"neutral", v.neutral},
          {"diagnostics", v.diagnostics}};
}

Verdict verdict_from_json(const nlohmann::json& doc) {
  try {
    Verdict v;
    v.frame_id = doc.at("frame_id").get<std::string>();
    v.parse_status = parse_status_from_name(doc.at("parse_status").get<std::string>());
    v.judge_kind = judge_kind_from_name(doc.value("judge_kind", std::string("Rules")));
    for (const auto& o : doc.at("per_object")) {
      ObjectOutcome outcome{o.at("class").get<std::string>(), o.at("d").get<int>() != 0, o.at("l").get<int>() != 0};
      if (outcome.localized && !outcome.detected) {
        throw Error(ErrorCode::kVerdictMalformed, "frame \"" + v.frame_id + "\": l=1 requires d=1");
      }
      v.per_object.push_back(std::move(outcome));
    }
    v.hallucinations = doc.value("hallucinations", std::vector<std::string>{});
    v.neutral = doc.value("neutral", std::vector<std::string>{});
    v.diagnostics = doc.value("diagnostics", std::vector<std::string>{});
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kVerdictMalformed, e.what());
  }
}

}  // namespace odal
