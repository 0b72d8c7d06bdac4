// SPDX-License-Identifier: Apache-2.0

#include <set>

#include "odal/judge.hpp"

namespace odal {

Verdict judge_frame_rules(const std::vector<Detection>& detections, const FrameLabel& gt, ParseStatus parse_status,
                          const RulesJudgeOptions& options) {
  Verdict v;
  v.frame_id = gt.frame_id;
  v.parse_status = parse_status;
  v.judge_kind = JudgeKind::kRules;

  std::map<std::string, std::size_t> slot;
  for (const auto& [cls, state] : gt.objects) {
    if (!state.is_visible) continue;
    slot[cls] = v.per_object.size();
    v.per_object.push_back({cls, false, false});
  }

  std::set<std::string> seen_invisible;
  for (const auto& det : detections) {
    if (det.is_unknown()) {
      v.hallucinations.push_back(det.raw_name);
      continue;
    }
    const std::string& cls = *det.canonical_class;
    const auto gt_it = gt.objects.find(cls);
    if (gt_it == gt.objects.end()) {
      v.hallucinations.push_back(det.raw_name);
      continue;
    }
    if (!gt_it->second.is_visible) {
      if (options.invisible_as_neutral && seen_invisible.insert(cls).second) {
        v.neutral.push_back(det.raw_name);
      } else {
        v.hallucinations.push_back(det.raw_name);
      }
      continue;
    }
    auto& outcome = v.per_object[slot.at(cls)];
    if (outcome.detected) {
      v.hallucinations.push_back(det.raw_name);
      continue;
    }
    outcome.detected = true;
    outcome.localized = det.position.has_value() && *det.position == gt_it->second.position;
  }
  return v;
}

Verdict judge_response_rules(std::string_view response_text, const FrameLabel& gt, const CabinOntology& ontology,
                             const RulesJudgeOptions& options, const ParseOptions& parse_options) {
  ParsedResponse parsed = parse_response(response_text, ontology, parse_options);
  Verdict v = judge_frame_rules(parsed.detections, gt, parsed.status, options);
  v.diagnostics = std::move(parsed.diagnostics);
  return v;
}

}  // namespace odal
