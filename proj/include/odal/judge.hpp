// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odal/chat.hpp"
#include "odal/dataset.hpp"
#include "odal/model.hpp"
#include "odal/ontology.hpp"
#include "odal/response_codec.hpp"

namespace odal {

struct RulesJudgeOptions {
  // Detections naming a labeled but invisible object go to Verdict::neutral;
  // when off they count as hallucinations.
  bool invisible_as_neutral = true;
};

// Greedy matching by canonical class. per_object follows the class order of
// the label's visible objects.
Verdict judge_frame_rules(const std::vector<Detection>& detections, const FrameLabel& gt,
                          ParseStatus parse_status = ParseStatus::kValidStrict, const RulesJudgeOptions& options = {});

// parse_response followed by judge_frame_rules.
Verdict judge_response_rules(std::string_view response_text, const FrameLabel& gt, const CabinOntology& ontology,
                             const RulesJudgeOptions& options = {}, const ParseOptions& parse_options = {});

struct JudgeTemplates {
  std::string system;
  std::string user;  // {{ground_truth}}, {{response}}

  static const JudgeTemplates& builtin();
  static JudgeTemplates load(const std::filesystem::path& dir);  // system.txt, user.txt
};

std::vector<ChatMessage> build_judge_prompt(std::string_view response_text, const FrameLabel& gt,
                                            const CabinOntology& ontology,
                                            const JudgeTemplates& templates = JudgeTemplates::builtin());

// Reads a judge reply ({per_object, hallucinations, neutral}, optionally
// fenced) into a verdict for gt. per_object must name exactly the visible
// ground-truth classes. Throws kVerdictMalformed.
Verdict parse_judge_reply(std::string_view reply, const FrameLabel& gt, const CabinOntology& ontology);

struct JudgeConfig {
  JudgeKind kind = JudgeKind::kRules;
  std::string endpoint;
  std::string model = "gpt-4o";
  std::string api_key;
  int max_retries = 2;
  int parallelism = 1;
  bool fallback_to_rules = true;
  double timeout_s = 60.0;
  int max_tokens = 1024;
  RulesJudgeOptions rules;
  ParseOptions parse;

  // Throws kConfigInvalid.
  void validate() const;
};

inline constexpr double kJudgeTemperature = 0.0;

// Asks the judge model for a verdict. Malformed replies are retried up to
// max_retries times; after that, or when the endpoint is unreachable, the
// rules judge takes over (judge_kind = Rules, reason in diagnostics) unless
// fallback is disabled, in which case kJudgeUnreachable / kVerdictMalformed
// is thrown. parse_status always comes from the local parser.
Verdict judge_frame_llm(std::string_view response_text, const FrameLabel& gt, const CabinOntology& ontology,
                        const JudgeConfig& config, ChatClient& client,
                        const JudgeTemplates& templates = JudgeTemplates::builtin());

struct JudgeItem {
  std::string frame_id;
  std::optional<std::string> response_text;  // nullopt: the run failed for this frame
};

// Judges every item against its label in the manifest; results come back in
// input order. LLM requests run with at most config.parallelism in flight, so
// client.complete must be safe to call concurrently. Items without a text are
// judged as Invalid empty responses without contacting the judge.
std::vector<Verdict> judge_batch(const std::vector<JudgeItem>& items, const DatasetManifest& manifest,
                                 const CabinOntology& ontology, const JudgeConfig& config, ChatClient* client,
                                 const JudgeTemplates& templates = JudgeTemplates::builtin());

}  // namespace odal
