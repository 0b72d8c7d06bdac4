// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <mutex>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "odal/error.hpp"
#include "odal/judge.hpp"
#include "odal/prompt.hpp"
#include "odal/resources.hpp"

namespace odal {

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool flag_value(const nlohmann::json& v, const char* what) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer() && (v.get<int>() == 0 || v.get<int>() == 1)) return v.get<int>() == 1;
  throw Error(ErrorCode::kVerdictMalformed, std::string("\"") + what + "\" must be a boolean");
}

std::vector<std::string> name_list(const nlohmann::json& doc, const char* key) {
  std::vector<std::string> out;
  if (!doc.contains(key)) return out;
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw Error(ErrorCode::kVerdictMalformed, std::string("\"") + key + "\" must be an array");
  for (const auto& item : arr) {
    if (!item.is_string()) throw Error(ErrorCode::kVerdictMalformed, std::string("\"") + key + "\" entries must be strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

const JudgeTemplates& JudgeTemplates::builtin() {
  static const JudgeTemplates t{std::string(resources::judge_system_txt), std::string(resources::judge_user_txt)};
  return t;
}

JudgeTemplates JudgeTemplates::load(const std::filesystem::path& dir) {
  return {read_text(dir / "system.txt"), read_text(dir / "user.txt")};
}

std::vector<ChatMessage> build_judge_prompt(std::string_view response_text, const FrameLabel& gt,
                                            const CabinOntology& ontology, const JudgeTemplates& templates) {
  std::string listing;
  for (const auto& [cls, state] : gt.objects) {
    listing += "- " + cls + " at " + state.position + (state.is_visible ? " (visible)\n" : " (not visible)\n");
  }
  if (listing.empty()) listing = "(none)\n";
  listing += "Valid positions: ";
  const auto& positions = ontology.positions();
  for (std::size_t i = 0; i < positions.size(); ++i) listing += (i ? ", " : "") + positions[i];
  std::string user = substitute(templates.user, {{"ground_truth", listing}, {"response", std::string(response_text)}});
  return {{"system", templates.system}, {"user", std::move(user)}};
}

Verdict parse_judge_reply(std::string_view reply, const FrameLabel& gt, const CabinOntology& ontology) {
  nlohmann::json doc = nlohmann::json::parse(reply, nullptr, false);
  if (doc.is_discarded()) {
    if (const auto block = extract_single_fenced_block(reply)) doc = nlohmann::json::parse(*block, nullptr, false);
  }
  if (doc.is_discarded() || !doc.is_object()) throw Error(ErrorCode::kVerdictMalformed, "judge reply is not a JSON object");
  if (!doc.contains("per_object") || !doc["per_object"].is_array()) {
    throw Error(ErrorCode::kVerdictMalformed, "judge reply lacks a per_object array");
  }

  std::map<std::string, ObjectOutcome> outcomes;
  for (const auto& entry : doc["per_object"]) {
    if (!entry.is_object() || !entry.contains("class") || !entry["class"].is_string()) {
      throw Error(ErrorCode::kVerdictMalformed, "per_object entry without a class");
    }
    const std::string raw = entry["class"].get<std::string>();
    const auto cls = ontology.canonicalize_class(raw);
    const auto gt_it = cls ? gt.objects.find(*cls) : gt.objects.end();
    if (gt_it == gt.objects.end() || !gt_it->second.is_visible) {
      throw Error(ErrorCode::kVerdictMalformed, "per_object names \"" + raw + "\", not a visible ground-truth object");
    }
    ObjectOutcome o{*cls, flag_value(entry.value("detected", nlohmann::json(false)), "detected"),
                    flag_value(entry.value("localized", nlohmann::json(false)), "localized")};
    if (o.localized && !o.detected) throw Error(ErrorCode::kVerdictMalformed, "\"" + raw + "\" localized but not detected");
    if (!outcomes.emplace(*cls, o).second) throw Error(ErrorCode::kVerdictMalformed, "\"" + raw + "\" listed twice");
  }

  Verdict v;
  v.frame_id = gt.frame_id;
  v.judge_kind = JudgeKind::kLlm;
  for (const auto& [cls, state] : gt.objects) {
    if (!state.is_visible) continue;
    const auto it = outcomes.find(cls);
    if (it == outcomes.end()) throw Error(ErrorCode::kVerdictMalformed, "per_object misses \"" + cls + "\"");
    v.per_object.push_back(it->second);
  }
  v.hallucinations = name_list(doc, "hallucinations");
  v.neutral = name_list(doc, "neutral");
  return v;
}

void JudgeConfig::validate() const {
  if (max_retries < 0) throw Error(ErrorCode::kConfigInvalid, "max_retries must be >= 0");
  if (parallelism < 1) throw Error(ErrorCode::kConfigInvalid, "parallelism must be >= 1");
  if (max_tokens < 1) throw Error(ErrorCode::kConfigInvalid, "max_tokens must be >= 1");
}

Verdict judge_frame_llm(std::string_view response_text, const FrameLabel& gt, const CabinOntology& ontology,
                        const JudgeConfig& config, ChatClient& client, const JudgeTemplates& templates) {
  config.validate();
  const ParsedResponse parsed = parse_response(response_text, ontology, config.parse);
  const auto messages = build_judge_prompt(response_text, gt, ontology, templates);

  std::vector<std::string> diagnostics;
  std::optional<Error> failure;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    try {
      const ChatReply reply = client.complete(messages, kJudgeTemperature, config.max_tokens);
      Verdict v = parse_judge_reply(reply.text, gt, ontology);
      v.parse_status = parsed.status;
      v.diagnostics = std::move(diagnostics);
      return v;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kVerdictMalformed) {
        diagnostics.push_back("attempt " + std::to_string(attempt + 1) + ": " + e.what());
        failure = e;
        continue;
      }
      if (e.code() == ErrorCode::kBackendUnreachable || e.code() == ErrorCode::kBackendMalformedOutput ||
          e.code() == ErrorCode::kJudgeUnreachable) {
        diagnostics.push_back("attempt " + std::to_string(attempt + 1) + ": " + e.what());
        failure = Error(ErrorCode::kJudgeUnreachable, e.what());
        continue;
      }
      throw;
    }
  }
  if (!config.fallback_to_rules) throw *failure;
  Verdict v = judge_frame_rules(parsed.detections, gt, parsed.status, config.rules);
  v.diagnostics = std::move(diagnostics);
  v.diagnostics.push_back("fell back to rules judge");
  return v;
}

std::vector<Verdict> judge_batch(const std::vector<JudgeItem>& items, const DatasetManifest& manifest,
                                 const CabinOntology& ontology, const JudgeConfig& config, ChatClient* client,
                                 const JudgeTemplates& templates) {
  config.validate();
  if (config.kind == JudgeKind::kLlm && client == nullptr) {
    throw Error(ErrorCode::kConfigInvalid, "LLM judge needs a chat client");
  }
  std::vector<const FrameLabel*> labels;
  for (const auto& item : items) {
    const FrameLabel* label = manifest.find(item.frame_id);
    if (label == nullptr) throw Error(ErrorCode::kMissingLabel, "no label for frame \"" + item.frame_id + "\"");
    labels.push_back(label);
  }

  std::vector<Verdict> out(items.size());
  auto judge_one = [&](std::size_t i) {
    const auto& item = items[i];
    if (!item.response_text) {
      out[i] = judge_frame_rules({}, *labels[i], ParseStatus::kInvalid, config.rules);
      out[i].judge_kind = config.kind;
      out[i].diagnostics.push_back("no model response");
      return;
    }
    if (config.kind == JudgeKind::kRules) {
      out[i] = judge_response_rules(*item.response_text, *labels[i], ontology, config.rules, config.parse);
    } else {
      out[i] = judge_frame_llm(*item.response_text, *labels[i], ontology, config, *client, templates);
    }
  };

  if (config.kind == JudgeKind::kRules || config.parallelism == 1 || items.size() < 2) {
    for (std::size_t i = 0; i < items.size(); ++i) judge_one(i);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        judge_one(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(config.parallelism), items.size());
  std::vector<std::thread> threads;
  for (std::size_t w = 1; w < n; ++w) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace odal
