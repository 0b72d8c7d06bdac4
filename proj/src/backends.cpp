// SPDX-License-Identifier: Apache-2.0

#include "odal/backends.hpp"

#include <algorithm>
#include <cctype>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "odal/error.hpp"
#include "odal/http.hpp"
#include "odal/resources.hpp"
#include "odal/rng.hpp"
#include "odal/wire.hpp"

namespace odal {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

template <typename Duration>
void set_timeouts(httplib::Client& client, Duration timeout) {
  const auto us = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
  client.set_connection_timeout(us);
  client.set_read_timeout(us);
  client.set_write_timeout(us);
}

}  // namespace

int count_tokens(std::string_view text) {
  int count = 0;
  bool in_token = false;
  for (char c : text) {
    if (is_space(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++count;
    }
  }
  return count;
}

std::string truncate_tokens(std::string_view text, int max_tokens) {
  int count = 0;
  bool in_token = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (is_space(text[i])) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      if (++count > max_tokens) {
        std::size_t end = i;
        while (end > 0 && is_space(text[end - 1])) --end;
        return std::string(text.substr(0, end));
      }
    }
  }
  return std::string(text);
}

ScriptedBackend::ScriptedBackend(std::string default_text, std::map<std::string, std::string> per_frame)
    : default_text_(std::move(default_text)), per_frame_(std::move(per_frame)) {}

BackendReply ScriptedBackend::generate(const InferRequest& request) {
  if (const auto it = per_frame_.find(request.frame_id); it != per_frame_.end()) return {it->second, std::nullopt};
  return {default_text_, std::nullopt};
}

bool ErrorProfile::valid() const noexcept {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  return prob(p_miss) && prob(p_mislocalize) && p_hallucinate >= 0.0;
}

const std::vector<std::string>& builtin_distractors() {
  static const std::vector<std::string> names =
      nlohmann::json::parse(resources::distractors_json).get<std::vector<std::string>>();
  return names;
}

std::string oracle_respond(const FrameLabel& label, const ErrorProfile& profile, const CabinOntology& ontology,
                           const std::vector<std::string>& distractors) {
  if (!profile.valid()) throw Error(ErrorCode::kConfigInvalid, "error profile out of range");
  SeededStream rng(derive_seed(profile.seed, label.frame_id));
  const auto& positions = ontology.positions();
  std::map<std::string, ObjectState> response;
  for (const auto& [name, state] : label.objects) {
    if (!state.is_visible) continue;
    if (rng.bernoulli(profile.p_miss)) continue;
    std::string position = state.position;
    if (rng.bernoulli(profile.p_mislocalize) && positions.size() > 1) {
      const auto self = static_cast<std::size_t>(std::find(positions.begin(), positions.end(), position) - positions.begin());
      if (self == positions.size()) {
        position = positions[rng.below(positions.size())];
      } else {
        auto pick = rng.below(positions.size() - 1);
        if (pick >= self) ++pick;
        position = positions[pick];
      }
    }
    response[name] = ObjectState{position, true};
  }
  const std::uint64_t n_invented = rng.poisson(profile.p_hallucinate);
  if (n_invented > 0) {
    if (distractors.empty()) throw Error(ErrorCode::kConfigInvalid, "no distractor names configured");
    std::vector<std::string> pool = distractors;
    rng.shuffle(std::span(pool));
    for (std::uint64_t i = 0; i < n_invented; ++i) {
      std::string name = pool[i % pool.size()];
      if (i >= pool.size()) name += " " + std::to_string(i / pool.size() + 1);
      response[name] = ObjectState{positions[rng.below(positions.size())], true};
    }
  }
  return render_response_json(response);
}

OracleBackend::OracleBackend(DatasetManifest manifest, ErrorProfile profile, CabinOntology ontology,
                             std::vector<std::string> distractors)
    : profile_(profile), ontology_(std::move(ontology)), distractors_(std::move(distractors)) {
  if (!profile_.valid()) throw Error(ErrorCode::kConfigInvalid, "error profile out of range");
  for (const auto& d : distractors_) {
    if (ontology_.canonicalize_class(d)) {
      throw Error(ErrorCode::kConfigInvalid, "distractor \"" + d + "\" resolves to an ontology class");
    }
  }
  for (auto& f : manifest.frames) labels_.emplace(f.frame_id, std::move(f));
}

BackendReply OracleBackend::generate(const InferRequest& request) {
  const auto it = labels_.find(request.frame_id);
  if (it == labels_.end()) {
    throw Error(ErrorCode::kBackendMalformedOutput, "oracle has no label for frame \"" + request.frame_id + "\"");
  }
  return {oracle_respond(it->second, profile_, ontology_, distractors_), std::nullopt};
}

OpenAiBackend::OpenAiBackend(OpenAiChatConfig config, CabinOntology ontology, PromptTemplates templates)
    : client_(std::move(config)), ontology_(std::move(ontology)), templates_(std::move(templates)) {}

BackendReply OpenAiBackend::generate(const InferRequest& request) {
  const auto prompt = render_prompt(request.prompt_version, ontology_, templates_);
  std::vector<ChatMessage> messages{{"system", prompt.system_text}, {"user", prompt.user_text}};
  if (request.embedding != nullptr) {
    // Plain chat endpoints cannot take embeddings; announce what was uploaded.
    messages.push_back({"user", "[image embedding " + std::to_string(request.embedding->tokens) + "x" +
                                    std::to_string(request.embedding->dim) + " from " +
                                    request.embedding->encoder_id + "]"});
  }
  const auto reply = client_.complete(messages, 0.0, kResponseTokenCap);
  return {reply.text, reply.completion_tokens};
}

ForwardingBackend::ForwardingBackend(std::string url, double timeout_s) : url_(std::move(url)), timeout_s_(timeout_s) {}

BackendReply ForwardingBackend::generate(const InferRequest& request) {
  const Url url = parse_url(url_, "/v1/infer");
  httplib::Client client(url.scheme_host_port);
  set_timeouts(client, std::chrono::duration<double>(timeout_s_));
  const std::string body(reinterpret_cast<const char*>(request.envelope.data()), request.envelope.size());
  auto res = client.Post(url.path, body, "application/octet-stream");
  if (!res) throw Error(ErrorCode::kBackendUnreachable, url_ + ": " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw Error(res->status >= 500 ? ErrorCode::kBackendUnreachable : ErrorCode::kBackendMalformedOutput,
                url_ + ": HTTP " + std::to_string(res->status));
  }
  try {
    const auto doc = nlohmann::json::parse(res->body);
    BackendReply reply{doc.at("text").get<std::string>(), std::nullopt};
    if (doc.contains("token_count")) reply.token_count = doc.at("token_count").get<int>();
    return reply;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBackendMalformedOutput, url_ + ": " + e.what());
  }
}

std::unique_ptr<LlmBackend> make_llm_backend(std::string_view spec, const LlmBackendContext& ctx) {
  if (spec == "mock") return std::make_unique<ScriptedBackend>(ctx.mock_text, ctx.mock_script);
  if (spec == "oracle") {
    if (ctx.manifest == nullptr) throw Error(ErrorCode::kConfigInvalid, "the oracle backend needs a dataset");
    return std::make_unique<OracleBackend>(*ctx.manifest, ctx.profile, ctx.ontology);
  }
  if (spec.starts_with("openai:")) {
    OpenAiChatConfig cfg{std::string(spec.substr(7)), ctx.model, ctx.api_key, ctx.timeout_s};
    return std::make_unique<OpenAiBackend>(std::move(cfg), ctx.ontology);
  }
  if (spec.starts_with("remote:")) return std::make_unique<ForwardingBackend>(std::string(spec.substr(7)), ctx.timeout_s);
  throw Error(ErrorCode::kConfigInvalid, "unknown backend \"" + std::string(spec) + "\"");
}

MockVisionBackend::MockVisionBackend(MockVisionConfig config) : config_(std::move(config)) {
  if (config_.tokens < 1 || config_.dim < 1) throw Error(ErrorCode::kConfigInvalid, "embedding shape must be positive");
}

EmbeddingTensor MockVisionBackend::encode(std::span<const std::byte> image) {
  const std::string_view bytes(reinterpret_cast<const char*>(image.data()), image.size());
  const std::uint64_t seed = splitmix64(config_.seed ^ fnv1a64(bytes));
  std::vector<float> values(config_.tokens * config_.dim);
  for (std::size_t i = 0; i < values.size(); ++i) {
    // Counter-based draw in [-1, 1) with 24 bits of resolution.
    const auto r = static_cast<std::uint32_t>(splitmix64(seed + i) >> 40);
    values[i] = static_cast<float>(r) * 0x1.0p-23f - 1.0f;
  }
  return EmbeddingTensor::from_f32(config_.encoder_id, values, config_.tokens, config_.dim, config_.dtype);
}

RemoteVisionBackend::RemoteVisionBackend(std::string url, double timeout_s) : url_(std::move(url)), timeout_s_(timeout_s) {}

EmbeddingTensor RemoteVisionBackend::encode(std::span<const std::byte> image) {
  const Url url = parse_url(url_, "/v1/encode");
  httplib::Client client(url.scheme_host_port);
  set_timeouts(client, std::chrono::duration<double>(timeout_s_));
  const std::string body(reinterpret_cast<const char*>(image.data()), image.size());
  auto res = client.Post(url.path, body, "application/octet-stream");
  if (!res) throw Error(ErrorCode::kBackendUnreachable, url_ + ": " + httplib::to_string(res.error()));
  const auto reply = std::as_bytes(std::span(res->body.data(), res->body.size()));
  if (res->status != 200) {
    std::string detail = "HTTP " + std::to_string(res->status);
    try {
      decode_embedding_message(reply);
    } catch (const Error& e) {
      detail += " (" + std::string(e.what()) + ")";
    }
    throw Error(ErrorCode::kBackendMalformedOutput, url_ + ": " + detail);
  }
  try {
    return decode_embedding_message(reply).tensor;
  } catch (const Error& e) {
    throw Error(ErrorCode::kBackendMalformedOutput, url_ + ": " + e.what());
  }
}

}  // namespace odal
