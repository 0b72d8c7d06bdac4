// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odal/chat.hpp"
#include "odal/dataset.hpp"
#include "odal/model.hpp"
#include "odal/prompt.hpp"
#include "odal/tensor.hpp"

namespace odal {

inline constexpr int kResponseTokenCap = 512;

// Whitespace-delimited token count.
int count_tokens(std::string_view text);
// Keeps the first max_tokens tokens (and the whitespace between them).
std::string truncate_tokens(std::string_view text, int max_tokens);

struct ModelResponse {
  std::string frame_id;
  std::string text;
  int token_count = 0;
  std::string backend_id;
  double latency_ms = 0.0;
  bool truncated = false;

  friend bool operator==(const ModelResponse&, const ModelResponse&) = default;
};

struct InferRequest {
  std::string frame_id;
  PromptVersion prompt_version = PromptVersion::kV1;
  const EmbeddingTensor* embedding = nullptr;
  std::span<const std::byte> envelope;  // the raw upload, for forwarding backends
};

struct BackendReply {
  std::string text;
  std::optional<int> token_count;  // nullopt: count whitespace tokens
};

// Language-side model living in the cloud node.
class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual std::string id() const = 0;
  virtual BackendReply generate(const InferRequest& request) = 0;
};

// Replies with a fixed text, optionally overridden per frame.
class ScriptedBackend final : public LlmBackend {
 public:
  explicit ScriptedBackend(std::string default_text, std::map<std::string, std::string> per_frame = {});
  std::string id() const override { return "mock"; }
  BackendReply generate(const InferRequest& request) override;

 private:
  std::string default_text_;
  std::map<std::string, std::string> per_frame_;
};

struct ErrorProfile {
  double p_miss = 0.0;
  double p_mislocalize = 0.0;
  double p_hallucinate = 0.0;  // Poisson mean of invented objects per frame
  std::uint64_t seed = 0;

  bool valid() const noexcept;
};

// Object names that never resolve to an ontology class.
const std::vector<std::string>& builtin_distractors();

// Ground-truth responder. Starts from the visible objects, drops each with
// p_miss, moves each survivor to a uniformly drawn different position with
// p_mislocalize, then adds Poisson(p_hallucinate) distractor objects.
// Deterministic in (label, profile).
std::string oracle_respond(const FrameLabel& label, const ErrorProfile& profile, const CabinOntology& ontology,
                           const std::vector<std::string>& distractors = builtin_distractors());

class OracleBackend final : public LlmBackend {
 public:
  OracleBackend(DatasetManifest manifest, ErrorProfile profile, CabinOntology ontology,
                std::vector<std::string> distractors = builtin_distractors());
  std::string id() const override { return "oracle"; }
  BackendReply generate(const InferRequest& request) override;

 private:
  std::map<std::string, FrameLabel> labels_;
  ErrorProfile profile_;
  CabinOntology ontology_;
  std::vector<std::string> distractors_;
};

// Renders the prompt cloud-side and asks an OpenAI-compatible endpoint.
class OpenAiBackend final : public LlmBackend {
 public:
  OpenAiBackend(OpenAiChatConfig config, CabinOntology ontology, PromptTemplates templates = PromptTemplates::builtin());
  std::string id() const override { return "openai:" + client_.config().model; }
  BackendReply generate(const InferRequest& request) override;

 private:
  OpenAiChatClient client_;
  CabinOntology ontology_;
  PromptTemplates templates_;
};

// Forwards the upload envelope to another /v1/infer service (e.g. a model adapter).
class ForwardingBackend final : public LlmBackend {
 public:
  ForwardingBackend(std::string url, double timeout_s);
  std::string id() const override { return "remote:" + url_; }
  BackendReply generate(const InferRequest& request) override;

 private:
  std::string url_;
  double timeout_s_;
};

struct LlmBackendContext {
  const DatasetManifest* manifest = nullptr;  // required by "oracle"
  CabinOntology ontology = CabinOntology::builtin();
  ErrorProfile profile;
  std::string mock_text = "{}";
  std::map<std::string, std::string> mock_script;
  std::string model = "gpt-4o";
  std::string api_key;
  double timeout_s = 60.0;
};

// "mock", "oracle", "openai:URL" or "remote:URL".
std::unique_ptr<LlmBackend> make_llm_backend(std::string_view spec, const LlmBackendContext& context);

// On-board vision encoder.
class VisionBackend {
 public:
  virtual ~VisionBackend() = default;
  virtual std::string id() const = 0;
  virtual EmbeddingTensor encode(std::span<const std::byte> image) = 0;
};

struct MockVisionConfig {
  std::string encoder_id = "mock-vit-l14-336";
  std::uint64_t tokens = 576;  // 24 x 24 patches of a 336 px input at stride 14
  std::uint64_t dim = 1024;
  DType dtype = DType::kF16;
  std::uint64_t seed = 0;
};

// Pseudo-embedding seeded by a hash of the image bytes.
class MockVisionBackend final : public VisionBackend {
 public:
  explicit MockVisionBackend(MockVisionConfig config = {});
  std::string id() const override { return config_.encoder_id; }
  EmbeddingTensor encode(std::span<const std::byte> image) override;
  const MockVisionConfig& config() const noexcept { return config_; }

 private:
  MockVisionConfig config_;
};

// POST /v1/encode on a vision service; the reply is an embedding envelope.
class RemoteVisionBackend final : public VisionBackend {
 public:
  RemoteVisionBackend(std::string url, double timeout_s);
  std::string id() const override { return "remote:" + url_; }
  EmbeddingTensor encode(std::span<const std::byte> image) override;

 private:
  std::string url_;
  double timeout_s_;
};

}  // namespace odal
