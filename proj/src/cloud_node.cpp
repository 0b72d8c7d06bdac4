// SPDX-License-Identifier: Apache-2.0

#include <chrono>

#include <httplib.h>

#include "odal/error.hpp"
#include "odal/nodes.hpp"
#include "odal/wire.hpp"

namespace odal {

namespace {

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadMagic:
    case ErrorCode::kUnsupportedVersion:
    case ErrorCode::kLengthMismatch:
    case ErrorCode::kChecksumMismatch:
    case ErrorCode::kInvalidArgument:
      return 400;
    case ErrorCode::kBackendUnreachable:
      return 502;
    default:
      return 500;
  }
}

}  // namespace

CloudNode::CloudNode(std::shared_ptr<LlmBackend> backend, int token_cap)
    : backend_(std::move(backend)), token_cap_(token_cap) {
  if (!backend_) throw Error(ErrorCode::kConfigInvalid, "cloud node needs a backend");
}

ModelResponse CloudNode::infer(std::span<const std::byte> envelope) {
  const auto started = std::chrono::steady_clock::now();
  const DecodedEmbedding decoded = decode_embedding_message(envelope);
  InferRequest request{decoded.meta.frame_id, decoded.meta.prompt_version, &decoded.tensor, envelope};
  BackendReply reply = backend_->generate(request);

  ModelResponse response;
  response.frame_id = decoded.meta.frame_id;
  response.backend_id = backend_->id();
  response.token_count = reply.token_count.value_or(count_tokens(reply.text));
  if (response.token_count > token_cap_) {
    response.truncated = true;
    if (!reply.token_count) {
      reply.text = truncate_tokens(reply.text, token_cap_);
    }
    response.token_count = token_cap_;
  }
  response.text = std::move(reply.text);
  response.latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  {
    std::lock_guard lock(log_mutex_);
    log_.push_back({{"frame_id", response.frame_id},
                    {"backend_id", response.backend_id},
                    {"token_count", response.token_count},
                    {"truncated", response.truncated}});
  }
  return response;
}

nlohmann::json CloudNode::health() const { return {{"status", "ok"}, {"backend_id", backend_->id()}}; }

std::vector<nlohmann::json> CloudNode::run_log() const {
  std::lock_guard lock(log_mutex_);
  return log_;
}

nlohmann::json response_to_wire_json(const ModelResponse& r) {
  return {{"frame_id", r.frame_id},
          {"text", r.text},
          {"token_count", r.token_count},
          {"backend_id", r.backend_id},
          {"truncated", r.truncated}};
}

ModelResponse response_from_wire_json(const nlohmann::json& doc) {
  try {
    ModelResponse r;
    r.frame_id = doc.at("frame_id").get<std::string>();
    r.text = doc.at("text").get<std::string>();
    r.token_count = doc.at("token_count").get<int>();
    r.backend_id = doc.at("backend_id").get<std::string>();
    r.truncated = doc.value("truncated", false);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBackendMalformedOutput, std::string("inference reply: ") + e.what());
  }
}

CloudServer::CloudServer(std::shared_ptr<CloudNode> node)
    : node_(std::move(node)), service_([this](httplib::Server& server) {
        server.Post("/v1/infer", [this](const httplib::Request& req, httplib::Response& res) {
          try {
            const auto bytes = std::as_bytes(std::span(req.body.data(), req.body.size()));
            res.set_content(response_to_wire_json(node_->infer(bytes)).dump(), "application/json");
          } catch (const Error& e) {
            res.status = http_status_for(e.code());
            res.set_content(nlohmann::json{{"error", error_code_name(e.code())}, {"message", e.what()}}.dump(),
                            "application/json");
          }
        });
        server.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
          res.set_content(node_->health().dump(), "application/json");
        });
      }) {}

EdgeMockServer::EdgeMockServer(std::shared_ptr<VisionBackend> backend)
    : backend_(std::move(backend)), service_([this](httplib::Server& server) {
        server.Post("/v1/encode", [this](const httplib::Request& req, httplib::Response& res) {
          try {
            const auto bytes = std::as_bytes(std::span(req.body.data(), req.body.size()));
            const EmbeddingTensor t = edge_encode(bytes, *backend_);
            const auto env = encode_embedding_message(t, "", PromptVersion::kV1);
            res.set_content(std::string(reinterpret_cast<const char*>(env.data()), env.size()),
                            "application/octet-stream");
          } catch (const Error& e) {
            res.status = 400;
            const auto env = encode_error_message(error_code_name(e.code()), e.what());
            res.set_content(std::string(reinterpret_cast<const char*>(env.data()), env.size()),
                            "application/octet-stream");
          }
        });
        server.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
          res.set_content(nlohmann::json{{"status", "ok"}, {"backend_id", backend_->id()}}.dump(), "application/json");
        });
      }) {}

}  // namespace odal
