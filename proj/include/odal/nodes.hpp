// SPDX-License-Identifier: Apache-2.0

#pragma once

// Edge and cloud sides of the split. The cloud node decodes embedding
// uploads and runs the language backend; over HTTP it serves
//   POST /v1/infer   body: envelope; reply JSON {frame_id, text, token_count, backend_id, truncated}
//   GET  /v1/health  reply JSON {status, backend_id}
// The edge-mock service exposes a vision encoder:
//   POST /v1/encode  body: image bytes; reply: embedding envelope

#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "odal/backends.hpp"
#include "odal/http.hpp"

namespace odal {

EmbeddingTensor edge_encode(std::span<const std::byte> image, VisionBackend& backend);

class CloudNode {
 public:
  explicit CloudNode(std::shared_ptr<LlmBackend> backend, int token_cap = kResponseTokenCap);

  // Decode errors propagate; replies over the cap are truncated and flagged.
  ModelResponse infer(std::span<const std::byte> envelope);
  nlohmann::json health() const;
  std::string backend_id() const { return backend_->id(); }
  // Append-only log of served requests (frame_id, backend, tokens, truncated).
  std::vector<nlohmann::json> run_log() const;

 private:
  std::shared_ptr<LlmBackend> backend_;
  int token_cap_;
  mutable std::mutex log_mutex_;
  std::vector<nlohmann::json> log_;
};

nlohmann::json response_to_wire_json(const ModelResponse& response);
ModelResponse response_from_wire_json(const nlohmann::json& doc);

class CloudServer {
 public:
  explicit CloudServer(std::shared_ptr<CloudNode> node);
  int start(const std::string& host = "127.0.0.1", int port = 0) { return service_.start(host, port); }
  void stop() { service_.stop(); }
  void wait() { service_.wait(); }
  std::string base_url() const { return service_.base_url(); }

 private:
  std::shared_ptr<CloudNode> node_;
  HttpService service_;
};

class EdgeMockServer {
 public:
  explicit EdgeMockServer(std::shared_ptr<VisionBackend> backend);
  int start(const std::string& host = "127.0.0.1", int port = 0) { return service_.start(host, port); }
  void stop() { service_.stop(); }
  void wait() { service_.wait(); }
  std::string base_url() const { return service_.base_url(); }

 private:
  std::shared_ptr<VisionBackend> backend_;
  HttpService service_;
};

// Edge-side HTTP client for a cloud node.
class CloudClient {
 public:
  CloudClient(std::string url, double timeout_s);
  // Returns the response plus the reply byte count.
  std::pair<ModelResponse, std::size_t> infer(std::span<const std::byte> envelope);
  nlohmann::json health();

 private:
  std::string url_;
  double timeout_s_;
};

}  // namespace odal
