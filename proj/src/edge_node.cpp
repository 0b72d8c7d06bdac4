// SPDX-License-Identifier: Apache-2.0

#include <optional>

#include <httplib.h>

#include "odal/error.hpp"
#include "odal/nodes.hpp"

namespace odal {

EmbeddingTensor edge_encode(std::span<const std::byte> image, VisionBackend& backend) {
  if (image.empty()) throw Error(ErrorCode::kInvalidArgument, "empty image");
  EmbeddingTensor t = backend.encode(image);
  if (!t.valid()) throw Error(ErrorCode::kBackendMalformedOutput, backend.id() + " returned an invalid tensor");
  return t;
}

CloudClient::CloudClient(std::string url, double timeout_s) : url_(std::move(url)), timeout_s_(timeout_s) {}

std::pair<ModelResponse, std::size_t> CloudClient::infer(std::span<const std::byte> envelope) {
  const Url url = parse_url(url_, "/v1/infer");
  httplib::Client client(url.scheme_host_port);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::duration<double>(timeout_s_));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  const std::string body(reinterpret_cast<const char*>(envelope.data()), envelope.size());
  auto res = client.Post(url.path, body, "application/octet-stream");
  if (!res) throw Error(ErrorCode::kBackendUnreachable, url_ + ": " + httplib::to_string(res.error()));
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kBackendMalformedOutput, url_ + ": HTTP " + std::to_string(res->status) + " non-JSON reply");
  }
  if (res->status != 200) {
    // Re-raise the cloud-side error code when it is one we know.
    ErrorCode code = res->status >= 500 ? ErrorCode::kBackendUnreachable : ErrorCode::kBackendMalformedOutput;
    const std::string name = doc.value("error", std::string());
    for (int c = 0; c <= static_cast<int>(ErrorCode::kDuplicateFrame); ++c) {
      if (error_code_name(static_cast<ErrorCode>(c)) == name) code = static_cast<ErrorCode>(c);
    }
    throw Error(code, url_ + ": " + doc.value("message", std::string("HTTP ") + std::to_string(res->status)));
  }
  return {response_from_wire_json(doc), res->body.size()};
}

nlohmann::json CloudClient::health() {
  const Url url = parse_url(url_, "/v1/health");
  httplib::Client client(url.scheme_host_port);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::duration<double>(timeout_s_)));
  auto res = client.Get("/v1/health");
  if (!res) throw Error(ErrorCode::kBackendUnreachable, url_ + ": " + httplib::to_string(res.error()));
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBackendMalformedOutput, url_ + ": " + e.what());
  }
}

}  // namespace odal
