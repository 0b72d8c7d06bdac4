// SPDX-License-Identifier: Apache-2.0

#include "odal/chat.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "odal/error.hpp"
#include "odal/http.hpp"

namespace odal {

OpenAiChatClient::OpenAiChatClient(OpenAiChatConfig config) : config_(std::move(config)) {}

ChatReply OpenAiChatClient::complete(const std::vector<ChatMessage>& messages, double temperature, int max_tokens) {
  const Url url = parse_url(config_.url, "/v1/chat/completions");
  httplib::Client client(url.scheme_host_port);
  const auto timeout = std::chrono::duration<double>(config_.timeout_s);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  nlohmann::json body{{"model", config_.model}, {"temperature", temperature}, {"max_tokens", max_tokens}};
  auto& msgs = body["messages"] = nlohmann::json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});

  auto res = client.Post(url.path, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kBackendUnreachable, config_.url + ": " + httplib::to_string(res.error()));
  }
  if (res->status >= 500 || res->status == 429) {
    throw Error(ErrorCode::kBackendUnreachable, config_.url + ": HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kBackendMalformedOutput, config_.url + ": HTTP " + std::to_string(res->status));
  }
  try {
    const auto doc = nlohmann::json::parse(res->body);
    ChatReply reply;
    reply.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
    if (doc.contains("usage") && doc["usage"].contains("completion_tokens")) {
      reply.completion_tokens = doc["usage"]["completion_tokens"].get<int>();
    }
    return reply;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBackendMalformedOutput, std::string("chat completion reply: ") + e.what());
  }
}

std::string api_key_from_env() {
  const char* key = std::getenv("ODAL_API_KEY");
  return key == nullptr ? std::string() : std::string(key);
}

}  // namespace odal
