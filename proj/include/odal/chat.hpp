// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace odal {

struct ChatMessage {
  std::string role;  // "system" / "user" / "assistant"
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatReply {
  std::string text;
  std::optional<int> completion_tokens;  // as reported by the endpoint
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  // Throws Error(kBackendUnreachable) on transport failure and
  // Error(kBackendMalformedOutput) when the reply has no message content.
  virtual ChatReply complete(const std::vector<ChatMessage>& messages, double temperature, int max_tokens) = 0;
};

struct OpenAiChatConfig {
  std::string url;  // base or full chat-completions URL
  std::string model = "gpt-4o";
  std::string api_key;  // empty: no Authorization header
  double timeout_s = 60.0;
};

// Client for OpenAI-compatible POST /v1/chat/completions endpoints.
class OpenAiChatClient final : public ChatClient {
 public:
  explicit OpenAiChatClient(OpenAiChatConfig config);
  ChatReply complete(const std::vector<ChatMessage>& messages, double temperature, int max_tokens) override;
  const OpenAiChatConfig& config() const noexcept { return config_; }

 private:
  OpenAiChatConfig config_;
};

// API key from ODAL_API_KEY, empty when unset.
std::string api_key_from_env();

}  // namespace odal
