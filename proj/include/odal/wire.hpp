// SPDX-License-Identifier: Apache-2.0

#pragma once

// Binary envelope for edge/cloud traffic. Layout, all integers little-endian:
//
//   offset  size  field
//   0       4     magic "ODAL"
//   4       1     version (1)
//   5       1     message type (1 upload, 2 response, 3 error)
//   6       4     meta_len
//   10      m     meta, UTF-8 JSON
//   10+m    8     body_len
//   18+m    b     body
//   18+m+b  4     CRC-32C over meta ‖ body

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odal/model.hpp"
#include "odal/tensor.hpp"

namespace odal {

inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::size_t kEnvelopeOverhead = 4 + 1 + 1 + 4 + 8 + 4;

enum class MessageType : std::uint8_t { kEmbeddingUpload = 1, kInferenceResponse = 2, kError = 3 };

struct Envelope {
  MessageType type = MessageType::kEmbeddingUpload;
  std::string meta;
  std::vector<std::byte> body;
};

std::vector<std::byte> encode_envelope(MessageType type, std::string_view meta, std::span<const std::byte> body);
// Throws kBadMagic, kUnsupportedVersion, kLengthMismatch or kChecksumMismatch.
Envelope decode_envelope(std::span<const std::byte> bytes);

constexpr std::uint64_t envelope_size(std::uint64_t meta_len, std::uint64_t body_len) noexcept {
  return kEnvelopeOverhead + meta_len + body_len;
}

struct EmbeddingMeta {
  std::string frame_id;
  std::string encoder_id;
  DType dtype = DType::kF32;
  float scale = 1.0f;
  std::uint64_t tokens = 0;
  std::uint64_t dim = 0;
  PromptVersion prompt_version = PromptVersion::kV1;

  friend bool operator==(const EmbeddingMeta&, const EmbeddingMeta&) = default;
};

// Compact JSON with sorted keys; identical inputs give identical bytes.
std::string embedding_meta_json(const EmbeddingMeta& meta);
EmbeddingMeta meta_for(const EmbeddingTensor& tensor, std::string_view frame_id, PromptVersion prompt_version);

std::vector<std::byte> encode_embedding_message(const EmbeddingTensor& tensor, std::string_view frame_id,
                                                PromptVersion prompt_version);

struct DecodedEmbedding {
  EmbeddingTensor tensor;
  EmbeddingMeta meta;
};

DecodedEmbedding decode_embedding_message(std::span<const std::byte> bytes);

// Error envelope: meta {"error": code, "message": text}, empty body.
std::vector<std::byte> encode_error_message(std::string_view code, std::string_view message);

}  // namespace odal
