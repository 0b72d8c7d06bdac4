// SPDX-License-Identifier: Apache-2.0

#include "odal/wire.hpp"

#include <cstring>

#include <nlohmann/json.hpp>

#include "odal/error.hpp"
#include "odal/kernels/kernels.hpp"

namespace odal {

namespace {

constexpr std::byte kMagic[4] = {std::byte{'O'}, std::byte{'D'}, std::byte{'A'}, std::byte{'L'}};

template <typename T>
void put_le(std::vector<std::byte>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::byte>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xffu));
  }
}

template <typename T>
T get_le(std::span<const std::byte> bytes, std::size_t offset) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::to_integer<std::uint64_t>(bytes[offset + i]) << (8 * i);
  return static_cast<T>(v);
}

[[noreturn]] void length_mismatch(const std::string& what) { throw Error(ErrorCode::kLengthMismatch, what); }

}  // namespace

std::vector<std::byte> encode_envelope(MessageType type, std::string_view meta, std::span<const std::byte> body) {
  std::vector<std::byte> out;
  out.reserve(envelope_size(meta.size(), body.size()));
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(static_cast<std::byte>(kWireVersion));
  out.push_back(static_cast<std::byte>(type));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(meta.size()));
  const auto meta_bytes = std::as_bytes(std::span(meta.data(), meta.size()));
  out.insert(out.end(), meta_bytes.begin(), meta_bytes.end());
  put_le<std::uint64_t>(out, body.size());
  out.insert(out.end(), body.begin(), body.end());
  const std::uint32_t crc = kernels::crc32c(body, kernels::crc32c(meta_bytes));
  put_le<std::uint32_t>(out, crc);
  return out;
}

Envelope decode_envelope(std::span<const std::byte> bytes) {
  const std::size_t n = bytes.size();
  const std::size_t magic_len = n < 4 ? n : 4;
  if (magic_len > 0 && std::memcmp(bytes.data(), kMagic, magic_len) != 0) throw Error(ErrorCode::kBadMagic, "expected \"ODAL\"");
  if (n < 4) length_mismatch("stream shorter than magic");
  if (n < 6) length_mismatch("stream shorter than header");
  const auto version = std::to_integer<std::uint8_t>(bytes[4]);
  if (version != kWireVersion) {
    throw Error(ErrorCode::kUnsupportedVersion, "envelope version " + std::to_string(version));
  }
  const auto type = std::to_integer<std::uint8_t>(bytes[5]);
  if (type < 1 || type > 3) throw Error(ErrorCode::kUnsupportedVersion, "message type " + std::to_string(type));
  if (n < 10) length_mismatch("stream shorter than header");
  const std::uint64_t meta_len = get_le<std::uint32_t>(bytes, 6);
  if (n - 10 < meta_len + 8) length_mismatch("meta_len exceeds stream");
  const std::uint64_t body_len = get_le<std::uint64_t>(bytes, 10 + meta_len);
  const std::uint64_t fixed = 18 + meta_len + 4;
  if (body_len > n || n - body_len < fixed) length_mismatch("body_len exceeds stream");
  if (n != fixed + body_len) length_mismatch("trailing bytes after checksum");

  const auto meta = bytes.subspan(10, meta_len);
  const auto body = bytes.subspan(18 + meta_len, body_len);
  const std::uint32_t stored = get_le<std::uint32_t>(bytes, n - 4);
  const std::uint32_t actual = kernels::crc32c(body, kernels::crc32c(meta));
  if (stored != actual) throw Error(ErrorCode::kChecksumMismatch, "envelope corrupted in transit");

  Envelope env;
  env.type = static_cast<MessageType>(type);
  env.meta.assign(reinterpret_cast<const char*>(meta.data()), meta.size());
  env.body.assign(body.begin(), body.end());
  return env;
}

std::string embedding_meta_json(const EmbeddingMeta& meta) {
  nlohmann::json doc{{"frame_id", meta.frame_id},
                     {"encoder_id", meta.encoder_id},
                     {"dtype", dtype_name(meta.dtype)},
                     {"shape", {meta.tokens, meta.dim}},
                     {"prompt_version", prompt_version_name(meta.prompt_version)}};
  if (meta.dtype == DType::kI8Scaled) doc["scale"] = static_cast<double>(meta.scale);
  return doc.dump();
}

EmbeddingMeta meta_for(const EmbeddingTensor& tensor, std::string_view frame_id, PromptVersion prompt_version) {
  return EmbeddingMeta{std::string(frame_id), tensor.encoder_id, tensor.dtype, tensor.scale,
                       tensor.tokens,         tensor.dim,        prompt_version};
}

std::vector<std::byte> encode_embedding_message(const EmbeddingTensor& tensor, std::string_view frame_id,
                                                PromptVersion prompt_version) {
  if (!tensor.valid()) throw Error(ErrorCode::kInvalidArgument, "invalid embedding tensor");
  return encode_envelope(MessageType::kEmbeddingUpload, embedding_meta_json(meta_for(tensor, frame_id, prompt_version)),
                         tensor.data);
}

DecodedEmbedding decode_embedding_message(std::span<const std::byte> bytes) {
  Envelope env = decode_envelope(bytes);
  if (env.type == MessageType::kError) {
    std::string message = env.meta;
    try {
      const auto doc = nlohmann::json::parse(env.meta);
      message = doc.value("error", std::string("Error")) + ": " + doc.value("message", std::string());
    } catch (const nlohmann::json::exception&) {
    }
    throw Error(ErrorCode::kBackendMalformedOutput, "peer sent an error envelope: " + message);
  }
  if (env.type != MessageType::kEmbeddingUpload) {
    throw Error(ErrorCode::kBackendMalformedOutput, "expected an embedding upload envelope");
  }
  DecodedEmbedding out;
  try {
    const auto doc = nlohmann::json::parse(env.meta);
    out.meta.frame_id = doc.at("frame_id").get<std::string>();
    out.meta.encoder_id = doc.at("encoder_id").get<std::string>();
    out.meta.dtype = dtype_from_name(doc.at("dtype").get<std::string>());
    const auto& shape = doc.at("shape");
    if (!shape.is_array() || shape.size() != 2) throw Error(ErrorCode::kInvalidArgument, "shape must be [tokens, dim]");
    out.meta.tokens = shape[0].get<std::uint64_t>();
    out.meta.dim = shape[1].get<std::uint64_t>();
    out.meta.prompt_version = prompt_version_from_name(doc.at("prompt_version").get<std::string>());
    if (out.meta.dtype == DType::kI8Scaled) out.meta.scale = static_cast<float>(doc.at("scale").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed envelope meta: ") + e.what());
  }
  out.tensor.encoder_id = out.meta.encoder_id;
  out.tensor.dtype = out.meta.dtype;
  out.tensor.scale = out.meta.scale;
  out.tensor.tokens = out.meta.tokens;
  out.tensor.dim = out.meta.dim;
  out.tensor.data = std::move(env.body);
  if (!out.tensor.valid()) length_mismatch("body length does not match the declared shape and dtype");
  return out;
}

std::vector<std::byte> encode_error_message(std::string_view code, std::string_view message) {
  const nlohmann::json meta{{"error", code}, {"message", message}};
  return encode_envelope(MessageType::kError, meta.dump(), {});
}

}  // namespace odal
