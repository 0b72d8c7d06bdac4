// SPDX-License-Identifier: Apache-2.0

#include "odal/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "odal/error.hpp"
#include "odal/kernels/kernels.hpp"

namespace odal {

static_assert(std::endian::native == std::endian::little, "wire format assumes a little-endian host");

std::string_view dtype_name(DType dtype) {
  switch (dtype) {
    case DType::kF32: return "F32";
    case DType::kF16: return "F16";
    case DType::kI8Scaled: return "I8Scaled";
  }
  return "F32";
}

DType dtype_from_name(std::string_view name) {
  if (name == "F32") return DType::kF32;
  if (name == "F16") return DType::kF16;
  if (name == "I8Scaled") return DType::kI8Scaled;
  throw Error(ErrorCode::kInvalidArgument, "unknown dtype \"" + std::string(name) + "\"");
}

std::size_t dtype_width(DType dtype) {
  switch (dtype) {
    case DType::kF32: return 4;
    case DType::kF16: return 2;
    case DType::kI8Scaled: return 1;
  }
  return 4;
}

EmbeddingTensor EmbeddingTensor::from_f32(std::string encoder_id, std::span<const float> values, std::uint64_t tokens,
                                          std::uint64_t dim, DType dtype) {
  if (tokens < 1 || dim < 1 || values.size() != tokens * dim) {
    throw Error(ErrorCode::kInvalidArgument, "tensor shape does not match value count");
  }
  EmbeddingTensor t;
  t.encoder_id = std::move(encoder_id);
  t.dtype = dtype;
  t.tokens = tokens;
  t.dim = dim;
  t.data.resize(t.expected_bytes());
  switch (dtype) {
    case DType::kF32:
      std::memcpy(t.data.data(), values.data(), t.data.size());
      break;
    case DType::kF16: {
      std::vector<std::uint16_t> half(values.size());
      kernels::f32_to_f16(values, half);
      std::memcpy(t.data.data(), half.data(), t.data.size());
      break;
    }
    case DType::kI8Scaled: {
      float max_abs = 0.0f;
      for (float v : values) max_abs = std::max(max_abs, std::fabs(v));
      t.scale = max_abs > 0.0f ? max_abs / 127.0f : 1.0f;
      for (std::size_t i = 0; i < values.size(); ++i) {
        const float q = std::clamp(std::nearbyint(values[i] / t.scale), -127.0f, 127.0f);
        t.data[i] = static_cast<std::byte>(static_cast<std::int8_t>(q));
      }
      break;
    }
  }
  return t;
}

std::vector<float> EmbeddingTensor::to_f32() const {
  if (!valid()) throw Error(ErrorCode::kInvalidArgument, "invalid tensor");
  std::vector<float> out(element_count());
  switch (dtype) {
    case DType::kF32:
      std::memcpy(out.data(), data.data(), data.size());
      break;
    case DType::kF16: {
      std::vector<std::uint16_t> half(out.size());
      std::memcpy(half.data(), data.data(), data.size());
      kernels::f16_to_f32(half, out);
      break;
    }
    case DType::kI8Scaled:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<float>(static_cast<std::int8_t>(data[i])) * scale;
      break;
  }
  return out;
}

}  // namespace odal
