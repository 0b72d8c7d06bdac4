// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace odal {

enum class DType : std::uint8_t { kF32, kF16, kI8Scaled };

std::string_view dtype_name(DType dtype);  // "F32" / "F16" / "I8Scaled"
DType dtype_from_name(std::string_view name);
std::size_t dtype_width(DType dtype);

// Vision-encoder output crossing the edge/cloud boundary. Elements are stored
// row-major, little-endian; I8Scaled carries one float scale per tensor.
struct EmbeddingTensor {
  std::string encoder_id;
  DType dtype = DType::kF32;
  float scale = 1.0f;
  std::uint64_t tokens = 0;
  std::uint64_t dim = 0;
  std::vector<std::byte> data;

  std::uint64_t element_count() const noexcept { return tokens * dim; }
  std::uint64_t expected_bytes() const noexcept { return element_count() * dtype_width(dtype); }
  bool valid() const noexcept { return tokens >= 1 && dim >= 1 && data.size() == expected_bytes(); }

  // Quantizes/converts from floats. I8Scaled uses scale = max|x| / 127.
  static EmbeddingTensor from_f32(std::string encoder_id, std::span<const float> values, std::uint64_t tokens,
                                  std::uint64_t dim, DType dtype);
  std::vector<float> to_f32() const;

  friend bool operator==(const EmbeddingTensor&, const EmbeddingTensor&) = default;
};

}  // namespace odal
