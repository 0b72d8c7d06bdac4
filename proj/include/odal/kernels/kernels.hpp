// SPDX-License-Identifier: Apache-2.0

#pragma once

// Data-parallel inner loops used by the wire codec, the embedding tensor
// helpers and the image transforms. Every kernel has a scalar reference
// implementation; x86-64 hosts with AVX2/F16C/SSE4.2 get vector variants
// selected once at startup. Setting ODAL_FORCE_SCALAR=1 in the environment
// pins the scalar path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace odal::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

// Best instruction set supported by the running CPU (ignores overrides).
Isa detected_isa();
Isa active_isa();
// Testing hook; requesting an unsupported ISA falls back to scalar.
void force_isa(Isa isa);

// CRC-32C (Castagnoli). `previous` is the result over preceding bytes, so
// crc32c(b, crc32c(a)) == crc32c(a ‖ b).
std::uint32_t crc32c(std::span<const std::byte> data, std::uint32_t previous = 0);

// IEEE binary16 conversions, round-to-nearest-even.
void f32_to_f16(std::span<const float> in, std::span<std::uint16_t> out);
void f16_to_f32(std::span<const std::uint16_t> in, std::span<float> out);

// out[i] = clamp(round_half_even(in[i] * factor), 0, 255), computed in float.
void scale_u8(std::span<const std::uint8_t> in, float factor, std::span<std::uint8_t> out);

namespace scalar {
std::uint32_t crc32c(std::span<const std::byte> data, std::uint32_t previous);
void f32_to_f16(std::span<const float> in, std::span<std::uint16_t> out);
void f16_to_f32(std::span<const std::uint16_t> in, std::span<float> out);
void scale_u8(std::span<const std::uint8_t> in, float factor, std::span<std::uint8_t> out);
std::uint16_t f32_to_f16_one(float value);
float f16_to_f32_one(std::uint16_t value);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define ODAL_HAVE_X86_KERNELS 1
namespace avx2 {
std::uint32_t crc32c(std::span<const std::byte> data, std::uint32_t previous);
void f32_to_f16(std::span<const float> in, std::span<std::uint16_t> out);
void f16_to_f32(std::span<const std::uint16_t> in, std::span<float> out);
void scale_u8(std::span<const std::uint8_t> in, float factor, std::span<std::uint8_t> out);
}  // namespace avx2
#else
#define ODAL_HAVE_X86_KERNELS 0
#endif

}  // namespace odal::kernels
