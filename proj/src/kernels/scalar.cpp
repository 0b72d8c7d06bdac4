// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include "odal/kernels/kernels.hpp"

namespace odal::kernels::scalar {

namespace {

constexpr std::uint32_t kCastagnoliReflected = 0x82F63B78u;

// Slicing-by-8 tables.
constexpr std::array<std::array<std::uint32_t, 256>, 8> make_tables() {
  std::array<std::array<std::uint32_t, 256>, 8> t{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1u) ? (c >> 1) ^ kCastagnoliReflected : c >> 1;
    t[0][i] = c;
  }
  for (std::size_t s = 1; s < 8; ++s) {
    for (std::size_t i = 0; i < 256; ++i) t[s][i] = (t[s - 1][i] >> 8) ^ t[0][t[s - 1][i] & 0xffu];
  }
  return t;
}

constexpr auto kTables = make_tables();

}  // namespace

std::uint32_t crc32c(std::span<const std::byte> data, std::uint32_t previous) {
  std::uint32_t crc = ~previous;
  const auto* p = reinterpret_cast<const std::uint8_t*>(data.data());
  std::size_t n = data.size();
  while (n >= 8) {
    const std::uint32_t lo = crc ^ (static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
                                    static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24);
    crc = kTables[7][lo & 0xffu] ^ kTables[6][(lo >> 8) & 0xffu] ^ kTables[5][(lo >> 16) & 0xffu] ^
          kTables[4][lo >> 24] ^ kTables[3][p[4]] ^ kTables[2][p[5]] ^ kTables[1][p[6]] ^ kTables[0][p[7]];
    p += 8;
    n -= 8;
  }
  while (n-- > 0) crc = (crc >> 8) ^ kTables[0][(crc ^ *p++) & 0xffu];
  return ~crc;
}

std::uint16_t f32_to_f16_one(float value) {
  std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
  const std::uint32_t sign = (bits >> 16) & 0x8000u;
  bits &= 0x7fffffffu;
  constexpr std::uint32_t kF32Inf = 0x7f800000u;
  constexpr std::uint32_t kF16MaxPlusOne = (127u + 16u) << 23;  // 65536.0f
  if (bits > kF32Inf) {
    // Quiet NaN keeping the upper payload bits.
    return static_cast<std::uint16_t>(sign | 0x7e00u | ((bits >> 13) & 0x3ffu));
  }
  if (bits >= kF16MaxPlusOne) return static_cast<std::uint16_t>(sign | 0x7c00u);
  if (bits < (113u << 23)) {
    // Subnormal or zero half: let the FPU do round-to-nearest-even by
    // aligning the value against a magic constant.
    constexpr std::uint32_t kDenormMagicBits = ((127u - 15u) + (23u - 10u) + 1u) << 23;
    const float magic = std::bit_cast<float>(kDenormMagicBits);
    const float shifted = std::bit_cast<float>(bits) + magic;
    return static_cast<std::uint16_t>(sign | (std::bit_cast<std::uint32_t>(shifted) - kDenormMagicBits));
  }
  const std::uint32_t mant_odd = (bits >> 13) & 1u;
  bits += (static_cast<std::uint32_t>(15 - 127) << 23) + 0xfffu;
  bits += mant_odd;
  return static_cast<std::uint16_t>(sign | (bits >> 13));
}

float f16_to_f32_one(std::uint16_t value) {
  const std::uint32_t sign = static_cast<std::uint32_t>(value & 0x8000u) << 16;
  const std::uint32_t exponent = (value >> 10) & 0x1fu;
  std::uint32_t mantissa = value & 0x3ffu;
  std::uint32_t bits = 0;
  if (exponent == 0x1fu) {
    bits = sign | 0x7f800000u | (mantissa << 13);
    if (mantissa != 0) bits |= 0x00400000u;
  } else if (exponent != 0) {
    bits = sign | ((exponent + 112u) << 23) | (mantissa << 13);
  } else if (mantissa != 0) {
    std::uint32_t e = 113u;
    while ((mantissa & 0x400u) == 0) {
      mantissa <<= 1;
      --e;
    }
    bits = sign | (e << 23) | ((mantissa & 0x3ffu) << 13);
  } else {
    bits = sign;
  }
  return std::bit_cast<float>(bits);
}

void f32_to_f16(std::span<const float> in, std::span<std::uint16_t> out) {
  const std::size_t n = std::min(in.size(), out.size());
  for (std::size_t i = 0; i < n; ++i) out[i] = f32_to_f16_one(in[i]);
}

void f16_to_f32(std::span<const std::uint16_t> in, std::span<float> out) {
  const std::size_t n = std::min(in.size(), out.size());
  for (std::size_t i = 0; i < n; ++i) out[i] = f16_to_f32_one(in[i]);
}

void scale_u8(std::span<const std::uint8_t> in, float factor, std::span<std::uint8_t> out) {
  const std::size_t n = std::min(in.size(), out.size());
  for (std::size_t i = 0; i < n; ++i) {
    float x = static_cast<float>(in[i]) * factor;
    x = std::min(std::max(x, 0.0f), 255.0f);
    out[i] = static_cast<std::uint8_t>(std::nearbyint(x));
  }
}

}  // namespace odal::kernels::scalar
