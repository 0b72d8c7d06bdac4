// SPDX-License-Identifier: Apache-2.0

#include "odal/kernels/kernels.hpp"

#if ODAL_HAVE_X86_KERNELS

#include <immintrin.h>

#include <algorithm>
#include <cstring>

// Functions carry target attributes instead of file-wide -m flags so no
// AVX2-encoded inline code leaks into the rest of the program.
#define ODAL_TARGET_CRC __attribute__((target("sse4.2")))
#define ODAL_TARGET_VEC __attribute__((target("avx2,f16c")))

namespace odal::kernels::avx2 {

ODAL_TARGET_CRC std::uint32_t crc32c(std::span<const std::byte> data, std::uint32_t previous) {
  std::uint64_t crc = ~previous & 0xffffffffu;
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  std::size_t n = data.size();
  while (n >= 8) {
    std::uint64_t word;
    std::memcpy(&word, p, sizeof(word));
    crc = _mm_crc32_u64(crc, word);
    p += 8;
    n -= 8;
  }
  auto crc32 = static_cast<std::uint32_t>(crc);
  while (n-- > 0) crc32 = _mm_crc32_u8(crc32, *p++);
  return ~crc32;
}

ODAL_TARGET_VEC void f32_to_f16(std::span<const float> in, std::span<std::uint16_t> out) {
  const std::size_t n = std::min(in.size(), out.size());
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 v = _mm256_loadu_ps(in.data() + i);
    const __m128i h = _mm256_cvtps_ph(v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out.data() + i), h);
  }
  if (i < n) {
    alignas(32) float tail_in[8] = {};
    alignas(16) std::uint16_t tail_out[8] = {};
    std::memcpy(tail_in, in.data() + i, (n - i) * sizeof(float));
    const __m128i h = _mm256_cvtps_ph(_mm256_load_ps(tail_in), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    _mm_store_si128(reinterpret_cast<__m128i*>(tail_out), h);
    std::memcpy(out.data() + i, tail_out, (n - i) * sizeof(std::uint16_t));
  }
}

ODAL_TARGET_VEC void f16_to_f32(std::span<const std::uint16_t> in, std::span<float> out) {
  const std::size_t n = std::min(in.size(), out.size());
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m128i h = _mm_loadu_si128(reinterpret_cast<const __m128i*>(in.data() + i));
    _mm256_storeu_ps(out.data() + i, _mm256_cvtph_ps(h));
  }
  if (i < n) {
    alignas(16) std::uint16_t tail_in[8] = {};
    alignas(32) float tail_out[8] = {};
    std::memcpy(tail_in, in.data() + i, (n - i) * sizeof(std::uint16_t));
    _mm256_store_ps(tail_out, _mm256_cvtph_ps(_mm_load_si128(reinterpret_cast<const __m128i*>(tail_in))));
    std::memcpy(out.data() + i, tail_out, (n - i) * sizeof(float));
  }
}

ODAL_TARGET_VEC void scale_u8(std::span<const std::uint8_t> in, float factor, std::span<std::uint8_t> out) {
  const std::size_t n = std::min(in.size(), out.size());
  const __m256 f = _mm256_set1_ps(factor);
  const __m256 lo = _mm256_setzero_ps();
  const __m256 hi = _mm256_set1_ps(255.0f);
  // Gathers byte 0 of every 32-bit lane into the low dword of each 128-bit half.
  const __m256i pick = _mm256_setr_epi8(0, 4, 8, 12, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
                                        0, 4, 8, 12, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    std::int64_t packed8;
    std::memcpy(&packed8, in.data() + i, sizeof(packed8));
    const __m256i wide = _mm256_cvtepu8_epi32(_mm_cvtsi64_si128(packed8));
    __m256 x = _mm256_mul_ps(_mm256_cvtepi32_ps(wide), f);
    x = _mm256_min_ps(_mm256_max_ps(x, lo), hi);
    const __m256i rounded = _mm256_cvtps_epi32(x);
    const __m256i bytes = _mm256_shuffle_epi8(rounded, pick);
    const std::uint32_t lo4 = static_cast<std::uint32_t>(_mm_cvtsi128_si32(_mm256_castsi256_si128(bytes)));
    const std::uint32_t hi4 = static_cast<std::uint32_t>(_mm_cvtsi128_si32(_mm256_extracti128_si256(bytes, 1)));
    std::memcpy(out.data() + i, &lo4, 4);
    std::memcpy(out.data() + i + 4, &hi4, 4);
  }
  if (i < n) scalar::scale_u8(in.subspan(i, n - i), factor, out.subspan(i, n - i));
}

}  // namespace odal::kernels::avx2

#endif  // ODAL_HAVE_X86_KERNELS
