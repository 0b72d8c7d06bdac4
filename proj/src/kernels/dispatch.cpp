// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <string>

#include "odal/kernels/kernels.hpp"

namespace odal::kernels {

namespace {

Isa probe() {
#if ODAL_HAVE_X86_KERNELS
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("f16c") && __builtin_cpu_supports("sse4.2")) {
    return Isa::kAvx2;
  }
#endif
  return Isa::kScalar;
}

Isa initial_isa() {
  const char* force = std::getenv("ODAL_FORCE_SCALAR");
  if (force != nullptr && std::string(force) != "0" && std::string(force) != "") return Isa::kScalar;
  return detected_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

Isa detected_isa() {
  static const Isa isa = probe();
  return isa;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::kAvx2 && detected_isa() != Isa::kAvx2) isa = Isa::kScalar;
  active().store(isa, std::memory_order_relaxed);
}

std::uint32_t crc32c(std::span<const std::byte> data, std::uint32_t previous) {
#if ODAL_HAVE_X86_KERNELS
  if (active_isa() == Isa::kAvx2) return avx2::crc32c(data, previous);
#endif
  return scalar::crc32c(data, previous);
}

void f32_to_f16(std::span<const float> in, std::span<std::uint16_t> out) {
#if ODAL_HAVE_X86_KERNELS
  if (active_isa() == Isa::kAvx2) return avx2::f32_to_f16(in, out);
#endif
  scalar::f32_to_f16(in, out);
}

void f16_to_f32(std::span<const std::uint16_t> in, std::span<float> out) {
#if ODAL_HAVE_X86_KERNELS
  if (active_isa() == Isa::kAvx2) return avx2::f16_to_f32(in, out);
#endif
  scalar::f16_to_f32(in, out);
}

void scale_u8(std::span<const std::uint8_t> in, float factor, std::span<std::uint8_t> out) {
#if ODAL_HAVE_X86_KERNELS
  if (active_isa() == Isa::kAvx2) return avx2::scale_u8(in, factor, out);
#endif
  scalar::scale_u8(in, factor, out);
}

}  // namespace odal::kernels
