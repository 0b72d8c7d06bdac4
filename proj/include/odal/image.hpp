// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace odal {

// Row-major 8-bit RGB.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  static RgbImage filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b);
  bool valid() const noexcept {
    return width >= 0 && height >= 0 &&
           pixels.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3;
  }
  std::size_t offset(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
  }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

// Binary PPM (P6, maxval 255).
std::vector<std::byte> encode_ppm(const RgbImage& image);
RgbImage decode_ppm(std::span<const std::byte> bytes);
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const RgbImage& image);

RgbImage hflip(const RgbImage& image);
// Nearest-neighbour resampling about the image centre; uncovered pixels are black.
RgbImage rotate(const RgbImage& image, double degrees);
RgbImage adjust_brightness(const RgbImage& image, double factor);
// Horizontal shear about the centre row, then translation by a fraction of
// the image size per axis. Nearest neighbour, black fill.
RgbImage affine(const RgbImage& image, double shear_degrees, double translate_x, double translate_y);
// Blend between a 3x3 smoothed copy (factor 0) and the original (factor 1);
// factors above 1 extrapolate. Border pixels keep their value.
RgbImage adjust_sharpness(const RgbImage& image, double factor);

}  // namespace odal
