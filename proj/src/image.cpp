// SPDX-License-Identifier: Apache-2.0

#include "odal/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <string>

#include "odal/error.hpp"
#include "odal/kernels/kernels.hpp"

namespace odal {

namespace {

void require_valid(const RgbImage& image) {
  if (!image.valid()) throw Error(ErrorCode::kInvalidArgument, "pixel buffer does not match image size");
}

// Inverse-maps every destination pixel through `source_of` (returns source
// coordinates as doubles) with nearest-neighbour sampling.
template <typename F>
RgbImage resample(const RgbImage& image, F source_of) {
  RgbImage out = RgbImage::filled(image.width, image.height, 0, 0, 0);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const auto [sx, sy] = source_of(static_cast<double>(x), static_cast<double>(y));
      const long ix = std::lround(sx);
      const long iy = std::lround(sy);
      if (ix < 0 || iy < 0 || ix >= image.width || iy >= image.height) continue;
      std::memcpy(&out.pixels[out.offset(x, y)], &image.pixels[image.offset(static_cast<int>(ix), static_cast<int>(iy))],
                  3);
    }
  }
  return out;
}

}  // namespace

RgbImage RgbImage::filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (width < 0 || height < 0) throw Error(ErrorCode::kInvalidArgument, "negative image size");
  RgbImage image{width, height, {}};
  image.pixels.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  for (std::size_t i = 0; i < image.pixels.size(); i += 3) {
    image.pixels[i] = r;
    image.pixels[i + 1] = g;
    image.pixels[i + 2] = b;
  }
  return image;
}

std::vector<std::byte> encode_ppm(const RgbImage& image) {
  require_valid(image);
  const std::string header = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::byte> out(header.size() + image.pixels.size());
  std::memcpy(out.data(), header.data(), header.size());
  if (!image.pixels.empty()) std::memcpy(out.data() + header.size(), image.pixels.data(), image.pixels.size());
  return out;
}

RgbImage decode_ppm(std::span<const std::byte> bytes) {
  std::size_t pos = 0;
  auto peek = [&]() -> int { return pos < bytes.size() ? std::to_integer<int>(bytes[pos]) : -1; };
  auto skip_space = [&] {
    while (true) {
      const int c = peek();
      if (c == '#') {
        while (peek() != -1 && peek() != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos;
      } else {
        return;
      }
    }
  };
  auto read_int = [&]() -> long {
    skip_space();
    long value = 0;
    int digits = 0;
    while (peek() >= '0' && peek() <= '9') {
      value = value * 10 + (peek() - '0');
      ++pos;
      if (++digits > 9) throw Error(ErrorCode::kInvalidArgument, "PPM header number too large");
    }
    if (digits == 0) throw Error(ErrorCode::kInvalidArgument, "malformed PPM header");
    return value;
  };
  if (bytes.size() < 2 || peek() != 'P' || std::to_integer<int>(bytes[1]) != '6') {
    throw Error(ErrorCode::kInvalidArgument, "not a binary PPM (P6) image");
  }
  pos = 2;
  const long width = read_int();
  const long height = read_int();
  const long maxval = read_int();
  if (maxval != 255) throw Error(ErrorCode::kInvalidArgument, "only 8-bit PPM is supported");
  ++pos;  // single whitespace before the raster
  RgbImage image{static_cast<int>(width), static_cast<int>(height), {}};
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3;
  if (pos > bytes.size() || bytes.size() - pos < n) throw Error(ErrorCode::kInvalidArgument, "truncated PPM raster");
  image.pixels.resize(n);
  if (n > 0) std::memcpy(image.pixels.data(), bytes.data() + pos, n);
  return image;
}

RgbImage read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_ppm(std::as_bytes(std::span(raw)));
}

void write_ppm(const std::filesystem::path& path, const RgbImage& image) {
  const auto bytes = encode_ppm(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

RgbImage hflip(const RgbImage& image) {
  require_valid(image);
  RgbImage out = image;
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      std::memcpy(&out.pixels[out.offset(image.width - 1 - x, y)], &image.pixels[image.offset(x, y)], 3);
    }
  }
  return out;
}

RgbImage rotate(const RgbImage& image, double degrees) {
  require_valid(image);
  const double rad = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(rad);
  const double s = std::sin(rad);
  const double cx = (image.width - 1) / 2.0;
  const double cy = (image.height - 1) / 2.0;
  return resample(image, [&](double x, double y) {
    const double dx = x - cx;
    const double dy = y - cy;
    return std::pair{c * dx + s * dy + cx, -s * dx + c * dy + cy};
  });
}

RgbImage adjust_brightness(const RgbImage& image, double factor) {
  require_valid(image);
  RgbImage out{image.width, image.height, std::vector<std::uint8_t>(image.pixels.size())};
  kernels::scale_u8(image.pixels, static_cast<float>(factor), out.pixels);
  return out;
}

RgbImage affine(const RgbImage& image, double shear_degrees, double translate_x, double translate_y) {
  require_valid(image);
  const double shear = std::tan(shear_degrees * std::numbers::pi / 180.0);
  const double cy = (image.height - 1) / 2.0;
  const double tx = translate_x * image.width;
  const double ty = translate_y * image.height;
  return resample(image, [&](double x, double y) {
    const double sy = y - ty;
    return std::pair{x - tx - shear * (sy - cy), sy};
  });
}

RgbImage adjust_sharpness(const RgbImage& image, double factor) {
  require_valid(image);
  RgbImage out = image;
  if (image.width < 3 || image.height < 3) return out;
  const auto f = static_cast<float>(factor);
  for (int y = 1; y < image.height - 1; ++y) {
    for (int x = 1; x < image.width - 1; ++x) {
      for (int ch = 0; ch < 3; ++ch) {
        int sum = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) sum += image.pixels[image.offset(x + dx, y + dy) + ch];
        }
        const int centre = image.pixels[image.offset(x, y) + ch];
        sum += 4 * centre;  // kernel weight 5 at the centre, 1 elsewhere
        const float smooth = static_cast<float>(sum) / 13.0f;
        float v = smooth + f * (static_cast<float>(centre) - smooth);
        v = std::min(std::max(v, 0.0f), 255.0f);
        out.pixels[out.offset(x, y) + ch] = static_cast<std::uint8_t>(std::nearbyint(v));
      }
    }
  }
  return out;
}

}  // namespace odal
