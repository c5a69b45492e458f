#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gridmaze {

// 8-bit RGB, row-major, no padding.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::uint8_t* at(int x, int y) { return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3; }
  const std::uint8_t* at(int x, int y) const {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

// Fixed-parameter encoder: no ancillary chunks, one filter type, fixed zlib
// level. Identical images always encode to identical bytes.
std::vector<std::uint8_t> encode_png(const RgbImage& image);

// Decodes any PNG libpng understands into 8-bit RGB. Throws ImageError.
RgbImage decode_png(std::span<const std::uint8_t> bytes);

}  // namespace gridmaze
