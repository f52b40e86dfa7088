#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vortexcrypt/grid.hpp"

namespace vortexcrypt {

// 8-bit image, channel-planar: channels planes of rows x cols samples, each row-major.
struct Image {
  GridShape shape{1, 1};
  std::size_t channels = 1;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(GridShape s, std::size_t c) : shape{s}, channels{c}, pixels(s.size() * c, 0) {}
  Image(GridShape s, std::size_t c, std::vector<std::uint8_t> data)
      : shape{s}, channels{c}, pixels{std::move(data)} {
    if (c == 0 || pixels.size() != s.size() * c) {
      throw FormatError("image buffer holds " + std::to_string(pixels.size()) + " samples, expected " +
                        std::to_string(s.size() * c));
    }
  }

  std::uint8_t& at(std::size_t channel, const Coord& c) {
    return pixels[channel * shape.size() + shape.index_of(c)];
  }
  std::uint8_t at(std::size_t channel, const Coord& c) const {
    return pixels[channel * shape.size() + shape.index_of(c)];
  }

  friend bool operator==(const Image&, const Image&) = default;
};

}  // namespace vortexcrypt
