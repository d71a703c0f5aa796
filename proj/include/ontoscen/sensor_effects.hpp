#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ontoscen {

// 8-bit RGB raster, stored row-major with three bytes per pixel and
// serialized as binary PPM (P6, maxval 255).
struct Pixmap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> data;

  static Pixmap parse(std::string_view bytes);
  static Pixmap load(const std::string& path);

  std::string serialize() const;
  void save(const std::string& path) const;

  std::uint8_t* pixel(std::size_t x, std::size_t y) {
    return data.data() + 3 * (y * width + x);
  }
  const std::uint8_t* pixel(std::size_t x, std::size_t y) const {
    return data.data() + 3 * (y * width + x);
  }
};

// Dead-pixel coordinates for a sensor of a fixed resolution.
//
//   MASK/1
//   <width> <height>
//   <x> <y>        (one line per dead pixel)
//
// Blank lines and '#' comments are ignored when parsing; serialization
// keeps the pixel order of the parsed input.
struct PixelMask {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pixels;

  static PixelMask parse(std::string_view text);
  static PixelMask load(const std::string& path);

  std::string serialize() const;
};

// Blacks out every masked pixel. The mask resolution must match the image.
void apply_dead_pixels(Pixmap& image, const PixelMask& mask);

// Multiplies every channel by `gain` (finite, > 1), clamping at white:
// v' = min(llround(v * gain), 255).
void apply_overexposure(Pixmap& image, double gain);

}  // namespace ontoscen
