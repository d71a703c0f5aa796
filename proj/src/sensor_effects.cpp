#include "ontoscen/sensor_effects.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include "ontoscen/errors.hpp"

namespace ontoscen {

namespace {

// PPM token scanner: whitespace separates tokens, '#' starts a comment
// that runs to the end of the line.
struct PpmScanner {
  std::string_view bytes;
  std::size_t pos = 0;

  void skip_separators() {
    while (pos < bytes.size()) {
      char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  std::size_t number(const char* what) {
    skip_separators();
    std::size_t value = 0;
    auto [end, ec] = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), value);
    if (ec != std::errc{} || end == bytes.data() + pos) {
      throw Error(ErrorCode::SyntaxError, std::string("ppm: expected ") + what);
    }
    pos = static_cast<std::size_t>(end - bytes.data());
    return value;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace

Pixmap Pixmap::parse(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw Error(ErrorCode::SyntaxError, "ppm: not a P6 image");
  }
  PpmScanner scanner{bytes, 2};
  Pixmap image;
  image.width = scanner.number("width");
  image.height = scanner.number("height");
  std::size_t maxval = scanner.number("maxval");
  if (image.width == 0 || image.height == 0) {
    throw Error(ErrorCode::SyntaxError, "ppm: image has zero area");
  }
  if (maxval != 255) {
    throw Error(ErrorCode::SyntaxError,
                "ppm: only 8-bit channels are supported (maxval 255, got " +
                    std::to_string(maxval) + ")");
  }
  // exactly one whitespace byte separates the header from the raster
  if (scanner.pos >= bytes.size() ||
      !std::isspace(static_cast<unsigned char>(bytes[scanner.pos]))) {
    throw Error(ErrorCode::SyntaxError, "ppm: missing separator before pixel data");
  }
  ++scanner.pos;
  std::size_t expected = image.width * image.height * 3;
  if (bytes.size() - scanner.pos != expected) {
    throw Error(ErrorCode::SyntaxError,
                "ppm: expected " + std::to_string(expected) + " raster bytes, got " +
                    std::to_string(bytes.size() - scanner.pos));
  }
  image.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(scanner.pos), bytes.end());
  return image;
}

Pixmap Pixmap::load(const std::string& path) { return parse(read_file(path)); }

std::string Pixmap::serialize() const {
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.append(data.begin(), data.end());
  return out;
}

void Pixmap::save(const std::string& path) const { write_file(path, serialize()); }

PixelMask PixelMask::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      if (auto hash = out.find('#'); hash != std::string::npos) out.erase(hash);
      while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
      if (!out.empty()) return true;
    }
    return false;
  };

  if (!next_line(line) || line != "MASK/1") {
    throw Error(ErrorCode::SyntaxError, "mask: expected MASK/1 header");
  }

  auto parse_pair = [&](const std::string& text_line, const char* what) {
    std::istringstream fields(text_line);
    std::size_t a = 0, b = 0;
    std::string tail;
    if (!(fields >> a >> b) || (fields >> tail)) {
      throw Error(ErrorCode::SyntaxError, std::string("mask: line ") + std::to_string(line_no) +
                                              ": expected '" + what + "'");
    }
    return std::pair<std::size_t, std::size_t>{a, b};
  };

  if (!next_line(line)) throw Error(ErrorCode::SyntaxError, "mask: missing dimensions");
  PixelMask mask;
  std::tie(mask.width, mask.height) = parse_pair(line, "<width> <height>");
  if (mask.width == 0 || mask.height == 0) {
    throw Error(ErrorCode::SyntaxError, "mask: zero dimensions");
  }

  while (next_line(line)) {
    auto [x, y] = parse_pair(line, "<x> <y>");
    if (x >= mask.width || y >= mask.height) {
      throw Error(ErrorCode::RangeError, "mask: pixel (" + std::to_string(x) + ", " +
                                             std::to_string(y) + ") outside " +
                                             std::to_string(mask.width) + "x" +
                                             std::to_string(mask.height));
    }
    mask.pixels.emplace_back(x, y);
  }
  if (mask.pixels.empty()) {
    throw Error(ErrorCode::EmptyMask, "mask lists no dead pixels");
  }
  return mask;
}

PixelMask PixelMask::load(const std::string& path) { return parse(read_file(path)); }

std::string PixelMask::serialize() const {
  std::string out = "MASK/1\n" + std::to_string(width) + " " + std::to_string(height) + "\n";
  for (const auto& [x, y] : pixels) {
    out += std::to_string(x) + " " + std::to_string(y) + "\n";
  }
  return out;
}

void apply_dead_pixels(Pixmap& image, const PixelMask& mask) {
  if (mask.width != image.width || mask.height != image.height) {
    throw Error(ErrorCode::DimensionMismatch,
                "mask is " + std::to_string(mask.width) + "x" + std::to_string(mask.height) +
                    " but image is " + std::to_string(image.width) + "x" +
                    std::to_string(image.height));
  }
  for (const auto& [x, y] : mask.pixels) {
    std::uint8_t* p = image.pixel(x, y);
    p[0] = p[1] = p[2] = 0;
  }
}

void apply_overexposure(Pixmap& image, double gain) {
  if (!std::isfinite(gain) || gain <= 1.0) {
    throw Error(ErrorCode::BadGain, "overexposure gain must be finite and > 1");
  }
  for (std::uint8_t& v : image.data) {
    long long scaled = std::llround(static_cast<double>(v) * gain);
    v = static_cast<std::uint8_t>(scaled > 255 ? 255 : scaled);
  }
}

}  // namespace ontoscen
