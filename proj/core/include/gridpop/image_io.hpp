#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace gridpop {

/// 8-bit interleaved image, row-major, 1 or 3 channels.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> samples;

  Image() = default;
  Image(int w, int h, int c, std::uint8_t fill = 0)
      : width(w), height(h), channels(c),
        samples(static_cast<std::size_t>(w) * h * c, fill) {}

  std::size_t index(int x, int y, int c = 0) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  std::uint8_t at(int x, int y, int c = 0) const { return samples[index(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c = 0) { return samples[index(x, y, c)]; }

  friend bool operator==(const Image&, const Image&) = default;
};

/// Reads an 8-bit PNG. Gray and gray+alpha decode to 1 channel, everything
/// else to RGB (alpha dropped, palettes expanded). 16-bit files are rejected.
Image read_png(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const Image& image);

}  // namespace gridpop
