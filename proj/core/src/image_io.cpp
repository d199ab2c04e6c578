#include "gridpop/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <memory>

#include "gridpop/error.hpp"

namespace gridpop {
namespace {

struct PngImage {
  png_image img;
  PngImage() {
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&img); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

}  // namespace

Image read_png(const std::filesystem::path& path) {
  PngImage png;
  if (!png_image_begin_read_from_file(&png.img, path.c_str())) {
    throw Error(ErrorKind::input, "cannot read PNG " + path.string() + ": " + png.img.message);
  }
  if (png.img.format & PNG_FORMAT_FLAG_LINEAR) {
    throw Error(ErrorKind::parse, "16-bit PNG not supported: " + path.string());
  }
  const bool color = (png.img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  Image image(static_cast<int>(png.img.width), static_cast<int>(png.img.height), color ? 3 : 1);
  if (!png_image_finish_read(&png.img, nullptr, image.samples.data(), 0, nullptr)) {
    throw Error(ErrorKind::parse, "corrupt PNG " + path.string() + ": " + png.img.message);
  }
  return image;
}

void write_png(const std::filesystem::path& path, const Image& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw Error(ErrorKind::domain, "PNG export supports 1 or 3 channels");
  }
  PngImage png;
  png.img.width = static_cast<png_uint_32>(image.width);
  png.img.height = static_cast<png_uint_32>(image.height);
  png.img.format = image.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&png.img, path.c_str(), 0, image.samples.data(), 0, nullptr)) {
    throw Error(ErrorKind::input, "cannot write PNG " + path.string() + ": " + png.img.message);
  }
}

}  // namespace gridpop
