#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "qforge/error.hpp"
#include "qforge/raster.hpp"

namespace qforge {

namespace {

// Classic libpng API so the zlib level can be chosen: degraded pages are
// mostly noise, and at the default level writing them took about five
// times as long. Returns an error message, empty on success. No C++
// objects with destructors live across the setjmp.
const char* write_rgb(std::FILE* fp, const Raster& r, std::vector<png_bytep>& rows) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) return "out of memory";
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return "out of memory";
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return "libpng error";
  }
  png_init_io(png, fp);
  png_set_compression_level(png, 2);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_SUB);
  png_set_IHDR(png, info, static_cast<png_uint_32>(r.width), static_cast<png_uint_32>(r.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_BASE,
               PNG_FILTER_TYPE_BASE);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return "";
}

}  // namespace

void write_png(const std::filesystem::path& path, const Raster& r) {
  if (!r.valid()) throw IoError("refusing to write invalid raster to " + path.string());
  std::vector<png_bytep> rows(static_cast<std::size_t>(r.height));
  for (int y = 0; y < r.height; ++y)
    rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(r.pixels.data() + r.index(0, y));

  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw IoError("cannot open " + path.string() + " for writing");
  const std::string msg = write_rgb(fp, r, rows);
  const bool closed = std::fclose(fp) == 0;
  if (!msg.empty() || !closed)
    throw IoError("cannot write PNG " + path.string() + (msg.empty() ? "" : ": " + msg));
}

Raster read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw IoError("cannot read PNG " + path.string() + ": " + image.message);
  image.format = PNG_FORMAT_RGB;
  // Flatten any alpha onto white.
  png_color background{255, 255, 255};
  Raster r(static_cast<int>(image.width), static_cast<int>(image.height));
  if (!png_image_finish_read(&image, &background, r.pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw IoError("cannot decode PNG " + path.string() + ": " + msg);
  }
  return r;
}

}  // namespace qforge
