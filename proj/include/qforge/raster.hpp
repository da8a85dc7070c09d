#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace qforge {

/// Row-major 8-bit RGB image.
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // width * height * 3

  Raster() = default;
  Raster(int w, int h, std::uint8_t fill = 255);

  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(x)) * 3;
  }

  bool valid() const {
    return width > 0 && height > 0 &&
           pixels.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3;
  }

  friend bool operator==(const Raster&, const Raster&) = default;
};

/// Share of pixels whose mean channel value is below 128.
double ink_fraction(const Raster& r);

/// Mean absolute per-channel difference; dimensions must match.
double mean_abs_deviation(const Raster& a, const Raster& b);

double mean_value(const Raster& r);

/// 8-bit RGB PNG. Throws IoError.
void write_png(const std::filesystem::path& path, const Raster& r);
Raster read_png(const std::filesystem::path& path);

}  // namespace qforge
