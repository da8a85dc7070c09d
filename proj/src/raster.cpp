#include "qforge/raster.hpp"

#include <cstdlib>
#include <stdexcept>

namespace qforge {

Raster::Raster(int w, int h, std::uint8_t fill) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw std::invalid_argument("raster dimensions must be positive");
  pixels.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, fill);
}

double ink_fraction(const Raster& r) {
  if (!r.valid()) return 0.0;
  std::size_t ink = 0;
  for (std::size_t i = 0; i < r.pixels.size(); i += 3) {
    const int sum = r.pixels[i] + r.pixels[i + 1] + r.pixels[i + 2];
    if (sum < 3 * 128) ++ink;
  }
  return static_cast<double>(ink) / static_cast<double>(r.pixels.size() / 3);
}

double mean_abs_deviation(const Raster& a, const Raster& b) {
  if (a.width != b.width || a.height != b.height || a.pixels.size() != b.pixels.size())
    throw std::invalid_argument("mean_abs_deviation: dimension mismatch");
  if (a.pixels.empty()) return 0.0;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i)
    total += static_cast<std::uint64_t>(std::abs(int(a.pixels[i]) - int(b.pixels[i])));
  return static_cast<double>(total) / static_cast<double>(a.pixels.size());
}

double mean_value(const Raster& r) {
  if (r.pixels.empty()) return 0.0;
  std::uint64_t total = 0;
  for (auto v : r.pixels) total += v;
  return static_cast<double>(total) / static_cast<double>(r.pixels.size());
}

}  // namespace qforge
