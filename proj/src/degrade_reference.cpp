#include "degrade_internal.hpp"

namespace qforge::reference {

Raster gaussian_noise(const Raster& r, double sigma, Rng& rng) {
  detail::check_sigma(sigma, "noise");
  if (sigma == 0.0) return r;
  const std::uint64_t base = rng.next();
  Raster out = r;
  for (int y = 0; y < r.height; ++y) {
    Rng row_rng(derive_seed(base, static_cast<std::uint64_t>(y)));
    for (int x = 0; x < r.width; ++x)
      for (int c = 0; c < 3; ++c) {
        auto& v = out.pixels[out.index(x, y) + c];
        v = detail::round_to_byte(v + sigma * row_rng.normal());
      }
  }
  return out;
}

Raster gaussian_blur(const Raster& r, double sigma) {
  detail::check_sigma(sigma, "blur");
  if (sigma == 0.0) return r;
  const std::vector<double> w = gaussian_kernel(sigma);
  const int radius = static_cast<int>(w.size() / 2);

  std::vector<double> tmp(r.pixels.size());
  for (int y = 0; y < r.height; ++y)
    for (int x = 0; x < r.width; ++x)
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          const int xx = std::clamp(x + k, 0, r.width - 1);
          acc += w[static_cast<std::size_t>(k + radius)] * r.pixels[r.index(xx, y) + c];
        }
        tmp[r.index(x, y) + c] = acc;
      }

  Raster out(r.width, r.height);
  for (int y = 0; y < r.height; ++y)
    for (int x = 0; x < r.width; ++x)
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          const int yy = std::clamp(y + k, 0, r.height - 1);
          acc += w[static_cast<std::size_t>(k + radius)] * tmp[r.index(x, yy) + c];
        }
        out.pixels[out.index(x, y) + c] = detail::round_to_byte(acc);
      }
  return out;
}

Raster texture_background(const Raster& r, Rng& rng, const TextureParams& params) {
  detail::check_texture(params);
  const detail::Lattice lat = detail::make_lattice(r.width, r.height, params.cell_scale, rng);
  Raster out = r;
  for (int y = 0; y < r.height; ++y)
    for (int x = 0; x < r.width; ++x) {
      const int level = detail::texture_level(params.contrast, lat.sample(x, y));
      for (int c = 0; c < 3; ++c) {
        auto& v = out.pixels[out.index(x, y) + c];
        v = detail::modulate(v, level);
      }
    }
  return out;
}

}  // namespace qforge::reference
