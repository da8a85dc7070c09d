#include "qforge/degrade.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "degrade_internal.hpp"

namespace qforge {

namespace detail {

Lattice make_lattice(int width, int height, int cell, Rng& rng) {
  Lattice lat;
  lat.cell = cell;
  lat.cols = width / cell + 2;
  lat.rows = height / cell + 2;
  lat.values.resize(static_cast<std::size_t>(lat.cols) * static_cast<std::size_t>(lat.rows));
  for (double& v : lat.values) v = rng.uniform01();
  return lat;
}

void check_sigma(double sigma, const char* what) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument(std::string(what) + " sigma must be finite and >= 0");
}

void check_texture(const TextureParams& p) {
  if (p.cell_scale < 1) throw std::invalid_argument("texture cell_scale must be >= 1");
  if (!(p.contrast >= 0.0 && p.contrast <= 1.0))
    throw std::invalid_argument("texture contrast must be in [0, 1]");
}

}  // namespace detail

std::string_view to_string(Treatment t) {
  switch (t) {
    case Treatment::Clean: return "clean";
    case Treatment::Moderate: return "moderate";
    case Treatment::Heavy: return "heavy";
  }
  return "clean";
}

std::optional<Treatment> parse_treatment(std::string_view s) {
  if (s == "clean") return Treatment::Clean;
  if (s == "moderate") return Treatment::Moderate;
  if (s == "heavy") return Treatment::Heavy;
  return std::nullopt;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_kernel: sigma must be > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::exp(-(k * k) / (2.0 * sigma * sigma));
    w[static_cast<std::size_t>(k + radius)] = v;
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

Raster gaussian_noise(const Raster& r, double sigma, Rng& rng) {
  detail::check_sigma(sigma, "noise");
  if (sigma == 0.0) return r;
  const std::uint64_t base = rng.next();
  Raster out = r;
  const std::size_t row_len = static_cast<std::size_t>(r.width) * 3;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < r.height; ++y) {
    Rng row_rng(derive_seed(base, static_cast<std::uint64_t>(y)));
    std::uint8_t* px = out.pixels.data() + static_cast<std::size_t>(y) * row_len;
    for (std::size_t i = 0; i < row_len; ++i)
      px[i] = detail::round_to_byte(px[i] + sigma * row_rng.normal());
  }
  return out;
}

Raster gaussian_blur(const Raster& r, double sigma) {
  detail::check_sigma(sigma, "blur");
  if (sigma == 0.0) return r;
  const std::vector<double> w = gaussian_kernel(sigma);
  const std::size_t taps = w.size();
  const int radius = static_cast<int>(taps / 2);
  const int width = r.width, height = r.height;
  const std::size_t row_len = static_cast<std::size_t>(width) * 3;
  std::vector<double> tmp(r.pixels.size());

  // Both passes run tap-outer, pixel-inner so the inner loops vectorize.
  // Each output still sums w[0]*v[0] + w[1]*v[1] + ... from 0.0 in tap
  // order, which is exactly what the reference kernel computes.
#pragma omp parallel
  {
    std::vector<double> padded(row_len + 6 * static_cast<std::size_t>(radius));
#pragma omp for schedule(static)
    for (int y = 0; y < height; ++y) {
      const std::uint8_t* src = r.pixels.data() + static_cast<std::size_t>(y) * row_len;
      for (int x = -radius; x < width + radius; ++x) {
        const std::size_t sx = static_cast<std::size_t>(std::clamp(x, 0, width - 1)) * 3;
        const std::size_t px = static_cast<std::size_t>(x + radius) * 3;
        for (std::size_t c = 0; c < 3; ++c) padded[px + c] = src[sx + c];
      }
      double* dst = tmp.data() + static_cast<std::size_t>(y) * row_len;
      std::fill(dst, dst + row_len, 0.0);
      for (std::size_t k = 0; k < taps; ++k) {
        const double wk = w[k];
        const double* in = padded.data() + k * 3;
        for (std::size_t i = 0; i < row_len; ++i) dst[i] += wk * in[i];
      }
    }
  }

  Raster out(width, height);
#pragma omp parallel
  {
    std::vector<double> acc(row_len);
#pragma omp for schedule(static)
    for (int y = 0; y < height; ++y) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int k = -radius; k <= radius; ++k) {
        const int yy = std::clamp(y + k, 0, height - 1);
        const double wk = w[static_cast<std::size_t>(k + radius)];
        const double* in = tmp.data() + static_cast<std::size_t>(yy) * row_len;
        for (std::size_t i = 0; i < row_len; ++i) acc[i] += wk * in[i];
      }
      std::uint8_t* dst = out.pixels.data() + static_cast<std::size_t>(y) * row_len;
      for (std::size_t i = 0; i < row_len; ++i) dst[i] = detail::round_to_byte(acc[i]);
    }
  }
  return out;
}

Raster color_shift(const Raster& r, const std::array<int, 3>& deltas) {
  for (int d : deltas)
    if (d < -kMaxColorShift || d > kMaxColorShift)
      throw std::invalid_argument("color shift out of range [-32, 32]");
  Raster out = r;
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const int v = out.pixels[i] + deltas[i % 3];
    out.pixels[i] = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
  }
  return out;
}

Raster texture_background(const Raster& r, Rng& rng, const TextureParams& params) {
  detail::check_texture(params);
  const detail::Lattice lat = detail::make_lattice(r.width, r.height, params.cell_scale, rng);
  Raster out = r;
  const std::size_t row_len = static_cast<std::size_t>(r.width) * 3;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < r.height; ++y) {
    std::uint8_t* px = out.pixels.data() + static_cast<std::size_t>(y) * row_len;
    for (int x = 0; x < r.width; ++x) {
      const int level = detail::texture_level(params.contrast, lat.sample(x, y));
      for (int c = 0; c < 3; ++c) px[x * 3 + c] = detail::modulate(px[x * 3 + c], level);
    }
  }
  return out;
}

DegradeParams sample_params(Treatment t, Rng& rng, const TreatmentRanges& ranges) {
  DegradeParams p;
  switch (t) {
    case Treatment::Clean:
      break;
    case Treatment::Moderate:
      p.noise_sigma = rng.uniform(ranges.moderate_noise.lo, ranges.moderate_noise.hi);
      p.blur_sigma = rng.uniform(ranges.moderate_blur.lo, ranges.moderate_blur.hi);
      for (int& d : p.color_shift)
        d = static_cast<int>(rng.uniform_int(-ranges.moderate_shift, ranges.moderate_shift));
      break;
    case Treatment::Heavy: {
      TextureParams tex;
      tex.cell_scale = static_cast<int>(
          rng.uniform_int(static_cast<std::int64_t>(ranges.heavy_cell_scale.lo),
                          static_cast<std::int64_t>(ranges.heavy_cell_scale.hi)));
      tex.contrast = rng.uniform(ranges.heavy_contrast.lo, ranges.heavy_contrast.hi);
      p.texture = tex;
      p.blur_sigma = rng.uniform(ranges.heavy_blur.lo, ranges.heavy_blur.hi);
      p.noise_sigma = rng.uniform(ranges.heavy_noise.lo, ranges.heavy_noise.hi);
      break;
    }
  }
  return p;
}

Raster apply_params(const Raster& r, const DegradeParams& p, Rng& rng) {
  Raster out = r;
  if (p.texture) out = texture_background(out, rng, *p.texture);
  if (p.color_shift != std::array<int, 3>{0, 0, 0}) out = color_shift(out, p.color_shift);
  if (p.blur_sigma > 0.0) out = gaussian_blur(out, p.blur_sigma);
  if (p.noise_sigma > 0.0) out = gaussian_noise(out, p.noise_sigma, rng);
  return out;
}

std::pair<Raster, DegradeParams> apply_treatment(const Raster& r, Treatment t, Rng& rng,
                                                 const TreatmentRanges& ranges) {
  DegradeParams p = sample_params(t, rng, ranges);
  return {apply_params(r, p, rng), p};
}

}  // namespace qforge
