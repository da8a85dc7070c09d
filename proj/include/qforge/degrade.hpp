#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "qforge/raster.hpp"
#include "qforge/rng.hpp"

namespace qforge {

enum class Treatment { Clean, Moderate, Heavy };

std::string_view to_string(Treatment t);
std::optional<Treatment> parse_treatment(std::string_view s);

inline constexpr int kMaxColorShift = 32;

struct TextureParams {
  int cell_scale = 32;   // lattice spacing in pixels
  double contrast = 0.0; // 0 = neutral, 1 = lattice minima go black

  friend bool operator==(const TextureParams&, const TextureParams&) = default;
};

struct DegradeParams {
  double noise_sigma = 0.0;  // on the 0..255 scale
  double blur_sigma = 0.0;   // pixels
  std::array<int, 3> color_shift{0, 0, 0};
  std::optional<TextureParams> texture;

  friend bool operator==(const DegradeParams&, const DegradeParams&) = default;
};

struct Interval {
  double lo;
  double hi;
};

/// Sampling ranges for the two non-clean treatments.
struct TreatmentRanges {
  Interval moderate_noise{3.0, 8.0};
  Interval moderate_blur{0.5, 1.0};
  int moderate_shift = 10;  // each channel in [-shift, shift]

  Interval heavy_cell_scale{24, 64};
  Interval heavy_contrast{0.15, 0.35};
  Interval heavy_blur{1.5, 3.0};
  Interval heavy_noise{8.0, 20.0};
};

/// Normalized 1-D Gaussian kernel of radius ceil(3 sigma). sigma must be > 0.
std::vector<double> gaussian_kernel(double sigma);

/// Additive zero-mean Gaussian noise, saturating. One value is drawn from
/// `rng` as a base seed; row y then uses Rng(derive_seed(base, y)) and
/// consumes normals in x-major, channel-minor order. sigma == 0 is the
/// identity and draws nothing.
Raster gaussian_noise(const Raster& r, double sigma, Rng& rng);

/// Separable blur, clamp-to-edge. Both passes accumulate in double; the
/// result is rounded half up once.
Raster gaussian_blur(const Raster& r, double sigma);

/// Saturating per-channel add. Throws std::invalid_argument if any
/// |delta| > 32.
Raster color_shift(const Raster& r, const std::array<int, 3>& deltas);

/// Multiplies the raster by a paper texture T (bilinear value noise with
/// smoothstep fade, lattice drawn row-major from `rng`):
///   T = round(255 * (1 - contrast * v)),  out = (in * T + 127) / 255.
Raster texture_background(const Raster& r, Rng& rng, const TextureParams& params);

/// Draws parameters for `t` in a fixed order (Moderate: noise, blur,
/// shift r/g/b; Heavy: cell_scale, contrast, blur, noise).
DegradeParams sample_params(Treatment t, Rng& rng, const TreatmentRanges& ranges = {});

/// texture -> color shift -> blur -> noise, skipping zero stages.
Raster apply_params(const Raster& r, const DegradeParams& p, Rng& rng);

std::pair<Raster, DegradeParams> apply_treatment(const Raster& r, Treatment t, Rng& rng,
                                                 const TreatmentRanges& ranges = {});

/// Single-threaded kernels with the same arithmetic as the parallel ones.
/// Kept for equivalence tests and the benchmark.
namespace reference {

Raster gaussian_noise(const Raster& r, double sigma, Rng& rng);
Raster gaussian_blur(const Raster& r, double sigma);
Raster texture_background(const Raster& r, Rng& rng, const TextureParams& params);

}  // namespace reference

}  // namespace qforge
