#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qforge/degrade.hpp"

namespace qforge::detail {

inline std::uint8_t round_to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

inline double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

struct Lattice {
  int cell = 1;
  int cols = 0;
  int rows = 0;
  std::vector<double> values;  // row-major

  double at(int gx, int gy) const {
    return values[static_cast<std::size_t>(gy) * static_cast<std::size_t>(cols) +
                  static_cast<std::size_t>(gx)];
  }

  // Bilinear value noise in [0, 1].
  double sample(int x, int y) const {
    const int gx = x / cell, gy = y / cell;
    const double tx = smoothstep(static_cast<double>(x % cell) / cell);
    const double ty = smoothstep(static_cast<double>(y % cell) / cell);
    const double top = at(gx, gy) + (at(gx + 1, gy) - at(gx, gy)) * tx;
    const double bot = at(gx, gy + 1) + (at(gx + 1, gy + 1) - at(gx, gy + 1)) * tx;
    return top + (bot - top) * ty;
  }
};

inline int texture_level(double contrast, double v) {
  return static_cast<int>(round_to_byte(255.0 * (1.0 - contrast * v)));
}

inline std::uint8_t modulate(std::uint8_t p, int level) {
  return static_cast<std::uint8_t>((static_cast<int>(p) * level + 127) / 255);
}

Lattice make_lattice(int width, int height, int cell, Rng& rng);

void check_sigma(double sigma, const char* what);
void check_texture(const TextureParams& p);

}  // namespace qforge::detail
