#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qforge/degrade.hpp"
#include "qforge/render.hpp"
#include "support.hpp"

using namespace qforge;

namespace {

// Deterministic, non-trivial test image: gradients plus a checker pattern.
Raster patterned(int w, int h, std::uint64_t seed) {
  Raster r(w, h);
  Rng rng(seed);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        const int base = ((x / 7 + y / 5) % 2) ? 230 : 20;
        r.pixels[r.index(x, y) + c] =
            static_cast<std::uint8_t>(std::clamp<int>(base + (x * c) % 17 + static_cast<int>(rng.uniform_int(-6, 6)), 0, 255));
      }
  return r;
}

Raster reference_page() {
  const ToolkitConfig cfg = default_config();
  Rng rng(derive_seed(7, 0));
  const DocumentSpec doc = sample_document(qf_test::sample_corpus(), cfg.profile("v0.3"), rng);
  return MockRenderer().render(doc, cfg.registry);
}

}  // namespace

TEST_CASE("gaussian kernel") {
  const auto k = gaussian_kernel(1.0);
  REQUIRE(k.size() == 7);
  // Direct evaluation of exp(-k^2/2) normalized over k in [-3, 3].
  CHECK(k[3] == doctest::Approx(0.3990502796524549).epsilon(1e-15));
  double sum = 0;
  for (double v : k) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gaussian_kernel(0.5).size() == 5);
  CHECK(gaussian_kernel(1.01).size() == 9);
  CHECK_THROWS_AS(gaussian_kernel(0.0), std::invalid_argument);
}

TEST_CASE("blur of a single white pixel") {
  Raster r(15, 15, 0);
  for (int c = 0; c < 3; ++c) r.pixels[r.index(7, 7) + c] = 255;
  const Raster b = gaussian_blur(r, 1.0);
  // 255 * w0^2 = 40.606...
  CHECK(b.pixels[b.index(7, 7)] == 41);
  // Row through the centre: round(255 * w0 * w[k]).
  const int expected[] = {0, 5, 25, 41, 25, 5, 0};
  for (int k = -3; k <= 3; ++k) CHECK(b.pixels[b.index(7 + k, 7)] == expected[k + 3]);
  CHECK(b == reference::gaussian_blur(r, 1.0));
}

TEST_CASE("blur identities") {
  const Raster r = patterned(40, 30, 1);
  CHECK(gaussian_blur(r, 0.0) == r);
  for (double sigma : {0.3, 1.0, 2.7, 9.0}) {
    for (int v : {0, 1, 128, 254, 255}) {
      const Raster c(23, 11, static_cast<std::uint8_t>(v));
      CHECK(gaussian_blur(c, sigma) == c);
    }
  }
  CHECK_THROWS_AS(gaussian_blur(r, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_blur(r, std::nan("")), std::invalid_argument);
}

TEST_CASE("blur is linear up to rounding") {
  Rng rng(3);
  Raster r(32, 24, 0);
  for (auto& p : r.pixels) p = static_cast<std::uint8_t>(rng.uniform_int(0, 60));
  for (int a : {2, 3, 4}) {
    Raster scaled = r;
    for (auto& p : scaled.pixels) p = static_cast<std::uint8_t>(p * a);
    const Raster lhs = gaussian_blur(scaled, 1.5);
    const Raster rhs = gaussian_blur(r, 1.5);
    for (std::size_t i = 0; i < lhs.pixels.size(); ++i)
      CHECK(std::abs(int(lhs.pixels[i]) - a * int(rhs.pixels[i])) <= a);
  }
}

TEST_CASE("parallel kernels match the serial reference bit for bit") {
  for (auto [w, h] : {std::pair{1, 1}, {3, 2}, {37, 19}, {200, 150}}) {
    const Raster r = patterned(w, h, static_cast<std::uint64_t>(w * 1000 + h));
    for (double sigma : {0.5, 1.0, 2.3, 3.0, 6.0})
      CHECK(gaussian_blur(r, sigma) == reference::gaussian_blur(r, sigma));
    for (double sigma : {0.0, 3.5, 20.0}) {
      Rng a(99), b(99);
      CHECK(gaussian_noise(r, sigma, a) == reference::gaussian_noise(r, sigma, b));
      CHECK(a.next() == b.next());
    }
    for (int cell : {1, 24, 64}) {
      Rng a(5), b(5);
      const TextureParams tp{cell, 0.3};
      CHECK(texture_background(r, a, tp) == reference::texture_background(r, b, tp));
      CHECK(a.next() == b.next());
    }
  }
}

TEST_CASE("noise") {
  const Raster r = patterned(50, 40, 2);
  Rng a(1);
  CHECK(gaussian_noise(r, 0.0, a) == r);
  CHECK(a.next() == Rng(1).next());  // sigma 0 draws nothing
  Rng b(4), c(4);
  CHECK(gaussian_noise(r, 6.0, b) == gaussian_noise(r, 6.0, c));

  const Raster gray(256, 256, 128);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const Raster n = gaussian_noise(gray, 10.0, rng);
    CHECK(std::abs(mean_value(n) - 128.0) < 1.0);
    // Sample standard deviation close to sigma (rounding adds ~1/12).
    double ss = 0;
    for (auto p : n.pixels) ss += (p - 128.0) * (p - 128.0);
    CHECK(std::sqrt(ss / n.pixels.size()) == doctest::Approx(10.0).epsilon(0.02));
  }
  Rng rng(0);
  CHECK_THROWS_AS(gaussian_noise(r, -0.1, rng), std::invalid_argument);
}

TEST_CASE("color shift") {
  Raster px(1, 1);
  px.pixels = {250, 10, 10};
  CHECK(color_shift(px, {10, -20, 0}).pixels == std::vector<std::uint8_t>{255, 0, 10});
  const Raster r = patterned(20, 20, 9);
  CHECK(color_shift(r, {0, 0, 0}) == r);
  Raster interior(10, 10);
  Rng rng(8);
  for (auto& p : interior.pixels) p = static_cast<std::uint8_t>(rng.uniform_int(32, 223));
  for (int i = 0; i < 50; ++i) {
    const std::array<int, 3> d{static_cast<int>(rng.uniform_int(-32, 32)),
                               static_cast<int>(rng.uniform_int(-32, 32)),
                               static_cast<int>(rng.uniform_int(-32, 32))};
    CHECK(color_shift(color_shift(interior, d), {-d[0], -d[1], -d[2]}) == interior);
  }
  CHECK_THROWS_AS(color_shift(r, {33, 0, 0}), std::invalid_argument);
}

TEST_CASE("texture") {
  const Raster r = patterned(70, 50, 4);
  Rng a(2);
  CHECK(texture_background(r, a, {32, 0.0}) == r);
  const Raster black(70, 50, 0);
  Rng b(2);
  CHECK(texture_background(black, b, {24, 0.35}) == black);
  Rng c(6), d(6);
  CHECK(texture_background(r, c, {40, 0.2}) == texture_background(r, d, {40, 0.2}));
  // White becomes the texture itself, never brighter than 255 and never
  // darker than 255 * (1 - contrast).
  const Raster white(70, 50, 255);
  Rng e(7);
  const Raster t = texture_background(white, e, {24, 0.3});
  for (auto p : t.pixels) CHECK((p >= 178 && p <= 255));
  CHECK(t != white);
}

TEST_CASE("treatments") {
  const Raster r = patterned(60, 40, 5);
  Rng rng(1);
  auto [clean, cp] = apply_treatment(r, Treatment::Clean, rng);
  CHECK(clean == r);
  CHECK(cp == DegradeParams{});
  CHECK(rng.next() == Rng(1).next());

  Rng m1(12), m2(12);
  const auto a = apply_treatment(r, Treatment::Moderate, m1);
  const auto b = apply_treatment(r, Treatment::Moderate, m2);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK_FALSE(a.second.texture.has_value());

  // Re-applying recorded params with a fresh stream positioned after the
  // parameter draws reproduces the image.
  Rng m3(12);
  const DegradeParams p = sample_params(Treatment::Moderate, m3);
  CHECK(apply_params(r, p, m3) == a.first);
}

TEST_CASE("sampled params stay in range") {
  const TreatmentRanges rr;
  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    const DegradeParams h = sample_params(Treatment::Heavy, rng, rr);
    REQUIRE(h.texture.has_value());
    CHECK((h.texture->cell_scale >= 24 && h.texture->cell_scale <= 64));
    CHECK((h.texture->contrast >= 0.15 && h.texture->contrast <= 0.35));
    CHECK((h.blur_sigma >= 1.5 && h.blur_sigma <= 3.0));
    CHECK((h.noise_sigma >= 8.0 && h.noise_sigma <= 20.0));
    CHECK(h.color_shift == std::array<int, 3>{0, 0, 0});

    const DegradeParams m = sample_params(Treatment::Moderate, rng, rr);
    CHECK((m.noise_sigma >= 3.0 && m.noise_sigma <= 8.0));
    CHECK((m.blur_sigma >= 0.5 && m.blur_sigma <= 1.0));
    for (int d : m.color_shift) CHECK((d >= -10 && d <= 10));
  }
}

TEST_CASE("severity is monotone on the reference page") {
  const Raster page = reference_page();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng c(seed), m(seed), h(seed);
    const double dc = mean_abs_deviation(page, apply_treatment(page, Treatment::Clean, c).first);
    const double dm = mean_abs_deviation(page, apply_treatment(page, Treatment::Moderate, m).first);
    const double dh = mean_abs_deviation(page, apply_treatment(page, Treatment::Heavy, h).first);
    CHECK(dc == 0.0);
    CHECK(dm >= dc);
    CHECK(dh >= dm);
  }
}

TEST_CASE("dimensions are preserved") {
  const Raster r = patterned(13, 7, 6);
  Rng rng(3);
  for (Treatment t : {Treatment::Clean, Treatment::Moderate, Treatment::Heavy}) {
    const Raster o = apply_treatment(r, t, rng).first;
    CHECK(o.width == 13);
    CHECK(o.height == 7);
    CHECK(o.valid());
  }
}

TEST_CASE("treatment names") {
  CHECK(to_string(Treatment::Moderate) == "moderate");
  CHECK(parse_treatment("heavy") == Treatment::Heavy);
  CHECK_FALSE(parse_treatment("light").has_value());
}
