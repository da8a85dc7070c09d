// Serial reference kernels against their OpenMP counterparts. Set
// OMP_NUM_THREADS to compare scaling; on one core the pair should tie.
#include <benchmark/benchmark.h>

#include <filesystem>

#include "qforge/degrade.hpp"
#include "qforge/evaluate.hpp"
#include "qforge/render.hpp"

namespace {

using namespace qforge;

Raster page() {
  Raster r(640, 480, 255);
  Rng rng(3);
  for (auto& p : r.pixels)
    if (rng.uniform01() < 0.1) p = 20;
  return r;
}

void BM_blur_parallel(benchmark::State& s) {
  const Raster r = page();
  for (auto _ : s) benchmark::DoNotOptimize(gaussian_blur(r, 3.0));
}
void BM_blur_serial(benchmark::State& s) {
  const Raster r = page();
  for (auto _ : s) benchmark::DoNotOptimize(reference::gaussian_blur(r, 3.0));
}
void BM_noise_parallel(benchmark::State& s) {
  const Raster r = page();
  for (auto _ : s) {
    Rng rng(1);
    benchmark::DoNotOptimize(gaussian_noise(r, 12.0, rng));
  }
}
void BM_noise_serial(benchmark::State& s) {
  const Raster r = page();
  for (auto _ : s) {
    Rng rng(1);
    benchmark::DoNotOptimize(reference::gaussian_noise(r, 12.0, rng));
  }
}
void BM_texture_parallel(benchmark::State& s) {
  const Raster r = page();
  for (auto _ : s) {
    Rng rng(1);
    benchmark::DoNotOptimize(texture_background(r, rng, {40, 0.3}));
  }
}
void BM_texture_serial(benchmark::State& s) {
  const Raster r = page();
  for (auto _ : s) {
    Rng rng(1);
    benchmark::DoNotOptimize(reference::texture_background(r, rng, {40, 0.3}));
  }
}
void BM_png_write(benchmark::State& s) {
  Raster r = page();
  Rng rng(2);
  r = gaussian_noise(r, 12.0, rng);
  const auto path = std::filesystem::temp_directory_path() / "qforge_bench.png";
  for (auto _ : s) write_png(path, r);
  std::filesystem::remove(path);
}

// ~500 code points per side, one edit in twenty.
struct EvalFixture {
  std::vector<SampleRecord> manifest;
  std::vector<Prediction> predictions;

  explicit EvalFixture(std::size_t n) {
    const std::u32string letters = U"ابتثجحخدذرزسشصضطظعغفقكلمنهوي";
    Rng rng(11);
    for (std::size_t i = 0; i < n; ++i) {
      std::u32string ref, hyp;
      while (ref.size() < 500) {
        const auto len = rng.uniform_int(2, 7);
        for (std::int64_t k = 0; k < len; ++k)
          ref.push_back(letters[static_cast<std::size_t>(rng.uniform_int(0, 27))]);
        ref.push_back(U' ');
      }
      ref.pop_back();
      for (char32_t c : ref) {
        if (rng.uniform01() < 0.05) hyp.push_back(letters[static_cast<std::size_t>(rng.uniform_int(0, 27))]);
        else hyp.push_back(c);
      }
      SampleRecord r;
      r.id = std::to_string(i);
      r.ground_truth_plain = ScriptText::from_codepoints(ref);
      manifest.push_back(std::move(r));
      predictions.push_back({std::to_string(i), utf8::encode(hyp)});
    }
  }
};

void BM_evaluate_parallel(benchmark::State& s) {
  const EvalFixture f(static_cast<std::size_t>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(evaluate(f.manifest, f.predictions, {}));
  s.SetItemsProcessed(s.iterations() * s.range(0));
}
void BM_evaluate_serial(benchmark::State& s) {
  const EvalFixture f(static_cast<std::size_t>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(evaluate_serial(f.manifest, f.predictions, {}));
  s.SetItemsProcessed(s.iterations() * s.range(0));
}

}  // namespace

BENCHMARK(BM_blur_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_blur_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_noise_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_noise_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_texture_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_texture_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_png_write)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_evaluate_serial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_evaluate_parallel)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
