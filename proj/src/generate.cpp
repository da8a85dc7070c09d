#include "qforge/generate.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>

#include "qforge/error.hpp"

namespace qforge {

namespace {

template <typename T>
void push_distinct(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

std::filesystem::path image_path(const std::string& id) {
  return std::filesystem::path("images") / (id + ".png");
}

void prepare_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "images", ec);
  if (ec) throw IoError("cannot create " + (dir / "images").string() + ": " + ec.message());
}

// Runs body(i) for i in [0, n) across threads. Exceptions are caught per
// index so the lowest failing index wins regardless of scheduling.
template <typename Body>
void parallel_indices(std::size_t n, int jobs, Body body) {
  std::vector<std::exception_ptr> errors(n);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const auto total = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (std::int64_t i = 0; i < total; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

void validate_mix(const TreatmentMix& mix) {
  double sum = 0.0;
  for (double p : mix) {
    if (!std::isfinite(p) || p < 0.0)
      throw ConfigError("treatment mix entries must be finite and non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("treatment mix must sum to 1");
}

Treatment pick_treatment(const TreatmentMix& mix, Rng& rng) {
  const double u = rng.uniform01();
  if (u < mix[0]) return Treatment::Clean;
  if (u < mix[0] + mix[1]) return Treatment::Moderate;
  // Guard against a zero heavy weight when rounding leaves u just under 1.
  if (mix[2] == 0.0) return mix[1] > 0.0 ? Treatment::Moderate : Treatment::Clean;
  return Treatment::Heavy;
}

std::string sample_id(std::size_t index, std::size_t count) {
  const std::size_t last = count == 0 ? 0 : count - 1;
  const std::size_t width = std::max<std::size_t>(6, std::to_string(last).size());
  std::string s = std::to_string(index);
  return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

GeneratedSample generate_sample(const GenerationInputs& in, const std::string& id,
                                std::uint64_t seed) {
  Rng rng(seed);
  const DocumentSpec doc = sample_document(in.source, in.profile, rng);
  const Treatment treatment = pick_treatment(in.mix, rng);
  const Raster page = render(doc, in.config.registry, in.renderer);
  auto [image, params] = apply_treatment(page, treatment, rng, in.config.ranges);

  SampleRecord r;
  r.id = id;
  r.image_file = image_path(id).generic_string();
  r.ground_truth_plain = extract_plain_text(doc);
  if (in.profile.markup_ground_truth) {
    r.ground_truth_markup = serialize_markup(doc);
    // The record must be self-consistent; a mismatch here is a bug.
    if (extract_plain_text(parse_markup(*r.ground_truth_markup)) != r.ground_truth_plain)
      throw std::logic_error("sample " + id + ": markup and plain ground truth disagree");
  }
  r.profile = in.profile.name;
  for (const auto& block : doc.blocks)
    for (const auto& run : block.runs)
      if (run.style) {
        push_distinct(r.fonts_used, run.style->font_id);
        push_distinct(r.sizes_used, run.style->size_px);
      }
  r.treatment = treatment;
  r.degrade_params = params;
  r.seed = seed;
  return {std::move(r), std::move(image)};
}

void write_run_config(const std::filesystem::path& path, const nlohmann::ordered_json& cfg) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << cfg.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<SampleRecord> generate(const GenerationInputs& in, const GenerateOptions& opts) {
  if (opts.count == 0) throw ConfigError("count must be at least 1");
  validate_mix(in.mix);
  validate_profile(in.profile, in.config.registry);
  if (in.source.empty()) throw ConfigError("corpus is empty");
  prepare_out_dir(opts.out_dir);

  std::vector<SampleRecord> records(opts.count);
  parallel_indices(opts.count, opts.jobs, [&](std::size_t i) {
    auto sample = generate_sample(in, sample_id(i, opts.count), derive_seed(opts.master_seed, i));
    write_png(opts.out_dir / sample.record.image_file, sample.image);
    records[i] = std::move(sample.record);
  });

  write_manifest_file(opts.out_dir / "manifest.jsonl", records);
  write_run_config(opts.out_dir / "run_config.json", opts.run_config);
  return records;
}

std::vector<SampleRecord> degrade_dataset(const std::filesystem::path& in_dir,
                                          const TreatmentMix& mix,
                                          const TreatmentRanges& ranges,
                                          const GenerateOptions& opts) {
  validate_mix(mix);
  const auto source = read_manifest_file(in_dir / "manifest.jsonl");
  for (const auto& r : source) {
    if (r.treatment != Treatment::Clean)
      throw ConfigError("degrade expects a clean dataset; record " + r.id + " is " +
                        std::string(to_string(r.treatment)));
    if (r.image_file.empty()) throw DataError("record " + r.id + " has no image_file");
  }
  if (std::filesystem::weakly_canonical(in_dir) == std::filesystem::weakly_canonical(opts.out_dir))
    throw ConfigError("degrade output directory must differ from the input");
  prepare_out_dir(opts.out_dir);

  std::vector<SampleRecord> records(source.size());
  parallel_indices(source.size(), opts.jobs, [&](std::size_t i) {
    SampleRecord r = source[i];
    const Raster clean = read_png(in_dir / r.image_file);
    r.seed = derive_seed(opts.master_seed, i);
    Rng rng(r.seed);
    r.treatment = pick_treatment(mix, rng);
    auto [image, params] = apply_treatment(clean, r.treatment, rng, ranges);
    r.degrade_params = params;
    r.image_file = image_path(r.id).generic_string();
    write_png(opts.out_dir / r.image_file, image);
    records[i] = std::move(r);
  });

  write_manifest_file(opts.out_dir / "manifest.jsonl", records);
  write_run_config(opts.out_dir / "run_config.json", opts.run_config);
  return records;
}

}  // namespace qforge
