#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "qforge/corpus.hpp"
#include "qforge/degrade.hpp"
#include "qforge/manifest.hpp"
#include "qforge/profile.hpp"
#include "qforge/render.hpp"

namespace qforge {

/// Probabilities for Clean, Moderate, Heavy.
using TreatmentMix = std::array<double, 3>;

inline constexpr TreatmentMix kDefaultMix{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

/// Throws ConfigError unless all entries are finite, non-negative and sum
/// to 1 within 1e-9.
void validate_mix(const TreatmentMix& mix);

/// One uniform01 draw against the cumulative mix.
Treatment pick_treatment(const TreatmentMix& mix, Rng& rng);

/// Zero-padded decimal index, at least six digits wide and wide enough for
/// count - 1.
std::string sample_id(std::size_t index, std::size_t count);

struct GeneratedSample {
  SampleRecord record;
  Raster image;
};

/// Everything one sample depends on. Generation reads it concurrently.
struct GenerationInputs {
  const VersionProfile& profile;
  const CorpusSource& source;
  const ToolkitConfig& config;
  const RendererAdapter& renderer;
  TreatmentMix mix = kDefaultMix;
};

/// Builds sample `id` from its own seed: document, treatment, render,
/// degradation, in that draw order. Calling it again with a record's
/// stored seed reproduces the record.
GeneratedSample generate_sample(const GenerationInputs& in, const std::string& id,
                                std::uint64_t seed);

struct GenerateOptions {
  std::size_t count = 0;
  std::uint64_t master_seed = 0;
  std::filesystem::path out_dir;
  int jobs = 0;  // 0 lets OpenMP decide
  nlohmann::ordered_json run_config = nlohmann::ordered_json::object();
};

/// Writes out_dir/images/<id>.png for every sample, then manifest.jsonl
/// (in index order) and run_config.json. Sample i uses
/// derive_seed(master_seed, i). The first failing index, in index order,
/// determines the error that is rethrown; no manifest is left behind in
/// that case.
std::vector<SampleRecord> generate(const GenerationInputs& in, const GenerateOptions& opts);

/// Re-degrades a dataset whose records are all Clean into out_dir. Record
/// i draws its treatment and parameters from derive_seed(master_seed, i);
/// ground truth and render metadata are carried over unchanged.
std::vector<SampleRecord> degrade_dataset(const std::filesystem::path& in_dir,
                                          const TreatmentMix& mix,
                                          const TreatmentRanges& ranges,
                                          const GenerateOptions& opts);

void write_run_config(const std::filesystem::path& path, const nlohmann::ordered_json& cfg);

}  // namespace qforge
