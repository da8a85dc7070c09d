#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qforge/manifest.hpp"
#include "qforge/metrics.hpp"

namespace qforge {

struct Prediction {
  std::string id;
  std::string text;
};

/// JSONL {"id", "text"}. Every malformed line and repeated id is collected
/// and reported together in one DataError.
std::vector<Prediction> read_predictions(std::istream& in);
std::vector<Prediction> read_predictions_file(const std::filesystem::path& path);

struct AggregateScores {
  std::size_t n_samples = 0;
  double macro_cer = 0.0;
  double macro_wer = 0.0;
  double micro_cer = 0.0;
  double micro_wer = 0.0;
  double corpus_bleu = 0.0;
  double macro_sentence_bleu = 0.0;
  EditCounts char_edits;
  EditCounts word_edits;
  std::size_t ref_chars = 0;
  std::size_t ref_words = 0;
  std::vector<std::string> empty_reference_ids;

  double cer(AggregateMode m) const { return m == AggregateMode::Macro ? macro_cer : micro_cer; }
  double wer(AggregateMode m) const { return m == AggregateMode::Macro ? macro_wer : micro_wer; }
};

/// Reduces in the order given; callers sort first for stable output.
AggregateScores aggregate_scores(std::span<const SampleScore> scores, const MetricConfig& cfg);

struct FontGroupScores {
  std::string fonts;  // fonts_used joined with '+'
  AggregateScores scores;
};

struct Evaluation {
  MetricConfig config;
  std::vector<SampleScore> samples;  // sorted by id
  std::vector<std::vector<std::string>> sample_fonts;  // parallel to samples
  AggregateScores aggregate;
  std::vector<FontGroupScores> by_font;  // sorted by key; records without fonts skipped
};

/// Pairs every manifest record with its prediction and scores the pairs.
/// Missing predictions (all listed) are a DataError; extra predictions are
/// ignored. `jobs` caps OpenMP threads, 0 lets OpenMP decide.
Evaluation evaluate(const std::vector<SampleRecord>& manifest,
                    const std::vector<Prediction>& predictions, const MetricConfig& cfg,
                    int jobs = 0);

/// Same result computed on one thread with a plain loop.
Evaluation evaluate_serial(const std::vector<SampleRecord>& manifest,
                           const std::vector<Prediction>& predictions, const MetricConfig& cfg);

nlohmann::ordered_json to_json(const AggregateScores& a);
nlohmann::ordered_json to_json(const SampleScore& s);

/// report.json: run_config, label, metric_config, aggregate, by_font,
/// samples.
nlohmann::ordered_json report_json(const Evaluation& e, const std::string& label,
                                   const nlohmann::ordered_json& run_config);

}  // namespace qforge
