#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qforge/metrics.hpp"

namespace qforge {

enum class TableFormat { Markdown, Csv };

std::optional<TableFormat> parse_table_format(std::string_view s);

struct HeadlineScores {
  double cer = 0.0;
  double wer = 0.0;
  double bleu = 0.0;  // corpus BLEU
  double sentence_bleu = 0.0;
  std::size_t n_samples = 0;
};

/// The parts of a report.json the tables need.
struct ReportSummary {
  std::string label;
  MetricConfig config;
  nlohmann::json run_config;
  HeadlineScores overall;
  std::map<std::string, HeadlineScores> by_font;  // keyed by joined font ids
};

/// Headline CER/WER follow the report's aggregate mode. Throws DataError.
ReportSummary summarize_report(const nlohmann::json& report);
/// Throws IoError or DataError.
ReportSummary load_report(const std::filesystem::path& path);

/// Display name for a font group key: registry family names joined with
/// '+', unknown ids left as-is.
std::string font_display_name(const std::string& key,
                              const std::map<std::string, std::string>& families);

struct TableOptions {
  TableFormat format = TableFormat::Markdown;
  bool by_font = false;
  std::map<std::string, std::string> font_families;  // id -> family name
  nlohmann::ordered_json run_config = nlohmann::ordered_json::object();
};

/// One row per model, sorted by CER ascending (label breaks ties). With
/// by_font, a Metric x Model grid whose columns start with the five SARD
/// fonts followed by any other groups present. Throws ReportConflictError
/// when metric configurations differ.
std::string render_table(const std::vector<ReportSummary>& reports, const TableOptions& opts);

}  // namespace qforge
