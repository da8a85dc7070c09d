#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "qforge/arabic_text.hpp"
#include "qforge/markup.hpp"
#include "qforge/profile.hpp"
#include "qforge/rng.hpp"

namespace qforge {

/// Normalized paragraphs plus per-paragraph statistics, computed once so
/// sampling does not re-classify text.
class CorpusSource {
 public:
  CorpusSource() = default;
  CorpusSource(std::vector<ScriptText> paragraphs, std::string provenance);

  const std::vector<ScriptText>& paragraphs() const { return paragraphs_; }
  const std::vector<TextStats>& paragraph_stats() const { return stats_; }
  const std::string& provenance() const { return provenance_; }
  /// False for paragraphs made only of whitespace, tashkeel, '<' or '>'.
  bool usable(std::size_t i) const { return usable_[i] != 0; }
  std::size_t size() const { return paragraphs_.size(); }
  bool empty() const { return paragraphs_.empty(); }

  /// Concatenates sources in order; provenance labels joined with '+'.
  static CorpusSource merge(const std::vector<CorpusSource>& sources);

 private:
  std::vector<ScriptText> paragraphs_;
  std::vector<TextStats> stats_;
  std::vector<char> usable_;
  std::string provenance_;
};

/// Reads UTF-8 text whose paragraphs are separated by blank lines. Lines of
/// a paragraph are joined with single spaces. Paragraphs whose length in
/// code points falls outside [min_len, max_len] are dropped. Throws IoError
/// if unreadable or not UTF-8, ConfigError if nothing survives the filter.
CorpusSource load_corpus(const std::filesystem::path& path, std::size_t min_len,
                         std::size_t max_len);

/// Draws one page. Paragraphs are sampled with replacement. Single-block
/// profiles yield one Body block; structured profiles yield a header, one
/// to three body blocks and an optional annotation, sized from the upper,
/// middle and lower thirds of the size range. Throws ConfigError when the
/// diacritics requirement leaves no qualifying paragraph.
DocumentSpec sample_document(const CorpusSource& source, const VersionProfile& profile, Rng& rng);

}  // namespace qforge
