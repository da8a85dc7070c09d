#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "qforge/arabic_text.hpp"

namespace qforge {

enum class CerUnit { Codepoint, GraphemeCluster };
enum class AggregateMode { Macro, Micro };
/// Which manifest field is the reference: plain text, or the markup
/// serialization (meaningful only for markup-trained models).
enum class ReferenceField { Plain, Markup };

struct MetricConfig {
  bool strip_markup = false;
  bool strip_tashkeel = false;
  bool strip_tatweel = false;
  bool collapse_whitespace = true;
  bool unify_alef_hamza = false;
  CerUnit cer_unit = CerUnit::Codepoint;
  int bleu_max_n = 4;
  double sentence_bleu_epsilon = 1e-9;  // corpus BLEU is never smoothed
  AggregateMode aggregate = AggregateMode::Macro;
  ReferenceField reference = ReferenceField::Plain;

  friend bool operator==(const MetricConfig&, const MetricConfig&) = default;
};

std::string_view to_string(CerUnit u);
std::string_view to_string(AggregateMode m);
std::string_view to_string(ReferenceField f);
std::optional<CerUnit> parse_cer_unit(std::string_view s);
std::optional<AggregateMode> parse_aggregate_mode(std::string_view s);
std::optional<ReferenceField> parse_reference_field(std::string_view s);

nlohmann::ordered_json to_json(const MetricConfig& c);
/// Throws DataError on unknown enum values or wrong types.
MetricConfig metric_config_from_json(const nlohmann::json& j);

/// Markup strip (parse, falling back to tag removal), NFC, tatweel,
/// tashkeel, alef folding, whitespace collapse. Never throws; invalid
/// UTF-8 becomes U+FFFD.
ScriptText normalize_for_eval(std::string_view text, const MetricConfig& cfg);

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;   // reference units the hypothesis lacks
  std::size_t insertions = 0;  // extra hypothesis units

  std::size_t distance() const { return substitutions + deletions + insertions; }
  EditCounts& operator+=(const EditCounts& o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    return *this;
  }
  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

/// Unit-cost edit distance from `ref` to `hyp`. The decomposition is the
/// one a full-matrix traceback finds when it prefers substitution or match,
/// then deletion, then insertion. Only two rows are kept: each cell stores
/// its distance and the substitutions on its chosen path, and the other
/// two counts follow from D - I = i - j.
template <typename T>
EditCounts levenshtein(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  // Row i of the distance matrix and, per cell, the substitutions on the
  // chosen path. Each row is filled in two passes: diagonal vs. up for all
  // cells (independent, so it vectorizes), then a short serial sweep that
  // lets a strictly better left neighbour win. That is the same choice as
  // testing diagonal, up, left in order at every cell.
  std::vector<std::uint32_t> pd(m + 1), ps(m + 1, 0), cd(m + 1), cs(m + 1);
  for (std::size_t j = 0; j <= m; ++j) pd[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    const T a = ref[i - 1];
    cd[0] = static_cast<std::uint32_t>(i);
    cs[0] = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint32_t mismatch = a == hyp[j - 1] ? 0u : 1u;
      const std::uint32_t diag = pd[j - 1] + mismatch;
      const std::uint32_t up = pd[j] + 1;
      const bool take_up = up < diag;
      cd[j] = take_up ? up : diag;
      cs[j] = take_up ? ps[j] : ps[j - 1] + mismatch;
    }
    std::uint32_t run_d = cd[0], run_s = cs[0];
    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint32_t left = run_d + 1;
      const bool take_left = left < cd[j];
      run_d = take_left ? left : cd[j];
      run_s = take_left ? run_s : cs[j];
      cd[j] = run_d;
      cs[j] = run_s;
    }
    std::swap(pd, cd);
    std::swap(ps, cs);
  }
  struct {
    std::uint32_t dist, subs;
  } end{pd[m], ps[m]};
  // D + I = dist - S and D - I = n - m.
  const auto indels = static_cast<std::int64_t>(end.dist) - end.subs;
  const auto skew = static_cast<std::int64_t>(n) - static_cast<std::int64_t>(m);
  EditCounts e;
  e.substitutions = end.subs;
  e.deletions = static_cast<std::size_t>((indels + skew) / 2);
  e.insertions = static_cast<std::size_t>((indels - skew) / 2);
  return e;
}

EditCounts levenshtein(std::u32string_view ref, std::u32string_view hyp);

/// Whitespace-separated words; empty tokens are dropped.
std::vector<std::u32string> split_words(std::u32string_view text);
/// Extended grapheme clusters.
std::vector<std::u32string> grapheme_clusters(std::u32string_view text);

/// Maps tokens to small integer ids, shared across one comparison.
class TokenInterner {
 public:
  std::vector<std::uint32_t> intern(const std::vector<std::u32string>& tokens);

 private:
  std::unordered_map<std::u32string, std::uint32_t> ids_;
};

/// Clipped n-gram counts for n = 1..4 plus lengths, in words.
struct BleuStats {
  std::array<std::uint64_t, 4> matches{};
  std::array<std::uint64_t, 4> totals{};
  std::uint64_t hyp_len = 0;
  std::uint64_t ref_len = 0;

  BleuStats& operator+=(const BleuStats& o);
  friend bool operator==(const BleuStats&, const BleuStats&) = default;
};

BleuStats bleu_stats(std::span<const std::uint32_t> ref, std::span<const std::uint32_t> hyp,
                     int max_n = 4);

/// Corpus BLEU from pooled counts: geometric mean of the max_n precisions
/// times exp(1 - r/c) when c < r. Zero when c = 0 or when any precision is
/// zero or undefined.
double corpus_bleu_from_stats(const BleuStats& s, int max_n = 4);

/// Sentence BLEU over the first min(max_n, c) orders. Zero match counts
/// become epsilon / total. Both sides empty scores 1; an empty hypothesis
/// against a non-empty reference scores 0.
double sentence_bleu_from_stats(const BleuStats& s, int max_n = 4, double epsilon = 1e-9);

struct SampleScore {
  std::string id;
  EditCounts char_edits;
  EditCounts word_edits;
  std::size_t ref_chars = 0;
  std::size_t hyp_chars = 0;
  std::size_t ref_words = 0;
  std::size_t hyp_words = 0;
  double cer = 0.0;
  double wer = 0.0;
  double sentence_bleu = 0.0;
  BleuStats bleu;
  bool empty_reference = false;
};

/// Scores an already-normalized pair.
SampleScore score_pair(const std::string& id, const ScriptText& ref, const ScriptText& hyp,
                       const MetricConfig& cfg);

/// Convenience wrappers that normalize raw text first.
double cer(std::string_view ref, std::string_view hyp, const MetricConfig& cfg = {});
double wer(std::string_view ref, std::string_view hyp, const MetricConfig& cfg = {});
double sentence_bleu(std::string_view ref, std::string_view hyp, const MetricConfig& cfg = {});

struct TextPair {
  std::string ref;
  std::string hyp;
};

/// Throws std::invalid_argument on an empty list.
double corpus_bleu(const std::vector<TextPair>& pairs, const MetricConfig& cfg = {});

}  // namespace qforge
