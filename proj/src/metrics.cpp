#include "qforge/metrics.hpp"

#include <unicode/brkiter.h>
#include <unicode/unistr.h>

#include <memory>
#include <regex>
#include <stdexcept>

#include "qforge/error.hpp"
#include "qforge/markup.hpp"

namespace qforge {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

template <typename T>
T cfg_field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw DataError(std::string("metric_config.") + key + " has the wrong type");
  }
}

template <typename E, typename Parse>
E cfg_enum(const json& j, const char* key, E fallback, Parse parse) {
  if (!j.contains(key)) return fallback;
  const auto s = cfg_field<std::string>(j, key, "");
  const auto v = parse(s);
  if (!v) throw DataError(std::string("metric_config.") + key + ": unknown value '" + s + "'");
  return *v;
}

std::u32string strip_tags(std::string_view text) {
  static const std::regex tag("<[^>]*>");
  const std::string raw(text);
  return utf8::decode_lenient(std::regex_replace(raw, tag, ""));
}

}  // namespace

std::string_view to_string(CerUnit u) {
  return u == CerUnit::Codepoint ? "codepoint" : "grapheme";
}

std::string_view to_string(AggregateMode m) { return m == AggregateMode::Macro ? "macro" : "micro"; }

std::string_view to_string(ReferenceField f) {
  return f == ReferenceField::Plain ? "plain" : "markup";
}

std::optional<CerUnit> parse_cer_unit(std::string_view s) {
  if (s == "codepoint") return CerUnit::Codepoint;
  if (s == "grapheme") return CerUnit::GraphemeCluster;
  return std::nullopt;
}

std::optional<AggregateMode> parse_aggregate_mode(std::string_view s) {
  if (s == "macro") return AggregateMode::Macro;
  if (s == "micro") return AggregateMode::Micro;
  return std::nullopt;
}

std::optional<ReferenceField> parse_reference_field(std::string_view s) {
  if (s == "plain") return ReferenceField::Plain;
  if (s == "markup") return ReferenceField::Markup;
  return std::nullopt;
}

ojson to_json(const MetricConfig& c) {
  ojson j;
  j["strip_markup"] = c.strip_markup;
  j["strip_tashkeel"] = c.strip_tashkeel;
  j["strip_tatweel"] = c.strip_tatweel;
  j["collapse_whitespace"] = c.collapse_whitespace;
  j["unify_alef_hamza"] = c.unify_alef_hamza;
  j["cer_unit"] = std::string(to_string(c.cer_unit));
  j["bleu_max_n"] = c.bleu_max_n;
  j["sentence_bleu_epsilon"] = c.sentence_bleu_epsilon;
  j["aggregate"] = std::string(to_string(c.aggregate));
  j["reference"] = std::string(to_string(c.reference));
  return j;
}

MetricConfig metric_config_from_json(const json& j) {
  if (!j.is_object()) throw DataError("metric_config must be an object");
  MetricConfig c;
  c.strip_markup = cfg_field<bool>(j, "strip_markup", c.strip_markup);
  c.strip_tashkeel = cfg_field<bool>(j, "strip_tashkeel", c.strip_tashkeel);
  c.strip_tatweel = cfg_field<bool>(j, "strip_tatweel", c.strip_tatweel);
  c.collapse_whitespace = cfg_field<bool>(j, "collapse_whitespace", c.collapse_whitespace);
  c.unify_alef_hamza = cfg_field<bool>(j, "unify_alef_hamza", c.unify_alef_hamza);
  c.cer_unit = cfg_enum(j, "cer_unit", c.cer_unit, parse_cer_unit);
  c.bleu_max_n = cfg_field<int>(j, "bleu_max_n", c.bleu_max_n);
  if (c.bleu_max_n != 4) throw DataError("metric_config.bleu_max_n must be 4");
  c.sentence_bleu_epsilon = cfg_field<double>(j, "sentence_bleu_epsilon", c.sentence_bleu_epsilon);
  c.aggregate = cfg_enum(j, "aggregate", c.aggregate, parse_aggregate_mode);
  c.reference = cfg_enum(j, "reference", c.reference, parse_reference_field);
  return c;
}

ScriptText normalize_for_eval(std::string_view text, const MetricConfig& cfg) {
  ScriptText t;
  if (cfg.strip_markup) {
    try {
      t = extract_plain_text(parse_markup(text));
    } catch (const std::exception&) {
      t = ScriptText::from_codepoints(strip_tags(text));
    }
  } else {
    t = ScriptText::normalize_lenient(text);
  }
  if (cfg.strip_tatweel) t = strip_tatweel(t);
  if (cfg.strip_tashkeel) t = strip_tashkeel(t);
  if (cfg.unify_alef_hamza) t = unify_alef_hamza(t);
  if (cfg.collapse_whitespace) t = collapse_whitespace(t);
  return t;
}

EditCounts levenshtein(std::u32string_view ref, std::u32string_view hyp) {
  return levenshtein<char32_t>(std::span<const char32_t>(ref.data(), ref.size()),
                               std::span<const char32_t>(hyp.data(), hyp.size()));
}

std::vector<std::u32string> split_words(std::u32string_view text) {
  std::vector<std::u32string> out;
  std::u32string cur;
  for (char32_t c : text) {
    if (is_whitespace(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::u32string> grapheme_clusters(std::u32string_view text) {
  std::vector<std::u32string> out;
  if (text.empty()) return out;

  // Creating a break iterator loads rule data; keep one per thread.
  thread_local std::unique_ptr<icu::BreakIterator> it = [] {
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::BreakIterator> b(
        icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(), status));
    if (U_FAILURE(status)) throw std::runtime_error("ICU character break iterator unavailable");
    return b;
  }();

  const auto us = icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(text.data()),
                                                static_cast<int32_t>(text.size()));
  it->setText(us);
  std::size_t cp = 0;
  int32_t start = it->first();
  for (int32_t end = it->next(); end != icu::BreakIterator::DONE; start = end, end = it->next()) {
    const auto n = static_cast<std::size_t>(us.countChar32(start, end - start));
    out.emplace_back(text.substr(cp, n));
    cp += n;
  }
  return out;
}

std::vector<std::uint32_t> TokenInterner::intern(const std::vector<std::u32string>& tokens) {
  std::vector<std::uint32_t> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    const auto next = static_cast<std::uint32_t>(ids_.size());
    out.push_back(ids_.try_emplace(t, next).first->second);
  }
  return out;
}

SampleScore score_pair(const std::string& id, const ScriptText& ref, const ScriptText& hyp,
                       const MetricConfig& cfg) {
  SampleScore s;
  s.id = id;

  if (cfg.cer_unit == CerUnit::Codepoint) {
    s.char_edits = levenshtein(ref.codepoints(), hyp.codepoints());
    s.ref_chars = ref.size();
    s.hyp_chars = hyp.size();
  } else {
    TokenInterner clusters;
    const auto r = clusters.intern(grapheme_clusters(ref.codepoints()));
    const auto h = clusters.intern(grapheme_clusters(hyp.codepoints()));
    s.char_edits = levenshtein<std::uint32_t>(r, h);
    s.ref_chars = r.size();
    s.hyp_chars = h.size();
  }

  TokenInterner words;
  const auto rw = words.intern(split_words(ref.codepoints()));
  const auto hw = words.intern(split_words(hyp.codepoints()));
  s.word_edits = levenshtein<std::uint32_t>(rw, hw);
  s.ref_words = rw.size();
  s.hyp_words = hw.size();

  s.cer = static_cast<double>(s.char_edits.distance()) /
          static_cast<double>(std::max<std::size_t>(s.ref_chars, 1));
  s.wer = static_cast<double>(s.word_edits.distance()) /
          static_cast<double>(std::max<std::size_t>(s.ref_words, 1));
  s.bleu = bleu_stats(rw, hw, cfg.bleu_max_n);
  s.sentence_bleu = sentence_bleu_from_stats(s.bleu, cfg.bleu_max_n, cfg.sentence_bleu_epsilon);
  s.empty_reference = s.ref_chars == 0;
  return s;
}

double cer(std::string_view ref, std::string_view hyp, const MetricConfig& cfg) {
  return score_pair("", normalize_for_eval(ref, cfg), normalize_for_eval(hyp, cfg), cfg).cer;
}

double wer(std::string_view ref, std::string_view hyp, const MetricConfig& cfg) {
  return score_pair("", normalize_for_eval(ref, cfg), normalize_for_eval(hyp, cfg), cfg).wer;
}

double sentence_bleu(std::string_view ref, std::string_view hyp, const MetricConfig& cfg) {
  return score_pair("", normalize_for_eval(ref, cfg), normalize_for_eval(hyp, cfg), cfg)
      .sentence_bleu;
}

double corpus_bleu(const std::vector<TextPair>& pairs, const MetricConfig& cfg) {
  if (pairs.empty()) throw std::invalid_argument("corpus_bleu needs at least one pair");
  BleuStats total;
  for (const auto& p : pairs) {
    TokenInterner words;
    const auto r = words.intern(split_words(normalize_for_eval(p.ref, cfg).codepoints()));
    const auto h = words.intern(split_words(normalize_for_eval(p.hyp, cfg).codepoints()));
    total += bleu_stats(r, h, cfg.bleu_max_n);
  }
  return corpus_bleu_from_stats(total, cfg.bleu_max_n);
}

}  // namespace qforge
