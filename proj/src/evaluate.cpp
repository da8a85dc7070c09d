#include "qforge/evaluate.hpp"

#include <omp.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <unordered_map>

#include "qforge/error.hpp"

namespace qforge {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

struct Pair {
  const SampleRecord* record;
  const Prediction* prediction;
};

std::string list_ids(const std::vector<std::string>& ids, std::size_t limit = 50) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > limit) out += ", ... (" + std::to_string(ids.size() - limit) + " more)";
  return out;
}

std::vector<Pair> pair_up(const std::vector<SampleRecord>& manifest,
                          const std::vector<Prediction>& predictions, const MetricConfig& cfg) {
  std::unordered_map<std::string, const Prediction*> by_id;
  by_id.reserve(predictions.size());
  for (const auto& p : predictions) by_id.emplace(p.id, &p);

  std::vector<Pair> pairs;
  pairs.reserve(manifest.size());
  std::vector<std::string> missing;
  std::vector<std::string> no_markup;
  for (const auto& r : manifest) {
    const auto it = by_id.find(r.id);
    if (it == by_id.end()) {
      missing.push_back(r.id);
      continue;
    }
    if (cfg.reference == ReferenceField::Markup && !r.ground_truth_markup) no_markup.push_back(r.id);
    pairs.push_back({&r, it->second});
  }
  if (!missing.empty())
    throw DataError("missing predictions for " + std::to_string(missing.size()) +
                    " id(s): " + list_ids(missing));
  if (!no_markup.empty())
    throw DataError("markup reference requested but " + std::to_string(no_markup.size()) +
                    " record(s) lack ground_truth_markup: " + list_ids(no_markup));
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& a, const Pair& b) { return a.record->id < b.record->id; });
  return pairs;
}

SampleScore score(const Pair& p, const MetricConfig& cfg) {
  const std::string& ref_text = cfg.reference == ReferenceField::Markup
                                    ? *p.record->ground_truth_markup
                                    : p.record->ground_truth_plain.utf8();
  return score_pair(p.record->id, normalize_for_eval(ref_text, cfg),
                    normalize_for_eval(p.prediction->text, cfg), cfg);
}

std::string join_fonts(const std::vector<std::string>& fonts) {
  std::string out;
  for (const auto& f : fonts) out += (out.empty() ? "" : "+") + f;
  return out;
}

Evaluation finish(std::vector<Pair> pairs, std::vector<SampleScore> scores,
                  const MetricConfig& cfg) {
  Evaluation e;
  e.config = cfg;
  e.aggregate = aggregate_scores(scores, cfg);

  std::map<std::string, std::vector<SampleScore>> groups;
  e.sample_fonts.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    e.sample_fonts.push_back(pairs[i].record->fonts_used);
    const std::string key = join_fonts(pairs[i].record->fonts_used);
    if (!key.empty()) groups[key].push_back(scores[i]);
  }
  for (const auto& [key, group] : groups) e.by_font.push_back({key, aggregate_scores(group, cfg)});
  e.samples = std::move(scores);
  return e;
}

ojson edits_json(const EditCounts& c) {
  return ojson{{"substitutions", c.substitutions},
               {"deletions", c.deletions},
               {"insertions", c.insertions}};
}

}  // namespace

std::vector<Prediction> read_predictions(std::istream& in) {
  std::vector<Prediction> out;
  std::vector<std::string> problems;
  std::unordered_map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      problems.push_back(where + "malformed JSON");
      continue;
    }
    if (!j.is_object() || !j.contains("id") || !j.at("id").is_string() || !j.contains("text") ||
        !j.at("text").is_string()) {
      problems.push_back(where + "expected an object with string fields \"id\" and \"text\"");
      continue;
    }
    Prediction p{j.at("id").get<std::string>(), j.at("text").get<std::string>()};
    const auto [it, fresh] = first_line.emplace(p.id, lineno);
    if (!fresh) {
      problems.push_back(where + "duplicate id '" + p.id + "' (first seen on line " +
                         std::to_string(it->second) + ")");
      continue;
    }
    out.push_back(std::move(p));
  }
  if (!problems.empty()) {
    std::string msg = "invalid predictions:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw DataError(msg);
  }
  return out;
}

std::vector<Prediction> read_predictions_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read predictions " + path.string());
  try {
    return read_predictions(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

AggregateScores aggregate_scores(std::span<const SampleScore> scores, const MetricConfig& cfg) {
  AggregateScores a;
  a.n_samples = scores.size();
  if (scores.empty()) return a;

  double cer_sum = 0.0, wer_sum = 0.0, bleu_sum = 0.0;
  BleuStats pooled;
  for (const auto& s : scores) {
    cer_sum += s.cer;
    wer_sum += s.wer;
    bleu_sum += s.sentence_bleu;
    a.char_edits += s.char_edits;
    a.word_edits += s.word_edits;
    a.ref_chars += s.ref_chars;
    a.ref_words += s.ref_words;
    pooled += s.bleu;
    if (s.empty_reference) a.empty_reference_ids.push_back(s.id);
  }
  const auto n = static_cast<double>(scores.size());
  a.macro_cer = cer_sum / n;
  a.macro_wer = wer_sum / n;
  a.macro_sentence_bleu = bleu_sum / n;
  a.micro_cer = static_cast<double>(a.char_edits.distance()) /
                static_cast<double>(std::max<std::size_t>(a.ref_chars, 1));
  a.micro_wer = static_cast<double>(a.word_edits.distance()) /
                static_cast<double>(std::max<std::size_t>(a.ref_words, 1));
  a.corpus_bleu = corpus_bleu_from_stats(pooled, cfg.bleu_max_n);
  return a;
}

Evaluation evaluate(const std::vector<SampleRecord>& manifest,
                    const std::vector<Prediction>& predictions, const MetricConfig& cfg,
                    int jobs) {
  auto pairs = pair_up(manifest, predictions, cfg);
  std::vector<SampleScore> scores(pairs.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i)
    scores[static_cast<std::size_t>(i)] = score(pairs[static_cast<std::size_t>(i)], cfg);
  return finish(std::move(pairs), std::move(scores), cfg);
}

Evaluation evaluate_serial(const std::vector<SampleRecord>& manifest,
                           const std::vector<Prediction>& predictions, const MetricConfig& cfg) {
  auto pairs = pair_up(manifest, predictions, cfg);
  std::vector<SampleScore> scores;
  scores.reserve(pairs.size());
  for (const auto& p : pairs) scores.push_back(score(p, cfg));
  return finish(std::move(pairs), std::move(scores), cfg);
}

ojson to_json(const AggregateScores& a) {
  ojson j;
  j["n_samples"] = a.n_samples;
  j["macro_cer"] = a.macro_cer;
  j["macro_wer"] = a.macro_wer;
  j["micro_cer"] = a.micro_cer;
  j["micro_wer"] = a.micro_wer;
  j["corpus_bleu"] = a.corpus_bleu;
  j["macro_sentence_bleu"] = a.macro_sentence_bleu;
  j["char_edits"] = edits_json(a.char_edits);
  j["word_edits"] = edits_json(a.word_edits);
  j["ref_chars"] = a.ref_chars;
  j["ref_words"] = a.ref_words;
  j["empty_reference_count"] = a.empty_reference_ids.size();
  j["empty_reference_ids"] = a.empty_reference_ids;
  return j;
}

ojson to_json(const SampleScore& s) {
  ojson j;
  j["id"] = s.id;
  j["cer"] = s.cer;
  j["wer"] = s.wer;
  j["sentence_bleu"] = s.sentence_bleu;
  j["char_edits"] = edits_json(s.char_edits);
  j["word_edits"] = edits_json(s.word_edits);
  j["ref_chars"] = s.ref_chars;
  j["hyp_chars"] = s.hyp_chars;
  j["ref_words"] = s.ref_words;
  j["hyp_words"] = s.hyp_words;
  j["empty_reference"] = s.empty_reference;
  return j;
}

ojson report_json(const Evaluation& e, const std::string& label, const ojson& run_config) {
  ojson j;
  j["run_config"] = run_config;
  j["label"] = label;
  j["metric_config"] = to_json(e.config);
  j["aggregate"] = to_json(e.aggregate);
  j["by_font"] = ojson::array();
  for (const auto& g : e.by_font) {
    ojson row;
    row["fonts"] = g.fonts;
    row["aggregate"] = to_json(g.scores);
    j["by_font"].push_back(std::move(row));
  }
  j["samples"] = ojson::array();
  for (std::size_t i = 0; i < e.samples.size(); ++i) {
    ojson s = to_json(e.samples[i]);
    s["fonts_used"] = e.sample_fonts[i];
    j["samples"].push_back(std::move(s));
  }
  return j;
}

}  // namespace qforge
