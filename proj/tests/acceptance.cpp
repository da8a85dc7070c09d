// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Everything runs in-process against the library and the
// CLI entry point.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "oracle/naive_dp.hpp"
#include "oracle/ngram_bleu.hpp"
#include "qforge/cli.hpp"
#include "qforge/evaluate.hpp"
#include "qforge/generate.hpp"
#include "support.hpp"

using namespace qforge;
using qf_test::TempDir;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

int run_cli_quiet(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  if (out) *out = o.str();
  if (code != 0) std::cerr << e.str();
  return code;
}

std::u32string random_letters(Rng& rng, std::size_t max_len) {
  static const std::u32string pool = U"ابتثجحخدذرزسشصضطظعغفقكلمنهوي ًٌٍَُِّْ";
  const auto len = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(max_len)));
  std::u32string s;
  for (std::size_t i = 0; i < len; ++i)
    s.push_back(pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))]);
  return s;
}

Outcome ac1() {
  Rng rng(101);
  const auto t0 = Clock::now();
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const ScriptText a = ScriptText::from_codepoints(random_letters(rng, 20));
    const ScriptText b = ScriptText::from_codepoints(random_letters(rng, 20));
    const SampleScore s = score_pair("x", a, b, MetricConfig{});
    const auto oc = oracle::naive_levenshtein(a.codepoints(), b.codepoints());
    const auto ow = oracle::naive_levenshtein(split_words(a.codepoints()), split_words(b.codepoints()));
    if (!(s.char_edits == EditCounts{oc.sub, oc.del, oc.ins}) ||
        !(s.word_edits == EditCounts{ow.sub, ow.del, ow.ins}))
      ++mismatches;
  }
  const double secs = seconds_since(t0);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu mismatches, %.2f s", mismatches, secs);
  return {mismatches == 0 && secs < 5.0, buf};
}

Outcome ac2() {
  static const char* vocab[] = {"كتب", "قرأ", "الولد", "في", "من", "الدرس"};
  Rng rng(202);
  double worst = 0;
  for (int round = 0; round < 200; ++round) {
    std::vector<std::pair<oracle::Words, oracle::Words>> pairs;
    std::vector<TextPair> texts;
    for (auto k = rng.uniform_int(1, 5); k > 0; --k) {
      oracle::Words ref(static_cast<std::size_t>(rng.uniform_int(0, 10)));
      for (auto& w : ref) w = vocab[rng.uniform_int(0, 5)];
      oracle::Words hyp = ref;
      for (auto& w : hyp)
        if (rng.uniform01() < 0.3) w = vocab[rng.uniform_int(0, 5)];
      if (rng.uniform01() < 0.2 && !hyp.empty()) hyp.pop_back();
      std::string r, h;
      for (const auto& w : ref) r += (r.empty() ? "" : " ") + w;
      for (const auto& w : hyp) h += (h.empty() ? "" : " ") + w;
      texts.push_back({r, h});
      worst = std::max(worst, std::abs(sentence_bleu(r, h) - oracle::sentence_bleu(ref, hyp)));
      pairs.emplace_back(std::move(ref), std::move(hyp));
    }
    worst = std::max(worst, std::abs(corpus_bleu(texts) - oracle::corpus_bleu(pairs)));
  }
  const double edge = corpus_bleu({{"ا ب ج د", "ا ب ج"}});
  const double edge_oracle = oracle::corpus_bleu({{{"ا", "ب", "ج", "د"}, {"ا", "ب", "ج"}}});
  char buf[128];
  std::snprintf(buf, sizeof buf, "max |diff| %.3g; zero-4-gram fixture %.3g (oracle %.3g)", worst, edge,
                edge_oracle);
  return {worst < 1e-9 && edge == 0.0 && edge_oracle == 0.0, buf};
}

Outcome ac3() {
  SampleRecord r;
  r.id = "ins";
  r.ground_truth_plain = ScriptText::normalize("نعم");
  const Evaluation e = evaluate({r}, {{"ins", "نعم نعم نعم لا"}}, MetricConfig{});
  const auto& s = e.samples.at(0);
  char buf[96];
  std::snprintf(buf, sizeof buf, "CER %.3f, WER %.3f", s.cer, s.wer);
  return {s.cer > 1.0 && s.wer > 1.0, buf};
}

Outcome ac4() {
  TempDir dir("ac4");
  const ToolkitConfig cfg = default_config();
  const CorpusSource src = qf_test::sample_corpus();
  const MockRenderer mock;
  std::string detail;
  bool ok = true;
  for (const char* profile : {"v0.1", "v0.2", "v0.3"}) {
    const GenerationInputs in{cfg.profile(profile), src, cfg, mock, kDefaultMix};
    const auto recs = generate(in, GenerateOptions{30, 4, dir / profile, 0, {}});
    for (ReferenceField field : {ReferenceField::Plain, ReferenceField::Markup}) {
      if (field == ReferenceField::Markup && !cfg.profile(profile).markup_ground_truth) continue;
      std::vector<Prediction> preds;
      for (const auto& r : recs)
        preds.push_back({r.id, field == ReferenceField::Plain ? r.ground_truth_plain.utf8()
                                                              : *r.ground_truth_markup});
      MetricConfig mc;
      mc.reference = field;
      const auto a = evaluate(recs, preds, mc).aggregate;
      const bool good = a.macro_cer == 0.0 && a.micro_cer == 0.0 && a.macro_wer == 0.0 &&
                        a.micro_wer == 0.0 && a.corpus_bleu == 1.0;
      ok = ok && good;
      if (!good) detail += std::string(profile) + " " + std::string(to_string(field)) + " failed; ";
    }
  }
  return {ok, ok ? "v0.1, v0.2, v0.3 x30 (plain and markup references)" : detail};
}

Outcome ac5() {
  SampleRecord r;
  r.id = "t";
  r.ground_truth_plain = ScriptText::normalize("كَتَبَ الطَّالِبُ الدَّرْسَ");
  const std::string hyp = "كتب الطالب الدرس";
  MetricConfig strip;
  strip.strip_tashkeel = true;
  const double with_strip = evaluate({r}, {{"t", hyp}}, strip).samples.at(0).cer;
  const double without = evaluate({r}, {{"t", hyp}}, MetricConfig{}).samples.at(0).cer;
  const auto& ref = r.ground_truth_plain.codepoints();
  const auto o = oracle::naive_levenshtein(ref, ScriptText::normalize(hyp).codepoints());
  const double oracle_cer = static_cast<double>(o.distance()) / static_cast<double>(ref.size());
  const double expected = static_cast<double>(stats(r.ground_truth_plain).tashkeel_count) /
                          static_cast<double>(ref.size());
  char buf[128];
  std::snprintf(buf, sizeof buf, "stripped %.3f, unstripped %.6f, tashkeel/len %.6f, DP oracle %.6f",
                with_strip, without, expected, oracle_cer);
  return {with_strip == 0.0 && without == expected && without == oracle_cer, buf};
}

Outcome ac6() {
  TempDir dir("ac6");
  const auto gen = [&](const std::string& sub, int seed) {
    const auto t0 = Clock::now();
    const int code = run_cli_quiet({"generate", "--profile", "v0.3", "--renderer", "mock", "--seed",
                                    std::to_string(seed), "--count", "50", "--corpus",
                                    (qf_test::corpora() / "news_sample.txt").string(), "--corpus",
                                    (qf_test::corpora() / "classical_sample.txt").string(), "--out",
                                    (dir / sub).string()});
    return std::pair{code, seconds_since(t0)};
  };
  const auto [c1, t1] = gen("a", 7);
  const auto [c2, t2] = gen("b", 7);
  const auto [c3, t3] = gen("c", 8);
  if (c1 || c2 || c3) return {false, "generate failed"};
  bool identical = qf_test::slurp(dir / "a" / "manifest.jsonl") == qf_test::slurp(dir / "b" / "manifest.jsonl");
  std::size_t images = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir / "a" / "images")) {
    const auto name = entry.path().filename();
    identical = identical && qf_test::slurp(entry.path()) == qf_test::slurp(dir / "b" / "images" / name);
    ++images;
  }
  const auto ra = read_manifest_file(dir / "a" / "manifest.jsonl");
  const auto rc = read_manifest_file(dir / "c" / "manifest.jsonl");
  std::size_t changed = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) changed += !(ra[i] == rc[i]);
  const double slowest = std::max({t1, t2, t3});
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu images identical=%s, seed 8 changed %zu records, slowest run %.2f s",
                images, identical ? "yes" : "no", changed, slowest);
  return {identical && images == 50 && changed >= 1 && slowest < 10.0, buf};
}

Outcome ac7() {
  TempDir dir("ac7");
  const ToolkitConfig cfg = default_config();
  const CorpusSource src = qf_test::sample_corpus();
  const MockRenderer mock;
  const std::set<std::string> sard{"amiri", "arial", "calibri", "sakkal_majalla", "scheherazade"};
  std::size_t bad01 = 0, bad02 = 0, bad03 = 0;

  const auto run_profile = [&](const char* name) {
    return generate(GenerationInputs{cfg.profile(name), src, cfg, mock, kDefaultMix},
                    GenerateOptions{50, 70, dir / name, 0, {}});
  };
  for (const auto& r : run_profile("v0.1")) {
    bool ok = stats(r.ground_truth_plain).tashkeel_count == 0;
    for (const auto& f : r.fonts_used) ok = ok && sard.count(f);
    bad01 += !ok;
  }
  const double threshold = cfg.profile("v0.2").min_density;
  for (const auto& r : run_profile("v0.2")) bad02 += !(stats(r.ground_truth_plain).density >= threshold);
  for (const auto& r : run_profile("v0.3")) {
    bool ok = r.sizes_used.size() >= 2 && r.ground_truth_markup.has_value();
    if (ok) {
      const DocumentSpec d = parse_markup(*r.ground_truth_markup);
      ok = extract_plain_text(d) == r.ground_truth_plain && serialize_markup(d) == *r.ground_truth_markup;
    }
    bad03 += !ok;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "violations v0.1 %zu/50, v0.2 %zu/50, v0.3 %zu/50", bad01, bad02, bad03);
  return {bad01 + bad02 + bad03 == 0, buf};
}

Outcome ac8() {
  const ToolkitConfig cfg = default_config();
  Rng doc_rng(derive_seed(7, 0));
  const DocumentSpec doc = sample_document(qf_test::sample_corpus(), cfg.profile("v0.3"), doc_rng);
  const Raster page = MockRenderer().render(doc, cfg.registry);

  Rng c(1);
  const bool clean_identity = apply_treatment(page, Treatment::Clean, c).first == page;

  bool constant = true;
  for (double sigma : {0.5, 1.0, 3.0})
    for (int v : {0, 77, 255}) {
      const Raster r(97, 61, static_cast<std::uint8_t>(v));
      constant = constant && gaussian_blur(r, sigma) == r;
    }

  Rng n(2);
  const double shift = std::abs(mean_value(gaussian_noise(Raster(256, 256, 128), 10.0, n)) - 128.0);

  Rng m(42), h(42);
  const double mad_m = mean_abs_deviation(page, apply_treatment(page, Treatment::Moderate, m).first);
  const double mad_h = mean_abs_deviation(page, apply_treatment(page, Treatment::Heavy, h).first);

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "clean identity %s, blur constants %s, noise mean shift %.3f, MAD heavy %.2f >= moderate %.2f >= 0",
                clean_identity ? "yes" : "no", constant ? "yes" : "no", shift, mad_h, mad_m);
  return {clean_identity && constant && shift < 1.0 && mad_h >= mad_m && mad_m >= 0.0, buf};
}

Outcome ac9() {
  const ToolkitConfig cfg = default_config();
  const CorpusSource src = qf_test::sample_corpus();
  std::size_t failures = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    Rng rng(derive_seed(9, i));
    const DocumentSpec d = sample_document(src, cfg.profile("v0.3"), rng);
    if (!(parse_markup(serialize_markup(d)) == d)) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " failures in 500"};
}

Outcome ac10() {
  TempDir dir("ac10");
  const auto fx = qf_test::fixtures() / "eval5";
  for (const char* label : {"model_a", "model_b"}) {
    if (run_cli_quiet({"evaluate", "--manifest", (fx / "manifest.jsonl").string(), "--predictions",
                       (fx / "predictions.jsonl").string(), "--label", label, "--out",
                       (dir / (std::string(label) + ".json")).string()}) != 0)
      return {false, "evaluate failed"};
  }
  std::string plain, by_font;
  const std::string a = (dir / "model_a.json").string(), b = (dir / "model_b.json").string();
  if (run_cli_quiet({"report", a, b}, &plain) != 0 || run_cli_quiet({"report", a, b, "--by-font"}, &by_font) != 0)
    return {false, "report failed"};
  const bool plain_ok = plain.find("| Model | CER↓ | WER↓ | BLEU↑ |\n") != std::string::npos;
  const bool font_ok =
      by_font.find("| Metric | Model | Amiri | Arial | Calibri | Sakkal Majalla | Scheherazade |") !=
          std::string::npos &&
      by_font.find("| CER↓ | model_a |") != std::string::npos &&
      by_font.find("| WER↓ | model_b |") != std::string::npos &&
      by_font.find("| BLEU↑ | model_a |") != std::string::npos;
  return {plain_ok && font_ok, std::string("model columns ") + (plain_ok ? "ok" : "missing") +
                                   ", five-font grid " + (font_ok ? "ok" : "missing")};
}

Outcome ac11() {
  // 10k pairs of ~500 characters: reference words from the sample corpora,
  // hypotheses with ~5% character noise.
  const CorpusSource src = qf_test::sample_corpus();
  std::u32string text;
  for (const auto& p : src.paragraphs()) text += p.codepoints() + U" ";
  Rng rng(11);
  std::vector<SampleRecord> manifest(10000);
  std::vector<Prediction> preds(10000);
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const auto start = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(text.size() - 501)));
    const std::u32string ref = text.substr(start, 500);
    std::u32string hyp;
    for (char32_t ch : ref) {
      const double u = rng.uniform01();
      if (u < 0.02) continue;
      hyp.push_back(u < 0.04 ? U'ب' : ch);
      if (u > 0.99) hyp.push_back(U'ا');
    }
    manifest[i].id = sample_id(i, manifest.size());
    manifest[i].ground_truth_plain = ScriptText::from_codepoints(ref);
    preds[i] = {manifest[i].id, ScriptText::from_codepoints(hyp).utf8()};
  }
  const auto t0 = Clock::now();
  const Evaluation e = evaluate(manifest, preds, MetricConfig{}, 1);
  const double secs = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu pairs, single worker, %.2f s (macro CER %.3f)", e.samples.size(), secs,
                e.aggregate.macro_cer);
  return {e.samples.size() == 10000 && secs < 60.0, buf};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"metric oracle equivalence", ac1},  {"BLEU oracle equivalence", ac2},
      {"unclamped CER/WER", ac3},          {"identity suite", ac4},
      {"diacritic behavior", ac5},         {"generation determinism", ac6},
      {"profile conformance", ac7},        {"degradation invariants", ac8},
      {"markup round trip", ac9},          {"report parity", ac10},
      {"evaluation throughput", ac11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "AC" << (i + 1) << " " << criteria[i].first << ": " << (o.pass ? "PASS" : "FAIL") << " ("
              << o.detail << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
