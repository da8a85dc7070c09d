#include "qforge/corpus.hpp"

#include <fstream>
#include <sstream>

#include "qforge/error.hpp"

namespace qforge {

namespace {

bool has_base_text(const ScriptText& t) {
  for (char32_t c : t.codepoints())
    if (!is_whitespace(c) && !is_tashkeel(c) && c != U'<' && c != U'>') return true;
  return false;
}

std::vector<std::size_t> candidates(const CorpusSource& source, const VersionProfile& profile) {
  std::vector<std::size_t> out;
  const auto& paras = source.paragraphs();
  const auto& st = source.paragraph_stats();
  for (std::size_t i = 0; i < paras.size(); ++i) {
    if (!source.usable(i)) continue;
    if (profile.require_diacritics && st[i].density < profile.min_density) continue;
    out.push_back(i);
  }
  return out;
}

ScriptText first_words(const ScriptText& t, std::size_t n) {
  std::u32string out;
  std::size_t words = 0;
  for (char32_t c : t.codepoints()) {
    if (c == U' ' && ++words == n) break;
    out.push_back(c);
  }
  return ScriptText::from_codepoints(out);
}

class PageSampler {
 public:
  PageSampler(const CorpusSource& source, const VersionProfile& profile, Rng& rng)
      : source_(source), profile_(profile), rng_(rng), pool_(candidates(source, profile)) {
    if (pool_.empty()) {
      throw ConfigError(profile.require_diacritics
                            ? "no paragraph in corpus '" + source.provenance() +
                                  "' reaches diacritic density " +
                                  std::to_string(profile.min_density)
                            : "corpus '" + source.provenance() + "' has no usable paragraph");
    }
  }

  DocumentSpec single_block() {
    Block body{BlockRole::Body, 0, {}};
    const ScriptText text = prepare(paragraph());
    const std::string font = font_id();
    body.runs.push_back(Run{text, RunStyle{font, flat_size()}});
    return DocumentSpec{{std::move(body)}};
  }

  DocumentSpec structured(const MultiSizePerPage& policy) {
    const auto bands = size_bands(policy.min_px, policy.max_px);
    DocumentSpec doc;

    const std::size_t hp = paragraph();
    const auto header_words = static_cast<std::size_t>(rng_.uniform_int(2, 6));
    const int level = static_cast<int>(rng_.uniform_int(1, 2));
    const std::string header_font = font_id();
    const int header_size = in_band(bands[2]);
    doc.blocks.push_back(
        Block{BlockRole::Header, level, {Run{excerpt(hp, header_words), RunStyle{header_font, header_size}}}});

    const auto n_body = rng_.uniform_int(1, 3);
    for (std::int64_t b = 0; b < n_body; ++b) {
      const std::size_t bp = paragraph();
      const std::string font = font_id();
      const int size = in_band(bands[1]);
      doc.blocks.push_back(Block{BlockRole::Body, 0, {Run{prepare(bp), RunStyle{font, size}}}});
    }

    if (rng_.uniform01() < 0.5) {
      const std::size_t ap = paragraph();
      const auto words = static_cast<std::size_t>(rng_.uniform_int(3, 10));
      const std::string font = font_id();
      const int size = in_band(bands[0]);
      doc.blocks.push_back(
          Block{BlockRole::Annotation, 0, {Run{excerpt(ap, words), RunStyle{font, size}}}});
    }
    return doc;
  }

 private:
  std::size_t paragraph() {
    return pool_[static_cast<std::size_t>(
        rng_.uniform_int(0, static_cast<std::int64_t>(pool_.size()) - 1))];
  }

  std::string font_id() {
    const auto& fonts = profile_.fonts;
    return fonts[static_cast<std::size_t>(
        rng_.uniform_int(0, static_cast<std::int64_t>(fonts.size()) - 1))];
  }

  int in_band(SizeBand band) { return static_cast<int>(rng_.uniform_int(band.lo, band.hi)); }

  int flat_size() {
    if (const auto* u = std::get_if<UniformMin>(&profile_.size_policy)) return u->px;
    if (const auto* s = std::get_if<UniformSampled>(&profile_.size_policy))
      return static_cast<int>(rng_.uniform_int(s->min_px, s->max_px));
    const auto& m = std::get<MultiSizePerPage>(profile_.size_policy);
    return static_cast<int>(rng_.uniform_int(m.min_px, m.max_px));
  }

  ScriptText prepare(std::size_t index) const {
    ScriptText t = source_.paragraphs()[index];
    if (profile_.strip_diacritics) t = strip_tashkeel(t);
    return sanitize_run_text(t);
  }

  // Leading words of a paragraph. Falls back to the whole paragraph when
  // the excerpt would be empty or would miss the density requirement.
  ScriptText excerpt(std::size_t index, std::size_t words) const {
    const ScriptText full = prepare(index);
    ScriptText cut = first_words(full, words);
    if (!has_base_text(cut)) return full;
    if (profile_.require_diacritics && stats(cut).density < profile_.min_density) return full;
    return cut;
  }

  const CorpusSource& source_;
  const VersionProfile& profile_;
  Rng& rng_;
  std::vector<std::size_t> pool_;
};

}  // namespace

CorpusSource::CorpusSource(std::vector<ScriptText> paragraphs, std::string provenance)
    : paragraphs_(std::move(paragraphs)), provenance_(std::move(provenance)) {
  stats_.reserve(paragraphs_.size());
  usable_.reserve(paragraphs_.size());
  for (const auto& p : paragraphs_) {
    stats_.push_back(stats(p));
    usable_.push_back(has_base_text(p) ? 1 : 0);
  }
}

CorpusSource CorpusSource::merge(const std::vector<CorpusSource>& sources) {
  std::vector<ScriptText> all;
  std::string label;
  for (const auto& s : sources) {
    all.insert(all.end(), s.paragraphs().begin(), s.paragraphs().end());
    label += (label.empty() ? "" : "+") + s.provenance();
  }
  return CorpusSource(std::move(all), std::move(label));
}

CorpusSource load_corpus(const std::filesystem::path& path, std::size_t min_len,
                         std::size_t max_len) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read corpus " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();

  ScriptText text;
  try {
    text = ScriptText::normalize(buf.str());
  } catch (const DecodeError& e) {
    throw IoError("corpus " + path.string() + ": " + e.what());
  }

  std::vector<ScriptText> paragraphs;
  std::u32string current;
  std::u32string line;
  auto flush_paragraph = [&] {
    ScriptText p = collapse_whitespace(ScriptText::from_codepoints(current));
    current.clear();
    if (p.empty()) return;
    if (p.size() < min_len || p.size() > max_len) return;
    paragraphs.push_back(std::move(p));
  };
  auto end_line = [&] {
    bool blank = true;
    for (char32_t c : line)
      if (!is_whitespace(c)) blank = false;
    if (blank) {
      flush_paragraph();
    } else {
      if (!current.empty()) current.push_back(U' ');
      current += line;
    }
    line.clear();
  };
  for (char32_t c : text.codepoints()) {
    if (c == U'\n') end_line();
    else line.push_back(c);
  }
  end_line();
  flush_paragraph();

  if (paragraphs.empty())
    throw ConfigError("corpus " + path.string() + " has no paragraphs within [" +
                      std::to_string(min_len) + ", " + std::to_string(max_len) + "] code points");
  return CorpusSource(std::move(paragraphs), path.stem().string());
}

DocumentSpec sample_document(const CorpusSource& source, const VersionProfile& profile, Rng& rng) {
  PageSampler sampler(source, profile, rng);
  if (const auto* multi = std::get_if<MultiSizePerPage>(&profile.size_policy))
    return sampler.structured(*multi);
  return sampler.single_block();
}

}  // namespace qforge
