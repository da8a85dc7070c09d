#include "qforge/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "qforge/error.hpp"

namespace qforge {

namespace {

using json = nlohmann::json;

const std::vector<std::string> kSardColumns{"amiri", "arial", "calibri", "sakkal_majalla",
                                            "scheherazade"};

HeadlineScores headline(const json& agg, AggregateMode mode) {
  try {
    HeadlineScores h;
    h.cer = agg.at(mode == AggregateMode::Macro ? "macro_cer" : "micro_cer").get<double>();
    h.wer = agg.at(mode == AggregateMode::Macro ? "macro_wer" : "micro_wer").get<double>();
    h.bleu = agg.at("corpus_bleu").get<double>();
    h.sentence_bleu = agg.at("macro_sentence_bleu").get<double>();
    h.n_samples = agg.at("n_samples").get<std::size_t>();
    return h;
  } catch (const json::exception& e) {
    throw DataError(std::string("report aggregate is incomplete: ") + e.what());
  }
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string md_cell(const std::string& s) {
  std::string out;
  for (char c : s) out += c == '|' ? std::string("\\|") : std::string(1, c);
  return out;
}

// A JSON dump can only contain "--" inside string values, where the
// escaped form is equivalent.
std::string comment_safe(std::string s) {
  for (std::size_t p = s.find("--"); p != std::string::npos; p = s.find("--", p))
    s.replace(p, 2, "-\\u002d");
  return s;
}

class Table {
 public:
  explicit Table(TableFormat f) : format_(f) {}

  void row(const std::vector<std::string>& cells) {
    if (format_ == TableFormat::Csv) {
      for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << csv_field(cells[i]);
      out_ << '\n';
      return;
    }
    out_ << '|';
    for (const auto& c : cells) out_ << ' ' << md_cell(c) << " |";
    out_ << '\n';
    if (!header_done_) {
      out_ << '|';
      for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i < 2 ? " --- |" : " ---: |");
      out_ << '\n';
      header_done_ = true;
    }
  }

  void note(const std::string& text) { notes_.push_back(text); }

  std::string str(const std::string& config_line) const {
    std::ostringstream s;
    if (format_ == TableFormat::Csv) {
      s << "# run_config: " << config_line << '\n' << out_.str();
      for (const auto& n : notes_) s << "# " << n << '\n';
    } else {
      s << "<!-- run_config: " << comment_safe(config_line) << " -->\n\n" << out_.str();
      if (!notes_.empty()) s << '\n';
      for (const auto& n : notes_) s << n << "\n";
    }
    return s.str();
  }

 private:
  TableFormat format_;
  std::ostringstream out_;
  bool header_done_ = false;
  std::vector<std::string> notes_;
};

}  // namespace

std::optional<TableFormat> parse_table_format(std::string_view s) {
  if (s == "markdown" || s == "md") return TableFormat::Markdown;
  if (s == "csv") return TableFormat::Csv;
  return std::nullopt;
}

ReportSummary summarize_report(const json& report) {
  if (!report.is_object()) throw DataError("report is not a JSON object");
  for (const char* key : {"label", "metric_config", "aggregate"})
    if (!report.contains(key)) throw DataError(std::string("report lacks '") + key + "'");
  ReportSummary s;
  if (!report.at("label").is_string()) throw DataError("report label must be a string");
  s.label = report.at("label").get<std::string>();
  s.config = metric_config_from_json(report.at("metric_config"));
  s.run_config = report.value("run_config", json::object());
  s.overall = headline(report.at("aggregate"), s.config.aggregate);
  if (report.contains("by_font") && report.at("by_font").is_array()) {
    for (const auto& g : report.at("by_font")) {
      if (!g.contains("fonts") || !g.contains("aggregate"))
        throw DataError("by_font entry lacks 'fonts' or 'aggregate'");
      s.by_font[g.at("fonts").get<std::string>()] = headline(g.at("aggregate"), s.config.aggregate);
    }
  }
  return s;
}

ReportSummary load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read report " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": malformed JSON (" + e.what() + ")");
  }
  try {
    return summarize_report(j);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string font_display_name(const std::string& key,
                              const std::map<std::string, std::string>& families) {
  std::string out;
  std::size_t start = 0;
  while (start <= key.size()) {
    const std::size_t end = std::min(key.find('+', start), key.size());
    const std::string id = key.substr(start, end - start);
    const auto it = families.find(id);
    out += (out.empty() ? "" : "+") + (it != families.end() ? it->second : id);
    start = end + 1;
  }
  return out;
}

std::string render_table(const std::vector<ReportSummary>& reports, const TableOptions& opts) {
  if (reports.empty()) throw std::invalid_argument("render_table needs at least one report");
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (!(reports[i].config == reports[0].config))
      throw ReportConflictError("metric configuration of '" + reports[i].label +
                                "' differs from '" + reports[0].label + "': " +
                                to_json(reports[i].config).dump() + " vs " +
                                to_json(reports[0].config).dump());
  }

  std::vector<const ReportSummary*> rows;
  for (const auto& r : reports) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const ReportSummary* a, const ReportSummary* b) {
    if (a->overall.cer != b->overall.cer) return a->overall.cer < b->overall.cer;
    return a->label < b->label;
  });

  nlohmann::ordered_json echo = opts.run_config;
  echo["metric_config"] = to_json(reports[0].config);
  echo["sources"] = nlohmann::ordered_json::array();
  for (const auto* r : rows)
    echo["sources"].push_back(nlohmann::ordered_json{{"label", r->label}, {"run_config", r->run_config}});

  const AggregateMode mode = reports[0].config.aggregate;
  Table t(opts.format);

  if (!opts.by_font) {
    t.row({"Model", "CER↓", "WER↓", "BLEU↑"});
    for (const auto* r : rows)
      t.row({r->label, fixed3(r->overall.cer), fixed3(r->overall.wer), fixed3(r->overall.bleu)});
  } else {
    std::vector<std::string> columns = kSardColumns;
    std::set<std::string> extra;
    for (const auto* r : rows)
      for (const auto& [key, _] : r->by_font)
        if (std::find(columns.begin(), columns.end(), key) == columns.end()) extra.insert(key);
    columns.insert(columns.end(), extra.begin(), extra.end());

    std::vector<std::string> header{"Metric", "Model"};
    for (const auto& c : columns) header.push_back(font_display_name(c, opts.font_families));
    t.row(header);

    struct Metric {
      const char* name;
      double HeadlineScores::*field;
    };
    for (const Metric m : {Metric{"CER↓", &HeadlineScores::cer}, Metric{"WER↓", &HeadlineScores::wer},
                           Metric{"BLEU↑", &HeadlineScores::bleu}}) {
      for (const auto* r : rows) {
        std::vector<std::string> cells{m.name, r->label};
        for (const auto& c : columns) {
          const auto it = r->by_font.find(c);
          cells.push_back(it == r->by_font.end() ? "n/a" : fixed3(it->second.*m.field));
        }
        t.row(cells);
      }
    }
  }

  std::string bleu_note = "BLEU is corpus BLEU-4. Macro sentence BLEU:";
  for (const auto* r : rows) bleu_note += " " + r->label + " " + fixed3(r->overall.sentence_bleu) + ";";
  bleu_note.back() = '.';
  t.note(std::string("CER and WER are ") + (mode == AggregateMode::Macro ? "macro" : "micro") +
         " averages. " + bleu_note);
  return t.str(echo.dump());
}

}  // namespace qforge
