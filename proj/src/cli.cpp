#include "qforge/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "qforge/error.hpp"
#include "qforge/evaluate.hpp"
#include "qforge/generate.hpp"
#include "qforge/report.hpp"

namespace qforge {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct GenerateArgs {
  std::string profile;
  std::optional<std::size_t> count;
  std::uint64_t seed = 0;
  std::string renderer = "mock";
  std::string render_cmd;
  std::string config;
  std::vector<std::string> corpora;
  std::size_t min_len = 20;
  std::size_t max_len = 2000;
  std::string out;
  std::string mix = "1/3";
  int jobs = 0;
};

struct DegradeArgs {
  std::string in;
  std::string out;
  std::string treatment;
  std::string mix;
  std::uint64_t seed = 0;
  std::string config;
  int jobs = 0;
};

struct EvaluateArgs {
  std::string manifest;
  std::string predictions;
  std::string label;
  std::string out = "report.json";
  std::string format = "markdown";
  MetricConfig metric;
  bool no_collapse = false;
  std::string cer_unit = "codepoint";
  std::string aggregate = "macro";
  std::string reference = "plain";
  int jobs = 0;
};

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string format = "markdown";
  bool by_font = false;
  std::string config;
  std::string out;
};

struct InspectArgs {
  std::string manifest;
  std::string id;
  std::string config;
};

ToolkitConfig load_toolkit(const std::string& path) {
  return path.empty() ? default_config() : load_config(path);
}

TreatmentMix parse_mix(const std::string& text) {
  if (text == "1/3") return kDefaultMix;
  TreatmentMix mix{};
  std::stringstream ss(text);
  std::string part;
  std::size_t n = 0;
  while (std::getline(ss, part, ',')) {
    if (n == 3) throw ConfigError("--mix takes three comma-separated weights");
    try {
      std::size_t used = 0;
      mix[n] = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError("--mix: '" + part + "' is not a number");
    }
    ++n;
  }
  if (n != 3) throw ConfigError("--mix takes three comma-separated weights");
  validate_mix(mix);
  return mix;
}

std::vector<std::string> split_command(const std::string& cmd) {
  std::vector<std::string> argv;
  std::istringstream ss(cmd);
  for (std::string w; ss >> w;) argv.push_back(w);
  return argv;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::map<std::string, std::string> font_families(const ToolkitConfig& cfg) {
  std::map<std::string, std::string> out;
  for (const auto& [id, entry] : cfg.registry.entries()) out[id] = entry.family_name;
  return out;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string joined(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const ToolkitConfig cfg = load_toolkit(a.config);
  const VersionProfile& profile = cfg.profile(a.profile);
  const TreatmentMix mix = parse_mix(a.mix);
  if (a.corpora.empty()) throw ConfigError("generate needs at least one --corpus file");
  if (a.min_len > a.max_len) throw ConfigError("--min-len exceeds --max-len");

  std::vector<CorpusSource> sources;
  for (const auto& c : a.corpora) sources.push_back(load_corpus(c, a.min_len, a.max_len));
  const CorpusSource source = sources.size() == 1 ? sources.front() : CorpusSource::merge(sources);

  std::unique_ptr<RendererAdapter> renderer;
  if (a.renderer == "mock") {
    renderer = std::make_unique<MockRenderer>();
  } else {
    const auto argv = split_command(a.render_cmd);
    if (argv.empty()) throw ConfigError("--renderer external requires --render-cmd");
    // Fail before any work if the profile names a font with no file.
    for (const auto& id : profile.fonts) {
      const auto file = cfg.registry.resolve_file(id);
      if (!fs::exists(file))
        throw RenderError("font '" + id + "' file not found: " + file.string());
    }
    renderer = std::make_unique<ExternalToolchain>(argv);
  }

  const std::size_t count = a.count.value_or(profile.default_count);
  ojson run;
  run["command"] = "generate";
  run["profile"] = a.profile;
  run["count"] = count;
  run["seed"] = a.seed;
  run["renderer"] = a.renderer;
  run["render_cmd"] = a.renderer == "mock" ? ojson(nullptr) : ojson(split_command(a.render_cmd));
  run["config"] = a.config.empty() ? ojson(nullptr) : ojson(a.config);
  run["corpus"] = a.corpora;
  run["corpus_provenance"] = source.provenance();
  run["min_len"] = a.min_len;
  run["max_len"] = a.max_len;
  run["mix"] = mix;
  run["out"] = a.out;
  run["jobs"] = a.jobs;
  run["toolkit"] = to_json(cfg, a.renderer != "mock");

  GenerationInputs in{profile, source, cfg, *renderer, mix};
  GenerateOptions opts;
  opts.count = count;
  opts.master_seed = a.seed;
  opts.out_dir = a.out;
  opts.jobs = a.jobs;
  opts.run_config = run;
  const auto records = generate(in, opts);
  out << "wrote " << records.size() << " records to " << (fs::path(a.out) / "manifest.jsonl").string()
      << '\n';
  return kExitOk;
}

int cmd_degrade(const DegradeArgs& a, std::ostream& out) {
  const ToolkitConfig cfg = load_toolkit(a.config);
  TreatmentMix mix{};
  if (!a.treatment.empty()) {
    const auto t = parse_treatment(a.treatment);
    if (!t) throw ConfigError("unknown treatment '" + a.treatment + "'");
    mix[static_cast<std::size_t>(*t)] = 1.0;
  } else {
    mix = parse_mix(a.mix.empty() ? "1/3" : a.mix);
  }

  ojson run;
  run["command"] = "degrade";
  run["in"] = a.in;
  run["out"] = a.out;
  run["mix"] = mix;
  run["seed"] = a.seed;
  run["config"] = a.config.empty() ? ojson(nullptr) : ojson(a.config);
  run["jobs"] = a.jobs;
  run["degrade"] = to_json(cfg, false)["degrade"];

  GenerateOptions opts;
  opts.master_seed = a.seed;
  opts.out_dir = a.out;
  opts.jobs = a.jobs;
  opts.run_config = run;
  const auto records = degrade_dataset(a.in, mix, cfg.ranges, opts);
  out << "degraded " << records.size() << " records into "
      << (fs::path(a.out) / "manifest.jsonl").string() << '\n';
  return kExitOk;
}

int cmd_evaluate(EvaluateArgs a, std::ostream& out) {
  MetricConfig cfg = a.metric;
  cfg.collapse_whitespace = !a.no_collapse;
  cfg.cer_unit = *parse_cer_unit(a.cer_unit);
  cfg.aggregate = *parse_aggregate_mode(a.aggregate);
  cfg.reference = *parse_reference_field(a.reference);
  const std::string label = a.label.empty() ? fs::path(a.predictions).stem().string() : a.label;

  const auto manifest = read_manifest_file(a.manifest);
  const auto predictions = read_predictions_file(a.predictions);
  const Evaluation e = evaluate(manifest, predictions, cfg, a.jobs);

  ojson run;
  run["command"] = "evaluate";
  run["manifest"] = a.manifest;
  run["predictions"] = a.predictions;
  run["label"] = label;
  run["out"] = a.out;
  run["format"] = a.format;
  run["jobs"] = a.jobs;
  run["metric_config"] = to_json(cfg);
  const auto dataset_cfg = fs::path(a.manifest).parent_path() / "run_config.json";
  if (fs::exists(dataset_cfg)) {
    std::ifstream in(dataset_cfg, std::ios::binary);
    try {
      run["dataset_run_config"] = ojson::parse(in);
    } catch (const nlohmann::json::exception&) {
      run["dataset_run_config"] = nullptr;
    }
  }

  const ojson report = report_json(e, label, run);
  write_text(a.out, report.dump(2) + "\n");

  TableOptions t;
  t.format = *parse_table_format(a.format);
  t.run_config = run;
  out << render_table({summarize_report(nlohmann::json::parse(report.dump()))}, t);
  if (!e.aggregate.empty_reference_ids.empty())
    out << "warning: " << e.aggregate.empty_reference_ids.size()
        << " sample(s) have an empty reference: " << joined(e.aggregate.empty_reference_ids) << '\n';
  return kExitOk;
}

int cmd_report(const ReportArgs& a, std::ostream& out) {
  std::vector<ReportSummary> reports;
  for (const auto& p : a.inputs) reports.push_back(load_report(p));

  TableOptions t;
  t.format = *parse_table_format(a.format);
  t.by_font = a.by_font;
  t.font_families = font_families(load_toolkit(a.config));
  t.run_config["command"] = "report";
  t.run_config["inputs"] = a.inputs;
  t.run_config["format"] = a.format;
  t.run_config["by_font"] = a.by_font;
  t.run_config["config"] = a.config.empty() ? ojson(nullptr) : ojson(a.config);

  const std::string table = render_table(reports, t);
  if (a.out.empty()) {
    out << table;
  } else {
    write_text(a.out, table);
  }
  return kExitOk;
}

int cmd_inspect(const InspectArgs& a, std::ostream& out, std::ostream& err) {
  const auto records = read_manifest_file(a.manifest);
  const auto it = std::find_if(records.begin(), records.end(),
                               [&](const SampleRecord& r) { return r.id == a.id; });
  if (it == records.end()) {
    err << "error: no sample with id '" << a.id << "' in " << a.manifest << '\n';
    return kExitInspect;
  }
  const SampleRecord& r = *it;
  out << to_json(r).dump(2) << '\n';

  bool ok = true;
  auto check = [&](const std::string& what, bool pass) {
    out << what << ": " << (pass ? "PASS" : "FAIL") << '\n';
    ok = ok && pass;
  };

  const TextStats st = stats(r.ground_truth_plain);
  const ToolkitConfig cfg = load_toolkit(a.config);
  const VersionProfile* profile = nullptr;
  for (const auto& p : cfg.profiles)
    if (p.name == r.profile) profile = &p;

  if (!profile) {
    out << "profile '" << r.profile << "' is not configured: conformance checks skipped\n";
  } else {
    if (profile->require_diacritics)
      check("density " + fixed2(st.density) + " ≥ " + fixed2(profile->min_density),
            st.density >= profile->min_density);
    if (profile->strip_diacritics)
      check("tashkeel count " + std::to_string(st.tashkeel_count) + " = 0", st.tashkeel_count == 0);

    const bool fonts_ok =
        !r.fonts_used.empty() &&
        std::all_of(r.fonts_used.begin(), r.fonts_used.end(), [&](const std::string& f) {
          return std::find(profile->fonts.begin(), profile->fonts.end(), f) != profile->fonts.end();
        });
    check("fonts {" + joined(r.fonts_used) + "} ⊆ " + profile->name + " fonts", fonts_ok);

    std::vector<std::string> sizes;
    for (int s : r.sizes_used) sizes.push_back(std::to_string(s));
    const std::string size_list = "{" + joined(sizes) + "}";
    const auto in_range = [&](int lo, int hi) {
      return !r.sizes_used.empty() && std::all_of(r.sizes_used.begin(), r.sizes_used.end(),
                                                  [&](int s) { return s >= lo && s <= hi; });
    };
    if (const auto* u = std::get_if<UniformMin>(&profile->size_policy)) {
      check("sizes " + size_list + " = {" + std::to_string(u->px) + "}",
            r.sizes_used == std::vector<int>{u->px});
    } else if (const auto* s = std::get_if<UniformSampled>(&profile->size_policy)) {
      check("sizes " + size_list + " single size within [" + std::to_string(s->min_px) + ", " +
                std::to_string(s->max_px) + "]",
            r.sizes_used.size() == 1 && in_range(s->min_px, s->max_px));
    } else {
      const auto& m = std::get<MultiSizePerPage>(profile->size_policy);
      check("distinct sizes " + std::to_string(r.sizes_used.size()) + " ≥ 2", r.sizes_used.size() >= 2);
      check("sizes " + size_list + " within [" + std::to_string(m.min_px) + ", " +
                std::to_string(m.max_px) + "]",
            in_range(m.min_px, m.max_px));
    }
    if (profile->markup_ground_truth && !r.ground_truth_markup)
      check("markup ground truth present", false);
  }

  if (r.ground_truth_markup) {
    bool same = false;
    std::string why;
    try {
      same = extract_plain_text(parse_markup(*r.ground_truth_markup)) == r.ground_truth_plain;
    } catch (const std::exception& e) {
      why = std::string(" (") + e.what() + ")";
    }
    check("markup ↔ plain consistency" + why, same);
  }
  return ok ? kExitOk : kExitInspect;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthetic Arabic OCR data: generate, degrade, evaluate, report, inspect",
               "qari-forge"};
  app.require_subcommand(1);

  GenerateArgs g;
  auto* gen = app.add_subcommand("generate", "Render a synthetic dataset for a profile");
  gen->add_option("--profile", g.profile, "v0.1, v0.2, v0.3 or a configured profile")->required();
  gen->add_option("--count", g.count, "Samples to generate (default: the profile's count)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", g.seed, "Master seed")->capture_default_str();
  gen->add_option("--renderer", g.renderer)->check(CLI::IsMember({"mock", "external"}))
      ->capture_default_str();
  gen->add_option("--render-cmd", g.render_cmd,
                  "External renderer command, split on whitespace; receives markup, css, png");
  gen->add_option("--config", g.config, "Toolkit config JSON (fonts, profiles, degrade ranges)");
  gen->add_option("--corpus", g.corpora, "UTF-8 corpus file; repeatable")->required();
  gen->add_option("--min-len", g.min_len, "Shortest paragraph kept, in code points")
      ->capture_default_str();
  gen->add_option("--max-len", g.max_len, "Longest paragraph kept, in code points")
      ->capture_default_str();
  gen->add_option("--out", g.out, "Output dataset directory")->required();
  gen->add_option("--mix", g.mix, "Clean,moderate,heavy weights summing to 1 (default: thirds)");
  gen->add_option("--jobs", g.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  DegradeArgs d;
  auto* deg = app.add_subcommand("degrade", "Re-degrade a clean dataset into a new directory");
  deg->add_option("--in", d.in, "Clean dataset directory")->required();
  deg->add_option("--out", d.out, "Output dataset directory")->required();
  auto* treat = deg->add_option("--treatment", d.treatment, "Apply one treatment to every sample")
                    ->check(CLI::IsMember({"clean", "moderate", "heavy"}));
  deg->add_option("--mix", d.mix, "Clean,moderate,heavy weights summing to 1")->excludes(treat);
  deg->add_option("--seed", d.seed, "Master seed")->capture_default_str();
  deg->add_option("--config", d.config, "Toolkit config JSON (degrade ranges)");
  deg->add_option("--jobs", d.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  EvaluateArgs e;
  auto* ev = app.add_subcommand("evaluate", "Score predictions against a manifest");
  ev->add_option("--manifest", e.manifest)->required();
  ev->add_option("--predictions", e.predictions, "JSONL of {\"id\", \"text\"}")->required();
  ev->add_option("--label", e.label, "Model label (default: predictions file stem)");
  ev->add_option("--out", e.out, "Where to write report.json")->capture_default_str();
  ev->add_option("--format", e.format, "Table printed to stdout")
      ->check(CLI::IsMember({"markdown", "csv"}))->capture_default_str();
  ev->add_flag("--strip-markup", e.metric.strip_markup);
  ev->add_flag("--strip-tashkeel", e.metric.strip_tashkeel);
  ev->add_flag("--strip-tatweel", e.metric.strip_tatweel);
  ev->add_flag("--no-collapse-whitespace", e.no_collapse);
  ev->add_flag("--unify-alef", e.metric.unify_alef_hamza);
  ev->add_option("--cer-unit", e.cer_unit)->check(CLI::IsMember({"codepoint", "grapheme"}))
      ->capture_default_str();
  ev->add_option("--aggregate", e.aggregate)->check(CLI::IsMember({"macro", "micro"}))
      ->capture_default_str();
  ev->add_option("--reference", e.reference, "Manifest field scored against")
      ->check(CLI::IsMember({"plain", "markup"}))->capture_default_str();
  ev->add_option("--jobs", e.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  ReportArgs r;
  auto* rep = app.add_subcommand("report", "Merge report.json files into one comparison table");
  rep->add_option("inputs", r.inputs, "report.json files")->required();
  rep->add_option("--format", r.format)->check(CLI::IsMember({"markdown", "csv"}))
      ->capture_default_str();
  rep->add_flag("--by-font", r.by_font, "Metric x model grid over font groups");
  rep->add_option("--config", r.config, "Toolkit config JSON for font display names");
  rep->add_option("--out", r.out, "Write the table here instead of stdout");

  InspectArgs in;
  auto* ins = app.add_subcommand("inspect", "Print one record with profile conformance checks");
  ins->add_option("--manifest", in.manifest)->required();
  ins->add_option("--id", in.id)->required();
  ins->add_option("--config", in.config, "Toolkit config JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) return cmd_generate(g, out);
    if (deg->parsed()) return cmd_degrade(d, out);
    if (ev->parsed()) return cmd_evaluate(e, out);
    if (rep->parsed()) return cmd_report(r, out);
    if (ins->parsed()) return cmd_inspect(in, out, err);
  } catch (const ConfigError& ex) {
    err << "config error: " << ex.what() << '\n';
    return kExitConfig;
  } catch (const RenderError& ex) {
    err << "render error: " << ex.what() << '\n';
    return kExitRender;
  } catch (const IoError& ex) {
    err << "i/o error: " << ex.what() << '\n';
    return kExitIo;
  } catch (const DataError& ex) {
    err << "data error: " << ex.what() << '\n';
    return kExitData;
  } catch (const ReportConflictError& ex) {
    err << "conflicting reports: " << ex.what() << '\n';
    return kExitConflict;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << '\n';
    return kExitInternal;
  }
  return kExitConfig;
}

}  // namespace qforge
