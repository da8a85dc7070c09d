#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/stat.h>

#include <sstream>

#include "qforge/cli.hpp"
#include "qforge/manifest.hpp"
#include "qforge/raster.hpp"
#include "support.hpp"

using namespace qforge;
using qf_test::TempDir;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const char* name) { return (qf_test::corpora() / name).string(); }

std::string fixture(const char* name) { return (qf_test::fixtures() / "eval5" / name).string(); }

Result gen(const std::filesystem::path& out, const std::string& profile, int count, int seed) {
  return run({"generate", "--profile", profile, "--count", std::to_string(count), "--seed",
              std::to_string(seed), "--renderer", "mock", "--corpus", corpus("news_sample.txt"),
              "--corpus", corpus("classical_sample.txt"), "--out", out.string()});
}

}  // namespace

TEST_CASE("help and bad flags") {
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({}).code == kExitConfig);
  CHECK(run({"generate"}).code == kExitConfig);
  CHECK(run({"frobnicate"}).code == kExitConfig);
  CHECK(run({"evaluate", "--manifest", "m", "--predictions", "p", "--cer-unit", "byte"}).code ==
        kExitConfig);
}

TEST_CASE("generate, inspect, evaluate and report end to end") {
  TempDir dir("cli");
  const auto data = dir / "v03";
  const Result g = gen(data, "v0.3", 6, 7);
  REQUIRE(g.code == kExitOk);
  CHECK(std::filesystem::exists(data / "manifest.jsonl"));
  CHECK(std::filesystem::exists(data / "run_config.json"));
  const auto recs = read_manifest_file(data / "manifest.jsonl");
  CHECK(recs.size() == 6);

  const Result ins = run({"inspect", "--manifest", (data / "manifest.jsonl").string(), "--id", "000002"});
  CHECK(ins.code == kExitOk);
  CHECK(ins.out.find("\"id\": \"000002\"") != std::string::npos);
  CHECK(ins.out.find("markup ↔ plain consistency: PASS") != std::string::npos);
  CHECK(ins.out.find("FAIL") == std::string::npos);

  CHECK(run({"inspect", "--manifest", (data / "manifest.jsonl").string(), "--id", "nope"}).code ==
        kExitInspect);
  CHECK(run({"inspect", "--manifest", (dir / "missing.jsonl").string(), "--id", "x"}).code == kExitIo);

  // Perfect predictions.
  std::string preds;
  for (const auto& r : recs)
    preds += nlohmann::json{{"id", r.id}, {"text", r.ground_truth_plain.utf8()}}.dump() + "\n";
  qf_test::spit(dir / "perfect.jsonl", preds);
  const Result ev = run({"evaluate", "--manifest", (data / "manifest.jsonl").string(), "--predictions",
                         (dir / "perfect.jsonl").string(), "--out", (dir / "perfect.json").string()});
  REQUIRE(ev.code == kExitOk);
  CHECK(ev.out.find("| perfect | 0.000 | 0.000 | 1.000 |") != std::string::npos);
  const auto report = nlohmann::json::parse(qf_test::slurp(dir / "perfect.json"));
  CHECK(report.at("aggregate").at("macro_cer") == 0.0);
  CHECK(report.at("aggregate").at("corpus_bleu") == 1.0);
  CHECK(report.at("run_config").contains("dataset_run_config"));

  const Result rep = run({"report", (dir / "perfect.json").string(), "--by-font"});
  CHECK(rep.code == kExitOk);
  CHECK(rep.out.find("| Metric | Model | Amiri | Arial | Calibri | Sakkal Majalla | Scheherazade |") !=
        std::string::npos);
}

TEST_CASE("a tampered record fails inspection") {
  TempDir dir("tamper");
  REQUIRE(gen(dir / "d", "v0.3", 2, 1).code == kExitOk);
  auto recs = read_manifest_file(dir / "d" / "manifest.jsonl");
  recs[0].ground_truth_plain = ScriptText::normalize("نص مختلف");
  write_manifest_file(dir / "d" / "manifest.jsonl", recs);
  const Result r = run({"inspect", "--manifest", (dir / "d" / "manifest.jsonl").string(), "--id", recs[0].id});
  CHECK(r.code == kExitInspect);
  CHECK(r.out.find("markup ↔ plain consistency: FAIL") != std::string::npos);
}

TEST_CASE("v0.1 inspection checks tashkeel and fonts") {
  TempDir dir("v01");
  REQUIRE(gen(dir / "d", "v0.1", 3, 2).code == kExitOk);
  const Result r = run({"inspect", "--manifest", (dir / "d" / "manifest.jsonl").string(), "--id", "000000"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("tashkeel count 0 = 0: PASS") != std::string::npos);
}

TEST_CASE("generate errors") {
  TempDir dir("generr");
  CHECK(run({"generate", "--profile", "v9", "--corpus", corpus("news_sample.txt"), "--out",
             (dir / "a").string()})
            .code == kExitConfig);
  CHECK(run({"generate", "--profile", "v0.1", "--corpus", (dir / "none.txt").string(), "--out",
             (dir / "b").string()})
            .code == kExitIo);
  CHECK(run({"generate", "--profile", "v0.1", "--count", "2", "--mix", "0.5,0.5,0.5", "--corpus",
             corpus("news_sample.txt"), "--out", (dir / "c").string()})
            .code == kExitConfig);
  // External renderer without font files on disk.
  qf_test::spit(dir / "cfg.json", R"({"font_dir": "nofonts"})");
  const Result r = run({"generate", "--profile", "v0.1", "--count", "1", "--renderer", "external",
                        "--render-cmd", "true", "--config", (dir / "cfg.json").string(), "--corpus",
                        corpus("news_sample.txt"), "--out", (dir / "d").string()});
  CHECK(r.code == kExitRender);
  CHECK(r.err.find("not found") != std::string::npos);
}

TEST_CASE("external renderer subprocess") {
  TempDir dir("ext");
  // Font "files" only need to exist; the stub renderer ignores them.
  std::filesystem::create_directories(dir / "fonts");
  const char* files[] = {"Amiri-Regular.ttf", "arial.ttf", "calibri.ttf", "majalla.ttf",
                         "ScheherazadeNew-Regular.ttf"};
  for (const char* f : files) qf_test::spit(dir / "fonts" / f, "x");
  qf_test::spit(dir / "cfg.json", R"({"font_dir": "fonts"})");
  write_png(dir / "page.png", Raster(64, 48, 200));

  const auto script = dir / "render.sh";
  qf_test::spit(script, "#!/bin/sh\n"
                        "grep -q '<p>' \"$1\" || exit 3\n"
                        "grep -q '@font-face' \"$2\" || exit 4\n"
                        "cp '" + (dir / "page.png").string() + "' \"$3\"\n");
  ::chmod(script.c_str(), 0755);
  const Result ok = run({"generate", "--profile", "v0.1", "--count", "2", "--mix", "1,0,0", "--renderer",
                         "external", "--render-cmd", script.string(), "--config",
                         (dir / "cfg.json").string(), "--corpus", corpus("news_sample.txt"), "--out",
                         (dir / "out").string()});
  CHECK(ok.code == kExitOk);
  CHECK(read_png(dir / "out" / "images" / "000001.png") == Raster(64, 48, 200));

  const auto failing = dir / "fail.sh";
  qf_test::spit(failing, "#!/bin/sh\necho boom >&2\nexit 1\n");
  ::chmod(failing.c_str(), 0755);
  const Result bad = run({"generate", "--profile", "v0.1", "--count", "1", "--renderer", "external",
                          "--render-cmd", failing.string(), "--config", (dir / "cfg.json").string(),
                          "--corpus", corpus("news_sample.txt"), "--out", (dir / "out2").string()});
  CHECK(bad.code == kExitRender);
  CHECK(bad.err.find("boom") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(dir / "out2" / "manifest.jsonl"));
}

TEST_CASE("evaluate errors") {
  TempDir dir("everr");
  qf_test::spit(dir / "partial.jsonl", "{\"id\":\"a1\",\"text\":\"x\"}\n");
  CHECK(run({"evaluate", "--manifest", fixture("manifest.jsonl"), "--predictions",
             (dir / "partial.jsonl").string(), "--out", (dir / "r.json").string()})
            .code == kExitData);
  qf_test::spit(dir / "dup.jsonl", "{\"id\":\"a1\",\"text\":\"x\"}\n{\"id\":\"a1\",\"text\":\"x\"}\n");
  const Result dup = run({"evaluate", "--manifest", fixture("manifest.jsonl"), "--predictions",
                          (dir / "dup.jsonl").string(), "--out", (dir / "r.json").string()});
  CHECK(dup.code == kExitData);
  CHECK(dup.err.find("line 2") != std::string::npos);
  CHECK(run({"evaluate", "--manifest", (dir / "nope.jsonl").string(), "--predictions",
             fixture("predictions.jsonl"), "--out", (dir / "r.json").string()})
            .code == kExitIo);
}

TEST_CASE("evaluate the eval5 fixture and compare configs") {
  TempDir dir("ev5");
  const Result a = run({"evaluate", "--manifest", fixture("manifest.jsonl"), "--predictions",
                        fixture("predictions.jsonl"), "--label", "raw", "--out",
                        (dir / "raw.json").string()});
  REQUIRE(a.code == kExitOk);
  CHECK(a.out.find("| raw | 1.036 | 1.114 | 0.299 |") != std::string::npos);
  CHECK(a.err.find("empty") == std::string::npos);

  const Result b = run({"evaluate", "--manifest", fixture("manifest.jsonl"), "--predictions",
                        fixture("predictions.jsonl"), "--label", "stripped", "--strip-tashkeel",
                        "--format", "csv", "--out", (dir / "stripped.json").string()});
  REQUIRE(b.code == kExitOk);
  CHECK(b.out.find("stripped,0.954,0.914,0.382") != std::string::npos);

  const Result conflict = run({"report", (dir / "raw.json").string(), (dir / "stripped.json").string()});
  CHECK(conflict.code == kExitConflict);

  CHECK(run({"report", (dir / "raw.json").string(), "--out", (dir / "t.md").string()}).code == kExitOk);
  CHECK(qf_test::slurp(dir / "t.md").find("| Model | CER↓ | WER↓ | BLEU↑ |") != std::string::npos);
  qf_test::spit(dir / "junk.json", "{");
  CHECK(run({"report", (dir / "junk.json").string()}).code == kExitData);
  CHECK(run({"report", (dir / "absent.json").string()}).code == kExitIo);
}

TEST_CASE("degrade subcommand") {
  TempDir dir("degcli");
  REQUIRE(run({"generate", "--profile", "v0.1", "--count", "3", "--mix", "1,0,0", "--renderer", "mock",
               "--corpus", corpus("news_sample.txt"), "--out", (dir / "clean").string()})
              .code == kExitOk);
  const Result r = run({"degrade", "--in", (dir / "clean").string(), "--out", (dir / "heavy").string(),
                        "--treatment", "heavy", "--seed", "4"});
  CHECK(r.code == kExitOk);
  for (const auto& rec : read_manifest_file(dir / "heavy" / "manifest.jsonl"))
    CHECK(rec.treatment == Treatment::Heavy);
  CHECK(run({"degrade", "--in", (dir / "heavy").string(), "--out", (dir / "again").string(),
             "--treatment", "moderate"})
            .code == kExitConfig);
  CHECK(run({"degrade", "--in", (dir / "clean").string(), "--out", (dir / "x").string(), "--treatment",
             "heavy", "--mix", "1,0,0"})
            .code == kExitConfig);
}
