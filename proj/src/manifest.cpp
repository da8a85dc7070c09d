#include "qforge/manifest.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "qforge/error.hpp"

namespace qforge {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

template <typename T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw DataError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

ojson to_json(const DegradeParams& p) {
  ojson j;
  j["noise_sigma"] = p.noise_sigma;
  j["blur_sigma"] = p.blur_sigma;
  j["color_shift"] = p.color_shift;
  if (p.texture) {
    j["texture"] = ojson{{"cell_scale", p.texture->cell_scale}, {"contrast", p.texture->contrast}};
  } else {
    j["texture"] = nullptr;
  }
  return j;
}

DegradeParams degrade_params_from_json(const json& j) {
  if (!j.is_object()) throw DataError("degrade_params must be an object");
  DegradeParams p;
  p.noise_sigma = field<double>(j, "noise_sigma", 0.0);
  p.blur_sigma = field<double>(j, "blur_sigma", 0.0);
  p.color_shift = field<std::array<int, 3>>(j, "color_shift", {0, 0, 0});
  if (j.contains("texture") && !j.at("texture").is_null()) {
    const json& t = j.at("texture");
    if (!t.is_object()) throw DataError("degrade_params.texture must be an object or null");
    p.texture = TextureParams{field<int>(t, "cell_scale", 32), field<double>(t, "contrast", 0.0)};
  }
  return p;
}

ojson to_json(const SampleRecord& r) {
  ojson j;
  j["id"] = r.id;
  j["image_file"] = r.image_file;
  j["ground_truth_plain"] = r.ground_truth_plain.utf8();
  if (r.ground_truth_markup) {
    j["ground_truth_markup"] = *r.ground_truth_markup;
  } else {
    j["ground_truth_markup"] = nullptr;
  }
  j["profile"] = r.profile;
  j["fonts_used"] = r.fonts_used;
  j["sizes_used"] = r.sizes_used;
  j["treatment"] = std::string(to_string(r.treatment));
  j["degrade_params"] = to_json(r.degrade_params);
  j["seed"] = r.seed;
  return j;
}

SampleRecord record_from_json(const json& j) {
  if (!j.is_object()) throw DataError("record is not a JSON object");
  if (!j.contains("id") || !j.at("id").is_string()) throw DataError("missing string field 'id'");
  if (!j.contains("ground_truth_plain") || !j.at("ground_truth_plain").is_string())
    throw DataError("missing string field 'ground_truth_plain'");

  SampleRecord r;
  r.id = j.at("id").get<std::string>();
  try {
    r.ground_truth_plain = ScriptText::normalize(j.at("ground_truth_plain").get<std::string>());
  } catch (const DecodeError& e) {
    throw DataError(std::string("ground_truth_plain: ") + e.what());
  }
  r.image_file = field<std::string>(j, "image_file", "");
  if (j.contains("ground_truth_markup") && !j.at("ground_truth_markup").is_null())
    r.ground_truth_markup = field<std::string>(j, "ground_truth_markup", "");
  r.profile = field<std::string>(j, "profile", "");
  r.fonts_used = field<std::vector<std::string>>(j, "fonts_used", {});
  r.sizes_used = field<std::vector<int>>(j, "sizes_used", {});
  const auto treatment = field<std::string>(j, "treatment", "clean");
  const auto t = parse_treatment(treatment);
  if (!t) throw DataError("unknown treatment '" + treatment + "'");
  r.treatment = *t;
  if (j.contains("degrade_params") && !j.at("degrade_params").is_null())
    r.degrade_params = degrade_params_from_json(j.at("degrade_params"));
  r.seed = field<std::uint64_t>(j, "seed", 0);
  return r;
}

std::string to_jsonl_line(const SampleRecord& r) { return to_json(r).dump(); }

void write_manifest(std::ostream& out, const std::vector<SampleRecord>& records) {
  for (const auto& r : records) out << to_jsonl_line(r) << '\n';
}

void write_manifest_file(const std::filesystem::path& path,
                         const std::vector<SampleRecord>& records) {
  auto tmp = path;
  tmp += ".partial";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write " + tmp.string());
      write_manifest(out, records);
      out.flush();
      if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
  } catch (const std::filesystem::filesystem_error& e) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError(e.what());
  } catch (...) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw;
  }
}

std::vector<SampleRecord> read_manifest(std::istream& in) {
  std::vector<SampleRecord> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "manifest line " + std::to_string(lineno) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(where + "malformed JSON (" + e.what() + ")");
    }
    try {
      out.push_back(record_from_json(j));
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
    if (!seen.insert(out.back().id).second)
      throw DataError(where + "duplicate id '" + out.back().id + "'");
  }
  return out;
}

std::vector<SampleRecord> read_manifest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read manifest " + path.string());
  return read_manifest(in);
}

}  // namespace qforge
