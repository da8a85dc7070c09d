#include "qforge/profile.hpp"

#include <cstdlib>
#include <fstream>

#include "qforge/error.hpp"
#include "qforge/markup.hpp"

namespace qforge {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

const std::vector<std::string> kSardFonts{"amiri", "arial", "calibri", "sakkal_majalla",
                                          "scheherazade"};

std::string custom_slot(int n) {
  std::string id = "custom_";
  if (n < 10) id += '0';
  return id + std::to_string(n);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <typename T>
T require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": key '" + key + "': " + e.what());
  }
}

Interval interval_or(const json& j, const char* key, Interval fallback) {
  if (!j.contains(key)) return fallback;
  const auto v = get_or<std::vector<double>>(j, key, {});
  if (v.size() != 2) throw ConfigError(std::string("degrade range '") + key + "' needs [lo, hi]");
  if (!(v[0] >= 0.0 && v[0] <= v[1]))
    throw ConfigError(std::string("degrade range '") + key + "' must satisfy 0 <= lo <= hi");
  return {v[0], v[1]};
}

SizePolicy size_policy_from_json(const json& j, const std::string& where) {
  const auto kind = require<std::string>(j, "kind", where);
  if (kind == "uniform_min") return UniformMin{require<int>(j, "px", where)};
  if (kind == "uniform_sampled")
    return UniformSampled{require<int>(j, "min_px", where), require<int>(j, "max_px", where)};
  if (kind == "multi_size_per_page")
    return MultiSizePerPage{require<int>(j, "min_px", where), require<int>(j, "max_px", where)};
  throw ConfigError(where + ": unknown size_policy kind '" + kind + "'");
}

ojson size_policy_to_json(const SizePolicy& p) {
  ojson j;
  if (const auto* u = std::get_if<UniformMin>(&p)) {
    j["kind"] = "uniform_min";
    j["px"] = u->px;
  } else if (const auto* s = std::get_if<UniformSampled>(&p)) {
    j["kind"] = "uniform_sampled";
    j["min_px"] = s->min_px;
    j["max_px"] = s->max_px;
  } else {
    const auto& m = std::get<MultiSizePerPage>(p);
    j["kind"] = "multi_size_per_page";
    j["min_px"] = m.min_px;
    j["max_px"] = m.max_px;
  }
  return j;
}

void check_bounds(int lo, int hi, const std::string& where) {
  if (lo < kMinSizePx || hi > kMaxSizePx || lo > hi)
    throw ConfigError(where + ": size bounds must satisfy 14 <= min <= max <= 100");
}

void validate_ranges(const TreatmentRanges& r) {
  if (r.moderate_shift < 0 || r.moderate_shift > kMaxColorShift)
    throw ConfigError("degrade.moderate.color_shift must be in [0, 32]");
  if (r.heavy_contrast.hi > 1.0) throw ConfigError("degrade.heavy.contrast must be within [0, 1]");
  if (r.heavy_cell_scale.lo < 1) throw ConfigError("degrade.heavy.cell_scale must be >= 1");
}

}  // namespace

std::array<SizeBand, 3> size_bands(int min_px, int max_px) {
  const int third = (max_px - min_px) / 3;
  return {{{min_px, min_px + third},
           {min_px + third + 1, max_px - third - 1},
           {max_px - third, max_px}}};
}

const FontEntry& FontRegistry::at(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw ConfigError("font '" + id + "' is not in the registry");
  return it->second;
}

std::filesystem::path FontRegistry::resolve_file(const std::string& id) const {
  const FontEntry& e = at(id);
  if (e.file_path.is_absolute()) return e.file_path;
  return std::filesystem::absolute(font_dir_ / e.file_path);
}

const VersionProfile& ToolkitConfig::profile(const std::string& name) const {
  for (const auto& p : profiles)
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : profiles) known += (known.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown profile '" + name + "' (known: " + known + ")");
}

void validate_profile(const VersionProfile& p, const FontRegistry& registry) {
  const std::string where = "profile '" + p.name + "'";
  if (p.name.empty()) throw ConfigError("profile with empty name");
  if (p.fonts.empty()) throw ConfigError(where + ": font list is empty");
  for (const auto& f : p.fonts) {
    if (!is_valid_font_id(f)) throw ConfigError(where + ": invalid font id '" + f + "'");
    if (!registry.contains(f)) throw ConfigError(where + ": font '" + f + "' not in registry");
  }
  std::visit(
      [&](const auto& policy) {
        using T = std::decay_t<decltype(policy)>;
        if constexpr (std::is_same_v<T, UniformMin>) {
          check_bounds(policy.px, policy.px, where);
        } else {
          check_bounds(policy.min_px, policy.max_px, where);
          if constexpr (std::is_same_v<T, MultiSizePerPage>) {
            if (policy.max_px - policy.min_px < 2)
              throw ConfigError(where + ": multi-size pages need max_px - min_px >= 2");
          }
        }
      },
      p.size_policy);
  if (p.require_diacritics && !(p.min_density >= 0.0 && p.min_density <= 1.0))
    throw ConfigError(where + ": min_density must be in [0, 1]");
  if (p.require_diacritics && p.strip_diacritics)
    throw ConfigError(where + ": require_diacritics and strip_diacritics are exclusive");
  if (p.default_count < 1) throw ConfigError(where + ": default_count must be >= 1");
}

std::filesystem::path default_font_dir() {
  if (const char* env = std::getenv("QARI_FORGE_FONT_DIR"); env && *env) return env;
  return "fonts";
}

ToolkitConfig default_config() {
  std::map<std::string, FontEntry> fonts{
      {"amiri", {"Amiri", "Amiri-Regular.ttf"}},
      {"arial", {"Arial", "arial.ttf"}},
      {"calibri", {"Calibri", "calibri.ttf"}},
      {"sakkal_majalla", {"Sakkal Majalla", "majalla.ttf"}},
      {"scheherazade", {"Scheherazade", "ScheherazadeNew-Regular.ttf"}},
  };
  for (int n = 6; n <= 12; ++n) {
    const std::string id = custom_slot(n);
    fonts[id] = {"Custom " + id.substr(7), id + ".ttf"};
  }

  ToolkitConfig cfg;
  cfg.registry = FontRegistry(std::move(fonts), default_font_dir());

  VersionProfile v01;
  v01.name = "v0.1";
  v01.fonts = kSardFonts;
  v01.size_policy = UniformMin{kMinSizePx};
  v01.strip_diacritics = true;
  v01.default_count = 5000;

  VersionProfile v02;
  v02.name = "v0.2";
  v02.fonts = kSardFonts;
  for (int n = 6; n <= 10; ++n) v02.fonts.push_back(custom_slot(n));
  v02.size_policy = UniformSampled{kMinSizePx, kMaxSizePx};
  v02.require_diacritics = true;
  v02.min_density = 0.2;
  v02.default_count = 50000;

  VersionProfile v03;
  v03.name = "v0.3";
  v03.fonts = kSardFonts;
  for (int n = 6; n <= 12; ++n) v03.fonts.push_back(custom_slot(n));
  v03.size_policy = MultiSizePerPage{kMinSizePx, kMaxSizePx};
  v03.markup_ground_truth = true;
  v03.default_count = 10000;

  cfg.profiles = {v01, v02, v03};
  return cfg;
}

ToolkitConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  // Sections left out fall back to the built-in defaults.
  ToolkitConfig cfg = default_config();

  std::filesystem::path font_dir = default_font_dir();
  if (j.contains("font_dir")) {
    font_dir = get_or<std::string>(j, "font_dir", "");
    if (font_dir.is_relative()) font_dir = base_dir / font_dir;
  }
  std::map<std::string, FontEntry> fonts = cfg.registry.entries();
  if (j.contains("fonts")) fonts.clear();
  for (const auto& f : get_or<json>(j, "fonts", json::array())) {
    const auto id = require<std::string>(f, "id", "font entry");
    if (!is_valid_font_id(id)) throw ConfigError("invalid font id '" + id + "'");
    if (fonts.count(id)) throw ConfigError("duplicate font id '" + id + "'");
    fonts[id] = {get_or<std::string>(f, "family", id),
                 require<std::string>(f, "file", "font '" + id + "'")};
  }
  cfg.registry = FontRegistry(std::move(fonts), font_dir);

  if (j.contains("profiles")) cfg.profiles.clear();
  for (const auto& pj : get_or<json>(j, "profiles", json::array())) {
    VersionProfile p;
    p.name = require<std::string>(pj, "name", "profile");
    const std::string where = "profile '" + p.name + "'";
    p.fonts = require<std::vector<std::string>>(pj, "fonts", where);
    p.size_policy = size_policy_from_json(require<json>(pj, "size_policy", where), where);
    p.strip_diacritics = get_or<bool>(pj, "strip_diacritics", false);
    p.require_diacritics = get_or<bool>(pj, "require_diacritics", false);
    p.min_density = get_or<double>(pj, "min_density", 0.0);
    p.markup_ground_truth = get_or<bool>(pj, "markup_ground_truth", false);
    p.default_count = get_or<std::size_t>(pj, "default_count", 1);
    for (const auto& q : cfg.profiles)
      if (q.name == p.name) throw ConfigError("duplicate profile '" + p.name + "'");
    cfg.profiles.push_back(std::move(p));
  }
  for (const auto& p : cfg.profiles) validate_profile(p, cfg.registry);

  const json degrade = get_or<json>(j, "degrade", json::object());
  const json mod = get_or<json>(degrade, "moderate", json::object());
  const json heavy = get_or<json>(degrade, "heavy", json::object());
  TreatmentRanges& r = cfg.ranges;
  r.moderate_noise = interval_or(mod, "noise_sigma", r.moderate_noise);
  r.moderate_blur = interval_or(mod, "blur_sigma", r.moderate_blur);
  r.moderate_shift = get_or<int>(mod, "color_shift", r.moderate_shift);
  r.heavy_cell_scale = interval_or(heavy, "cell_scale", r.heavy_cell_scale);
  r.heavy_contrast = interval_or(heavy, "contrast", r.heavy_contrast);
  r.heavy_blur = interval_or(heavy, "blur_sigma", r.heavy_blur);
  r.heavy_noise = interval_or(heavy, "noise_sigma", r.heavy_noise);
  validate_ranges(r);
  return cfg;
}

ToolkitConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

ojson to_json(const VersionProfile& p) {
  ojson j;
  j["name"] = p.name;
  j["fonts"] = p.fonts;
  j["size_policy"] = size_policy_to_json(p.size_policy);
  j["strip_diacritics"] = p.strip_diacritics;
  j["require_diacritics"] = p.require_diacritics;
  j["min_density"] = p.min_density;
  j["markup_ground_truth"] = p.markup_ground_truth;
  j["default_count"] = p.default_count;
  return j;
}

ojson to_json(const ToolkitConfig& cfg, bool include_font_dir) {
  ojson j;
  if (include_font_dir) j["font_dir"] = cfg.registry.font_dir().string();
  j["fonts"] = ojson::array();
  for (const auto& [id, e] : cfg.registry.entries())
    j["fonts"].push_back({{"id", id}, {"family", e.family_name}, {"file", e.file_path.string()}});
  j["profiles"] = ojson::array();
  for (const auto& p : cfg.profiles) j["profiles"].push_back(to_json(p));
  const TreatmentRanges& r = cfg.ranges;
  ojson mod, heavy;
  mod["noise_sigma"] = {r.moderate_noise.lo, r.moderate_noise.hi};
  mod["blur_sigma"] = {r.moderate_blur.lo, r.moderate_blur.hi};
  mod["color_shift"] = r.moderate_shift;
  heavy["cell_scale"] = {r.heavy_cell_scale.lo, r.heavy_cell_scale.hi};
  heavy["contrast"] = {r.heavy_contrast.lo, r.heavy_contrast.hi};
  heavy["blur_sigma"] = {r.heavy_blur.lo, r.heavy_blur.hi};
  heavy["noise_sigma"] = {r.heavy_noise.lo, r.heavy_noise.hi};
  j["degrade"] = {{"moderate", mod}, {"heavy", heavy}};
  return j;
}

}  // namespace qforge
