#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qforge/degrade.hpp"

namespace qforge {

struct UniformMin {
  int px = 14;
  friend bool operator==(const UniformMin&, const UniformMin&) = default;
};

struct UniformSampled {
  int min_px = 14;
  int max_px = 100;
  friend bool operator==(const UniformSampled&, const UniformSampled&) = default;
};

/// Structured page (header, body, optional annotation) with sizes drawn
/// from disjoint thirds of [min_px, max_px].
struct MultiSizePerPage {
  int min_px = 14;
  int max_px = 100;
  friend bool operator==(const MultiSizePerPage&, const MultiSizePerPage&) = default;
};

using SizePolicy = std::variant<UniformMin, UniformSampled, MultiSizePerPage>;

/// Inclusive size band.
struct SizeBand {
  int lo;
  int hi;
};

/// Lower, middle and upper thirds of [min_px, max_px]; pairwise disjoint
/// when max_px - min_px >= 2.
std::array<SizeBand, 3> size_bands(int min_px, int max_px);

/// A dataset recipe.
struct VersionProfile {
  std::string name;
  std::vector<std::string> fonts;
  SizePolicy size_policy = UniformMin{};
  bool strip_diacritics = false;    // ground truth has tashkeel removed
  bool require_diacritics = false;  // only paragraphs with density >= min_density
  double min_density = 0.0;
  bool markup_ground_truth = false;
  std::size_t default_count = 1;

  bool structured_layout() const {
    return std::holds_alternative<MultiSizePerPage>(size_policy);
  }
};

struct FontEntry {
  std::string family_name;
  std::filesystem::path file_path;  // relative paths resolve against font_dir
};

class FontRegistry {
 public:
  FontRegistry() = default;
  FontRegistry(std::map<std::string, FontEntry> entries, std::filesystem::path font_dir)
      : entries_(std::move(entries)), font_dir_(std::move(font_dir)) {}

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  bool contains(const std::string& id) const { return entries_.count(id) != 0; }
  const FontEntry& at(const std::string& id) const;
  const std::map<std::string, FontEntry>& entries() const { return entries_; }
  const std::filesystem::path& font_dir() const { return font_dir_; }

  /// Absolute font file path; does not check existence.
  std::filesystem::path resolve_file(const std::string& id) const;

 private:
  std::map<std::string, FontEntry> entries_;
  std::filesystem::path font_dir_;
};

/// Everything the declarative config file carries.
struct ToolkitConfig {
  FontRegistry registry;
  std::vector<VersionProfile> profiles;
  TreatmentRanges ranges;

  /// Throws ConfigError for unknown names.
  const VersionProfile& profile(const std::string& name) const;
};

/// Throws ConfigError naming the violated constraint.
void validate_profile(const VersionProfile& p, const FontRegistry& registry);

/// Font root when the config does not set one: $QARI_FORGE_FONT_DIR, else
/// "./fonts".
std::filesystem::path default_font_dir();

/// Built-in registry (12 slots, five named) and the three dataset profiles.
ToolkitConfig default_config();

/// Reads a JSON config; relative font_dir resolves against the config's
/// directory. Throws ConfigError or IoError.
ToolkitConfig load_config(const std::filesystem::path& path);

ToolkitConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
nlohmann::ordered_json to_json(const ToolkitConfig& cfg, bool include_font_dir = true);
nlohmann::ordered_json to_json(const VersionProfile& p);

}  // namespace qforge
