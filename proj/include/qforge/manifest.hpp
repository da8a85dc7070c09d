#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qforge/arabic_text.hpp"
#include "qforge/degrade.hpp"

namespace qforge {

/// One manifest line. Records loaded from hand-made test sets may carry
/// only an id and a plain ground truth; everything else then keeps its
/// default.
struct SampleRecord {
  std::string id;
  std::string image_file;  // relative to the dataset directory
  ScriptText ground_truth_plain;
  std::optional<std::string> ground_truth_markup;
  std::string profile;
  std::vector<std::string> fonts_used;  // distinct, first-appearance order
  std::vector<int> sizes_used;          // distinct, first-appearance order
  Treatment treatment = Treatment::Clean;
  DegradeParams degrade_params;
  std::uint64_t seed = 0;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

nlohmann::ordered_json to_json(const DegradeParams& p);
DegradeParams degrade_params_from_json(const nlohmann::json& j);

/// Keys in the fixed manifest order.
nlohmann::ordered_json to_json(const SampleRecord& r);
/// Throws DataError on a missing id or ground truth, or a mistyped field.
SampleRecord record_from_json(const nlohmann::json& j);

/// One compact JSON object, no trailing newline.
std::string to_jsonl_line(const SampleRecord& r);

void write_manifest(std::ostream& out, const std::vector<SampleRecord>& records);

/// Writes to a sibling temp file and renames it into place, so a failed
/// run never leaves a truncated manifest behind. Throws IoError.
void write_manifest_file(const std::filesystem::path& path,
                         const std::vector<SampleRecord>& records);

/// Blank lines are skipped. Throws DataError naming the line for malformed
/// JSON, bad records or repeated ids.
std::vector<SampleRecord> read_manifest(std::istream& in);

/// Throws IoError if the file cannot be opened.
std::vector<SampleRecord> read_manifest_file(const std::filesystem::path& path);

}  // namespace qforge
