#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qforge/arabic_text.hpp"

namespace qforge {

inline constexpr int kMinSizePx = 14;
inline constexpr int kMaxSizePx = 100;

enum class BlockRole { Header, Body, Annotation, ListItem };

std::string_view to_string(BlockRole role);

struct RunStyle {
  std::string font_id;
  int size_px = kMinSizePx;

  friend bool operator==(const RunStyle&, const RunStyle&) = default;
};

/// A stretch of text. Generated documents always carry a style; parsed
/// model output may contain bare text, which has none.
struct Run {
  ScriptText text;
  std::optional<RunStyle> style;

  friend bool operator==(const Run&, const Run&) = default;
};

struct Block {
  BlockRole role = BlockRole::Body;
  int level = 0;  // 1 or 2 for headers (h1/h2), 0 otherwise
  std::vector<Run> runs;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Structured page. Consecutive ListItem blocks form one <ul>.
struct DocumentSpec {
  std::vector<Block> blocks;

  friend bool operator==(const DocumentSpec&, const DocumentSpec&) = default;
};

/// Throws ParseError (line/column of the offending token) on unknown tags,
/// unclosed or mismatched tags, illegal nesting, empty blocks, or
/// out-of-range attributes.
DocumentSpec parse_markup(std::string_view s);

/// Canonical form: lowercase tags, double-quoted attributes in the order
/// font-family, font-size, no whitespace between tags.
/// Throws std::invalid_argument if `doc` violates validate_document().
std::string serialize_markup(const DocumentSpec& doc);

/// Runs joined by one space, blocks by one newline.
ScriptText extract_plain_text(const DocumentSpec& doc);

/// Empty optional when the document is well formed, otherwise a reason.
/// Well formed: at least one block; every block has runs; run text is
/// non-empty, whitespace-collapsed, trimmed, free of '<' and '>'; sizes in
/// [14, 100]; font ids match [A-Za-z0-9_.-]+; no two bare runs adjacent;
/// header level is 1 or 2.
std::optional<std::string> validate_document(const DocumentSpec& doc);

bool is_valid_font_id(std::string_view id);

/// Makes arbitrary text usable as run text: drops '<' and '>', collapses
/// whitespace. May return empty text.
ScriptText sanitize_run_text(const ScriptText& t);

}  // namespace qforge
