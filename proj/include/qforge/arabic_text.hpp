#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace qforge {

/// NFC-normalized text held as Unicode scalar values.
///
/// The only way to obtain a ScriptText from arbitrary input is through
/// normalize(), so every instance satisfies: NFC, no CR, no control
/// characters other than LF.
class ScriptText {
 public:
  ScriptText() = default;

  /// Strict ingest: throws DecodeError on malformed UTF-8.
  static ScriptText normalize(std::string_view utf8);

  /// Total ingest: malformed sequences become U+FFFD. Used where inputs
  /// come from model output and must never abort a run.
  static ScriptText normalize_lenient(std::string_view utf8);

  /// Normalizes an already-decoded code point sequence.
  static ScriptText from_codepoints(std::u32string_view cps);

  const std::u32string& codepoints() const noexcept { return cps_; }
  std::size_t size() const noexcept { return cps_.size(); }
  bool empty() const noexcept { return cps_.empty(); }

  std::string utf8() const;

  friend bool operator==(const ScriptText&, const ScriptText&) = default;

 private:
  explicit ScriptText(std::u32string cps) : cps_(std::move(cps)) {}

  std::u32string cps_;
};

enum class TashkeelKind {
  Fathatan,
  Dammatan,
  Kasratan,
  Fatha,
  Damma,
  Kasra,
  Shadda,
  Sukun,
  SuperscriptAlef,
};

enum class CharKind {
  ArabicLetter,
  Tashkeel,
  Tatweel,
  EasternDigit,
  WesternDigit,
  Punctuation,
  Whitespace,
  Other,
};

struct CharClass {
  CharKind kind = CharKind::Other;
  std::optional<TashkeelKind> mark;  // set iff kind == Tashkeel

  friend bool operator==(const CharClass&, const CharClass&) = default;
};

struct TextStats {
  std::size_t letter_count = 0;
  std::size_t tashkeel_count = 0;
  double density = 0.0;  // tashkeel_count / max(letter_count, 1)
};

inline constexpr char32_t kTatweel = 0x0640;

/// Total over all 32-bit values; anything that is not a Unicode scalar
/// value classifies as Other.
CharClass classify(char32_t cp);

std::optional<TashkeelKind> tashkeel_kind(char32_t cp);
char32_t tashkeel_codepoint(TashkeelKind kind);
std::string_view to_string(TashkeelKind kind);
std::string_view to_string(CharKind kind);

inline bool is_tashkeel(char32_t cp) {
  return (cp >= 0x064B && cp <= 0x0652) || cp == 0x0670;
}

bool is_whitespace(char32_t cp);

ScriptText strip_tashkeel(const ScriptText& t);
ScriptText strip_tatweel(const ScriptText& t);

/// Folds the alef-hamza variants (U+0622, U+0623, U+0625, U+0671) to bare
/// alef. Only used as an explicit evaluation option.
ScriptText unify_alef_hamza(const ScriptText& t);

/// Runs of whitespace (including newlines) become one space; ends trimmed.
ScriptText collapse_whitespace(const ScriptText& t);

TextStats stats(const ScriptText& t);

namespace utf8 {

/// Strict decoder. Rejects overlong forms, surrogates and values past
/// U+10FFFF.
std::u32string decode(std::string_view bytes);
std::u32string decode_lenient(std::string_view bytes);
std::string encode(std::u32string_view cps);
void append(std::string& out, char32_t cp);

}  // namespace utf8

}  // namespace qforge
