#include "qforge/arabic_text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/uscript.h>

#include <array>
#include <stdexcept>

#include "qforge/error.hpp"

namespace qforge {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

struct TashkeelEntry {
  char32_t cp;
  TashkeelKind kind;
  std::string_view name;
};

constexpr std::array<TashkeelEntry, 9> kTashkeel{{
    {0x064B, TashkeelKind::Fathatan, "fathatan"},
    {0x064C, TashkeelKind::Dammatan, "dammatan"},
    {0x064D, TashkeelKind::Kasratan, "kasratan"},
    {0x064E, TashkeelKind::Fatha, "fatha"},
    {0x064F, TashkeelKind::Damma, "damma"},
    {0x0650, TashkeelKind::Kasra, "kasra"},
    {0x0651, TashkeelKind::Shadda, "shadda"},
    {0x0652, TashkeelKind::Sukun, "sukun"},
    {0x0670, TashkeelKind::SuperscriptAlef, "superscript_alef"},
}};

bool is_scalar(char32_t cp) {
  return cp <= 0x10FFFF && (cp < 0xD800 || cp > 0xDFFF);
}

// Decodes one sequence starting at `i`. Returns the scalar and advances `i`,
// or returns nullopt and leaves `i` pointing at the offending byte.
std::optional<char32_t> decode_one(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  std::size_t len;
  char32_t cp;
  char32_t min;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    return std::nullopt;
  }
  if (i + len > s.size()) return std::nullopt;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || !is_scalar(cp)) return std::nullopt;
  i += len;
  return cp;
}

// CR/CRLF -> LF, tab-like controls -> space, remaining controls dropped.
std::u32string clean_controls(std::u32string_view in) {
  std::u32string out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const char32_t c = in[i];
    if (c == U'\r') {
      out.push_back(U'\n');
      if (i + 1 < in.size() && in[i + 1] == U'\n') ++i;
    } else if (c == U'\n') {
      out.push_back(c);
    } else if (c == U'\t' || c == U'\v' || c == U'\f') {
      out.push_back(U' ');
    } else if (c < 0x20 || (c >= 0x7F && c <= 0x9F)) {
      continue;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::u32string to_nfc(std::u32string cps) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");

  icu::UnicodeString src = icu::UnicodeString::fromUTF32(
      reinterpret_cast<const UChar32*>(cps.data()), static_cast<int32_t>(cps.size()));
  if (nfc->quickCheck(src, status) == UNORM_YES && U_SUCCESS(status)) return cps;

  status = U_ZERO_ERROR;
  icu::UnicodeString dst = nfc->normalize(src, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");

  std::u32string out(static_cast<std::size_t>(dst.countChar32()), U'\0');
  status = U_ZERO_ERROR;
  dst.toUTF32(reinterpret_cast<UChar32*>(out.data()), static_cast<int32_t>(out.size()),
              status);
  if (U_FAILURE(status)) throw std::runtime_error("UTF-32 conversion failed");
  return out;
}

template <typename Pred>
ScriptText filter(const ScriptText& t, Pred drop) {
  std::u32string out;
  out.reserve(t.size());
  for (char32_t c : t.codepoints())
    if (!drop(c)) out.push_back(c);
  return ScriptText::from_codepoints(out);
}

}  // namespace

namespace utf8 {

std::u32string decode(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    auto cp = decode_one(bytes, i);
    if (!cp) throw DecodeError(i, "invalid UTF-8");
    out.push_back(*cp);
  }
  return out;
}

std::u32string decode_lenient(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    auto cp = decode_one(bytes, i);
    if (cp) {
      out.push_back(*cp);
    } else {
      out.push_back(kReplacement);
      ++i;
    }
  }
  return out;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size() * 2);
  for (char32_t c : cps) append(out, c);
  return out;
}

}  // namespace utf8

ScriptText ScriptText::normalize(std::string_view bytes) {
  return from_codepoints(utf8::decode(bytes));
}

ScriptText ScriptText::normalize_lenient(std::string_view bytes) {
  return from_codepoints(utf8::decode_lenient(bytes));
}

ScriptText ScriptText::from_codepoints(std::u32string_view cps) {
  return ScriptText(to_nfc(clean_controls(cps)));
}

std::string ScriptText::utf8() const { return utf8::encode(cps_); }

std::optional<TashkeelKind> tashkeel_kind(char32_t cp) {
  for (const auto& e : kTashkeel)
    if (e.cp == cp) return e.kind;
  return std::nullopt;
}

char32_t tashkeel_codepoint(TashkeelKind kind) {
  for (const auto& e : kTashkeel)
    if (e.kind == kind) return e.cp;
  throw std::invalid_argument("unknown tashkeel kind");
}

std::string_view to_string(TashkeelKind kind) {
  for (const auto& e : kTashkeel)
    if (e.kind == kind) return e.name;
  return "unknown";
}

std::string_view to_string(CharKind kind) {
  switch (kind) {
    case CharKind::ArabicLetter: return "arabic_letter";
    case CharKind::Tashkeel: return "tashkeel";
    case CharKind::Tatweel: return "tatweel";
    case CharKind::EasternDigit: return "eastern_digit";
    case CharKind::WesternDigit: return "western_digit";
    case CharKind::Punctuation: return "punctuation";
    case CharKind::Whitespace: return "whitespace";
    case CharKind::Other: return "other";
  }
  return "other";
}

bool is_whitespace(char32_t cp) {
  if (cp == U' ' || cp == U'\n') return true;
  if (cp < 0x80) return cp == U'\t' || cp == U'\v' || cp == U'\f' || cp == U'\r';
  return is_scalar(cp) && u_isUWhiteSpace(static_cast<UChar32>(cp));
}

CharClass classify(char32_t cp) {
  if (!is_scalar(cp)) return {CharKind::Other, std::nullopt};
  if (auto k = tashkeel_kind(cp)) return {CharKind::Tashkeel, k};
  if (cp == kTatweel) return {CharKind::Tatweel, std::nullopt};
  // Arabic-Indic (U+0660..) and Extended Arabic-Indic (U+06F0..) digits.
  if ((cp >= 0x0660 && cp <= 0x0669) || (cp >= 0x06F0 && cp <= 0x06F9))
    return {CharKind::EasternDigit, std::nullopt};
  if (cp >= U'0' && cp <= U'9') return {CharKind::WesternDigit, std::nullopt};
  if (is_whitespace(cp)) return {CharKind::Whitespace, std::nullopt};

  const auto c = static_cast<UChar32>(cp);
  UErrorCode status = U_ZERO_ERROR;
  if (u_isalpha(c) && uscript_getScript(c, &status) == USCRIPT_ARABIC && U_SUCCESS(status))
    return {CharKind::ArabicLetter, std::nullopt};
  if (u_ispunct(c)) return {CharKind::Punctuation, std::nullopt};
  return {CharKind::Other, std::nullopt};
}

ScriptText strip_tashkeel(const ScriptText& t) { return filter(t, is_tashkeel); }

ScriptText strip_tatweel(const ScriptText& t) {
  return filter(t, [](char32_t c) { return c == kTatweel; });
}

ScriptText unify_alef_hamza(const ScriptText& t) {
  std::u32string out = t.codepoints();
  for (char32_t& c : out)
    if (c == 0x0622 || c == 0x0623 || c == 0x0625 || c == 0x0671) c = 0x0627;
  return ScriptText::from_codepoints(out);
}

ScriptText collapse_whitespace(const ScriptText& t) {
  std::u32string out;
  out.reserve(t.size());
  bool pending = false;
  for (char32_t c : t.codepoints()) {
    if (is_whitespace(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(U' ');
    pending = false;
    out.push_back(c);
  }
  return ScriptText::from_codepoints(out);
}

TextStats stats(const ScriptText& t) {
  TextStats s;
  for (char32_t c : t.codepoints()) {
    const CharKind k = classify(c).kind;
    if (k == CharKind::ArabicLetter) ++s.letter_count;
    else if (k == CharKind::Tashkeel) ++s.tashkeel_count;
  }
  s.density = static_cast<double>(s.tashkeel_count) /
              static_cast<double>(s.letter_count == 0 ? 1 : s.letter_count);
  return s;
}

}  // namespace qforge
