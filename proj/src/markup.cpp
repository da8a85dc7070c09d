#include "qforge/markup.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

#include "qforge/error.hpp"

namespace qforge {

namespace {

struct Attr {
  std::string name;
  std::string value;
  std::size_t offset;
};

struct Tag {
  std::string name;
  bool closing = false;
  std::vector<Attr> attrs;
  std::size_t offset = 0;  // byte offset of '<'
};

bool is_block_tag(std::string_view n) {
  return n == "h1" || n == "h2" || n == "p" || n == "ul" || n == "li";
}

bool is_known_tag(std::string_view n) { return is_block_tag(n) || n == "span"; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_ascii_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  DocumentSpec run() {
    DocumentSpec doc;
    while (true) {
      const std::size_t text_start = pos_;
      std::string_view text = read_text();
      if (has_content(text)) fail(text_start + first_content(text), "text outside of a block");
      if (at_end()) break;
      Tag tag = read_tag();
      if (tag.closing) {
        fail(tag.offset, is_known_tag(tag.name) ? "unexpected closing tag </" + tag.name + ">"
                                                : "unknown tag </" + tag.name + ">");
      }
      if (tag.name == "h1" || tag.name == "h2" || tag.name == "p") {
        doc.blocks.push_back(parse_inline_block(tag));
      } else if (tag.name == "ul") {
        parse_list(tag, doc);
      } else if (tag.name == "span" || tag.name == "li") {
        fail(tag.offset, "illegal nesting: <" + tag.name + "> outside of a block");
      } else {
        fail(tag.offset, "unknown tag <" + tag.name + ">");
      }
    }
    if (doc.blocks.empty()) fail(pos_, "document has no blocks");
    return doc;
  }

 private:
  [[noreturn]] void fail(std::size_t offset, const std::string& what) const {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < s_.size(); ++i) {
      const auto b = static_cast<unsigned char>(s_[i]);
      if (b == '\n') {
        ++line;
        column = 1;
      } else if ((b & 0xC0) != 0x80) {
        ++column;
      }
    }
    throw ParseError(line, column, what);
  }

  bool at_end() const { return pos_ >= s_.size(); }

  static bool has_content(std::string_view t) {
    return std::any_of(t.begin(), t.end(), [](char c) { return !is_ascii_space(c); });
  }

  static std::size_t first_content(std::string_view t) {
    std::size_t i = 0;
    while (i < t.size() && is_ascii_space(t[i])) ++i;
    return i;
  }

  std::string_view read_text() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != '<') {
      if (s_[pos_] == '>') fail(pos_, "stray '>' in text");
      ++pos_;
    }
    return s_.substr(start, pos_ - start);
  }

  void skip_space() {
    while (pos_ < s_.size() && is_ascii_space(s_[pos_])) ++pos_;
  }

  std::string read_name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-'))
      ++pos_;
    return lower(s_.substr(start, pos_ - start));
  }

  Tag read_tag() {
    Tag tag;
    tag.offset = pos_;
    ++pos_;  // '<'
    if (pos_ < s_.size() && s_[pos_] == '/') {
      tag.closing = true;
      ++pos_;
    }
    tag.name = read_name();
    if (tag.name.empty()) fail(tag.offset, "malformed tag");
    while (true) {
      skip_space();
      if (at_end()) fail(tag.offset, "unterminated tag <" + tag.name + ">");
      if (s_[pos_] == '>') {
        ++pos_;
        break;
      }
      if (tag.closing) fail(pos_, "attributes on closing tag </" + tag.name + ">");
      Attr attr;
      attr.offset = pos_;
      attr.name = read_name();
      if (attr.name.empty()) fail(pos_, "malformed attribute in <" + tag.name + ">");
      skip_space();
      if (at_end() || s_[pos_] != '=') fail(pos_, "attribute '" + attr.name + "' needs a value");
      ++pos_;
      skip_space();
      if (at_end() || (s_[pos_] != '"' && s_[pos_] != '\'')) {
        fail(pos_, "attribute '" + attr.name + "' value must be quoted");
      }
      const char quote = s_[pos_++];
      const std::size_t vstart = pos_;
      while (pos_ < s_.size() && s_[pos_] != quote) ++pos_;
      if (at_end()) fail(attr.offset, "unterminated attribute value");
      attr.value = std::string(s_.substr(vstart, pos_ - vstart));
      ++pos_;
      for (const auto& a : tag.attrs)
        if (a.name == attr.name) fail(attr.offset, "duplicate attribute '" + attr.name + "'");
      tag.attrs.push_back(std::move(attr));
    }
    return tag;
  }

  ScriptText make_text(std::string_view raw, std::size_t offset) const {
    try {
      return collapse_whitespace(ScriptText::normalize(raw));
    } catch (const DecodeError& e) {
      fail(offset + e.offset(), "invalid UTF-8");
    }
  }

  int parse_size(const Attr& a) const {
    int v = 0;
    const char* first = a.value.data();
    const char* last = first + a.value.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (a.value.empty() || ec != std::errc() || p != last)
      fail(a.offset, "font-size must be an integer, got '" + a.value + "'");
    if (v < kMinSizePx || v > kMaxSizePx)
      fail(a.offset, "font-size " + a.value + " out of range [14, 100]");
    return v;
  }

  Run parse_span(const Tag& open) {
    RunStyle style;
    bool have_family = false, have_size = false;
    for (const auto& a : open.attrs) {
      if (a.name == "font-family") {
        if (!is_valid_font_id(a.value)) fail(a.offset, "invalid font-family '" + a.value + "'");
        style.font_id = a.value;
        have_family = true;
      } else if (a.name == "font-size") {
        style.size_px = parse_size(a);
        have_size = true;
      } else {
        fail(a.offset, "unknown attribute '" + a.name + "' on <span>");
      }
    }
    if (!have_family || !have_size)
      fail(open.offset, "<span> requires font-family and font-size");

    const std::size_t text_start = pos_;
    std::string_view raw = read_text();
    if (at_end()) fail(open.offset, "unclosed tag <span>");
    Tag next = read_tag();
    if (!next.closing) {
      fail(next.offset, is_known_tag(next.name) ? "illegal nesting: <" + next.name + "> inside <span>"
                                                : "unknown tag <" + next.name + ">");
    }
    if (next.name != "span") fail(next.offset, "mismatched closing tag </" + next.name + ">");
    Run run{make_text(raw, text_start), std::move(style)};
    if (run.text.empty()) fail(open.offset, "empty <span>");
    return run;
  }

  Block parse_inline_block(const Tag& open) {
    Block block;
    if (open.name == "h1" || open.name == "h2") {
      block.role = BlockRole::Header;
      block.level = open.name == "h1" ? 1 : 2;
    } else if (open.name == "li") {
      block.role = BlockRole::ListItem;
    } else {
      block.role = BlockRole::Body;
    }
    for (const auto& a : open.attrs) {
      if (open.name == "p" && a.name == "class") {
        if (a.value != "annotation") fail(a.offset, "unknown class '" + a.value + "'");
        block.role = BlockRole::Annotation;
      } else {
        fail(a.offset, "unknown attribute '" + a.name + "' on <" + open.name + ">");
      }
    }

    while (true) {
      const std::size_t text_start = pos_;
      std::string_view raw = read_text();
      if (has_content(raw)) {
        ScriptText text = make_text(raw, text_start);
        if (!text.empty()) block.runs.push_back(Run{std::move(text), std::nullopt});
      }
      if (at_end()) fail(open.offset, "unclosed tag <" + open.name + ">");
      Tag tag = read_tag();
      if (tag.closing) {
        if (tag.name != open.name) {
          fail(tag.offset, is_known_tag(tag.name)
                               ? "mismatched closing tag </" + tag.name + ">, expected </" +
                                     open.name + ">"
                               : "unknown tag </" + tag.name + ">");
        }
        break;
      }
      if (tag.name == "span") {
        block.runs.push_back(parse_span(tag));
      } else if (is_block_tag(tag.name)) {
        fail(tag.offset, "illegal nesting: <" + tag.name + "> inside <" + open.name + ">");
      } else {
        fail(tag.offset, "unknown tag <" + tag.name + ">");
      }
    }
    if (block.runs.empty()) fail(open.offset, "empty block <" + open.name + ">");
    return block;
  }

  void parse_list(const Tag& open, DocumentSpec& doc) {
    for (const auto& a : open.attrs) fail(a.offset, "unknown attribute '" + a.name + "' on <ul>");
    std::size_t items = 0;
    while (true) {
      const std::size_t text_start = pos_;
      std::string_view raw = read_text();
      if (has_content(raw)) fail(text_start + first_content(raw), "text directly inside <ul>");
      if (at_end()) fail(open.offset, "unclosed tag <ul>");
      Tag tag = read_tag();
      if (tag.closing) {
        if (tag.name != "ul") fail(tag.offset, "mismatched closing tag </" + tag.name + ">");
        break;
      }
      if (tag.name == "li") {
        doc.blocks.push_back(parse_inline_block(tag));
        ++items;
      } else if (is_known_tag(tag.name)) {
        fail(tag.offset, "illegal nesting: <" + tag.name + "> inside <ul>");
      } else {
        fail(tag.offset, "unknown tag <" + tag.name + ">");
      }
    }
    if (items == 0) fail(open.offset, "empty list <ul>");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

void append_run(std::string& out, const Run& run) {
  if (run.style) {
    out += "<span font-family=\"";
    out += run.style->font_id;
    out += "\" font-size=\"";
    out += std::to_string(run.style->size_px);
    out += "\">";
    out += run.text.utf8();
    out += "</span>";
  } else {
    out += run.text.utf8();
  }
}

}  // namespace

std::string_view to_string(BlockRole role) {
  switch (role) {
    case BlockRole::Header: return "header";
    case BlockRole::Body: return "body";
    case BlockRole::Annotation: return "annotation";
    case BlockRole::ListItem: return "list_item";
  }
  return "body";
}

bool is_valid_font_id(std::string_view id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

ScriptText sanitize_run_text(const ScriptText& t) {
  std::u32string cps;
  cps.reserve(t.size());
  for (char32_t c : t.codepoints())
    if (c != U'<' && c != U'>') cps.push_back(c);
  return collapse_whitespace(ScriptText::from_codepoints(cps));
}

std::optional<std::string> validate_document(const DocumentSpec& doc) {
  if (doc.blocks.empty()) return "document has no blocks";
  for (std::size_t b = 0; b < doc.blocks.size(); ++b) {
    const Block& block = doc.blocks[b];
    const std::string where = "block " + std::to_string(b);
    if (block.runs.empty()) return where + " has no runs";
    if (block.role == BlockRole::Header && block.level != 1 && block.level != 2)
      return where + ": header level must be 1 or 2";
    if (block.role != BlockRole::Header && block.level != 0)
      return where + ": level is only meaningful for headers";
    for (std::size_t r = 0; r < block.runs.size(); ++r) {
      const Run& run = block.runs[r];
      const std::string rwhere = where + " run " + std::to_string(r);
      if (run.text.empty()) return rwhere + " has empty text";
      if (!(collapse_whitespace(run.text) == run.text))
        return rwhere + " text is not whitespace-collapsed";
      for (char32_t c : run.text.codepoints())
        if (c == U'<' || c == U'>') return rwhere + " text contains '<' or '>'";
      if (run.style) {
        if (!is_valid_font_id(run.style->font_id)) return rwhere + " has an invalid font id";
        if (run.style->size_px < kMinSizePx || run.style->size_px > kMaxSizePx)
          return rwhere + " size out of range [14, 100]";
      } else if (r > 0 && !block.runs[r - 1].style) {
        return rwhere + " is a bare run adjacent to another bare run";
      }
    }
  }
  return std::nullopt;
}

DocumentSpec parse_markup(std::string_view s) { return Parser(s).run(); }

std::string serialize_markup(const DocumentSpec& doc) {
  if (auto err = validate_document(doc)) throw std::invalid_argument(*err);
  std::string out;
  const auto& blocks = doc.blocks;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& block = blocks[i];
    const char* tag = "p";
    switch (block.role) {
      case BlockRole::Header:
        tag = block.level == 1 ? "h1" : "h2";
        out += block.level == 1 ? "<h1>" : "<h2>";
        break;
      case BlockRole::Body: out += "<p>"; break;
      case BlockRole::Annotation: out += "<p class=\"annotation\">"; break;
      case BlockRole::ListItem:
        tag = "li";
        if (i == 0 || blocks[i - 1].role != BlockRole::ListItem) out += "<ul>";
        out += "<li>";
        break;
    }
    for (const Run& run : block.runs) append_run(out, run);
    out += "</";
    out += tag;
    out += '>';
    if (block.role == BlockRole::ListItem &&
        (i + 1 == blocks.size() || blocks[i + 1].role != BlockRole::ListItem))
      out += "</ul>";
  }
  return out;
}

ScriptText extract_plain_text(const DocumentSpec& doc) {
  std::u32string out;
  for (std::size_t b = 0; b < doc.blocks.size(); ++b) {
    if (b > 0) out.push_back(U'\n');
    const auto& runs = doc.blocks[b].runs;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      if (r > 0) out.push_back(U' ');
      out += runs[r].text.codepoints();
    }
  }
  return ScriptText::from_codepoints(out);
}

}  // namespace qforge
