// Copyright 2026 The imgseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// A small tolerant HTML reader. The tokenizer follows the shape of the HTML
// tokenizer (tags, attributes, comments, raw text elements, character
// references); tree construction keeps only the error-recovery rules that
// matter for block structure: void elements, implied end tags for p, li,
// dd/dt, table parts and options, and the "special element" barrier for
// unmatched end tags.

#include "imgseg/html_ingest.h"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "imgseg/errors.h"

namespace imgseg {

void IngestOptions::Validate() const {
  if (min_text_chars < 1) {
    throw ContractError("min_text_chars must be at least 1");
  }
  if (strip_tags.count("img") || strip_tags.count("body")) {
    throw ContractError("strip_tags may not contain img or body");
  }
}

namespace {

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = ascii_lower(c);
  return out;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

bool is_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    cp = 0xFFFD;
  }
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

// ---------------------------------------------------------------------------
// Character decoding.

// windows-1252 code points for bytes 0x80..0x9F; 0 marks undefined bytes.
constexpr std::array<std::uint16_t, 32> kCp1252High = {
    0x20AC, 0,      0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0,      0x017D, 0,
    0,      0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0,      0x017E, 0x0178};

std::optional<std::string> sniff_charset(std::string_view bytes) {
  const std::string head = lowercase(bytes.substr(0, 4096));
  std::size_t pos = 0;
  while ((pos = head.find("<meta", pos)) != std::string::npos) {
    const std::size_t end = head.find('>', pos);
    const std::string_view tag = std::string_view(head).substr(
        pos, end == std::string::npos ? std::string::npos : end - pos);
    const std::size_t cs = tag.find("charset");
    if (cs != std::string_view::npos) {
      std::size_t i = cs + 7;
      while (i < tag.size() && (is_space(tag[i]) || tag[i] == '=' ||
                                tag[i] == '"' || tag[i] == '\'')) {
        ++i;
      }
      std::size_t j = i;
      while (j < tag.size() && !is_space(tag[j]) && tag[j] != '"' &&
             tag[j] != '\'' && tag[j] != ';' && tag[j] != '/') {
        ++j;
      }
      if (j > i) return std::string(tag.substr(i, j - i));
    }
    pos += 5;
  }
  return std::nullopt;
}

bool is_latin1_family(const std::string& charset) {
  static const std::unordered_set<std::string> kNames = {
      "iso-8859-1", "iso8859-1", "latin1",  "latin-1", "l1",
      "windows-1252", "cp1252", "x-cp1252", "iso_8859-1"};
  return kNames.count(charset) > 0;
}

std::string decode_latin1(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size() + bytes.size() / 4);
  for (char ch : bytes) {
    const auto b = static_cast<unsigned char>(ch);
    if (b >= 0x80 && b < 0xA0) {
      const std::uint16_t cp = kCp1252High[b - 0x80];
      append_utf8(out, cp ? cp : b);
    } else {
      append_utf8(out, b);
    }
  }
  return out;
}

std::string repair_utf8(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  auto byte = [&](std::size_t k) { return static_cast<unsigned char>(bytes[k]); };
  while (i < n) {
    const unsigned char b = byte(i);
    int len = 0;
    std::uint32_t cp = 0;
    std::uint32_t min_cp = 0;
    if (b < 0x80) {
      out.push_back(static_cast<char>(b));
      ++i;
      continue;
    } else if ((b & 0xE0) == 0xC0) {
      len = 2, cp = b & 0x1F, min_cp = 0x80;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3, cp = b & 0x0F, min_cp = 0x800;
    } else if ((b & 0xF8) == 0xF0) {
      len = 4, cp = b & 0x07, min_cp = 0x10000;
    }
    bool ok = len > 0 && i + len <= n;
    for (int k = 1; ok && k < len; ++k) {
      if ((byte(i + k) & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (byte(i + k) & 0x3F);
      }
    }
    if (ok && cp >= min_cp && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF)) {
      out.append(bytes.substr(i, len));
      i += len;
    } else {
      append_utf8(out, 0xFFFD);
      ++i;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Character references.

const std::unordered_map<std::string_view, std::uint32_t>& named_entities() {
  static const std::unordered_map<std::string_view, std::uint32_t> kTable = {
      {"amp", '&'},       {"lt", '<'},        {"gt", '>'},
      {"quot", '"'},      {"apos", '\''},     {"nbsp", 0xA0},
      {"copy", 0xA9},     {"reg", 0xAE},      {"trade", 0x2122},
      {"hellip", 0x2026}, {"mdash", 0x2014},  {"ndash", 0x2013},
      {"lsquo", 0x2018},  {"rsquo", 0x2019},  {"ldquo", 0x201C},
      {"rdquo", 0x201D},  {"sbquo", 0x201A},  {"bdquo", 0x201E},
      {"laquo", 0xAB},    {"raquo", 0xBB},    {"bull", 0x2022},
      {"middot", 0xB7},   {"deg", 0xB0},      {"euro", 0x20AC},
      {"pound", 0xA3},    {"yen", 0xA5},      {"cent", 0xA2},
      {"sect", 0xA7},     {"para", 0xB6},     {"times", 0xD7},
      {"divide", 0xF7},   {"plusmn", 0xB1},   {"frac12", 0xBD},
      {"frac14", 0xBC},   {"frac34", 0xBE},   {"iexcl", 0xA1},
      {"iquest", 0xBF},   {"shy", 0xAD},      {"ensp", 0x2002},
      {"emsp", 0x2003},   {"thinsp", 0x2009}, {"zwnj", 0x200C},
      {"zwj", 0x200D},    {"larr", 0x2190},   {"rarr", 0x2192},
      {"uarr", 0x2191},   {"darr", 0x2193},   {"hearts", 0x2665},
      {"agrave", 0xE0},   {"aacute", 0xE1},   {"acirc", 0xE2},
      {"atilde", 0xE3},   {"auml", 0xE4},     {"aring", 0xE5},
      {"aelig", 0xE6},    {"ccedil", 0xE7},   {"egrave", 0xE8},
      {"eacute", 0xE9},   {"ecirc", 0xEA},    {"euml", 0xEB},
      {"igrave", 0xEC},   {"iacute", 0xED},   {"icirc", 0xEE},
      {"iuml", 0xEF},     {"ntilde", 0xF1},   {"ograve", 0xF2},
      {"oacute", 0xF3},   {"ocirc", 0xF4},    {"otilde", 0xF5},
      {"ouml", 0xF6},     {"oslash", 0xF8},   {"ugrave", 0xF9},
      {"uacute", 0xFA},   {"ucirc", 0xFB},    {"uuml", 0xFC},
      {"yacute", 0xFD},   {"szlig", 0xDF},    {"Agrave", 0xC0},
      {"Aacute", 0xC1},   {"Auml", 0xC4},     {"Eacute", 0xC9},
      {"Ntilde", 0xD1},   {"Ouml", 0xD6},     {"Uuml", 0xDC},
  };
  return kTable;
}

// Names recognized without a trailing semicolon.
bool is_legacy_entity(std::string_view name) {
  return name == "amp" || name == "lt" || name == "gt" || name == "quot" ||
         name == "nbsp" || name == "copy" || name == "reg";
}

std::string decode_entities(std::string_view s) {
  if (s.find('&') == std::string_view::npos) return std::string(s);
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    std::size_t j = i + 1;
    if (j < s.size() && s[j] == '#') {
      ++j;
      const bool hex = j < s.size() && (s[j] == 'x' || s[j] == 'X');
      if (hex) ++j;
      const std::size_t digits_begin = j;
      std::uint32_t cp = 0;
      while (j < s.size() && j - digits_begin < 8) {
        const char c = s[j];
        int d = -1;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
        if (d < 0) break;
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
        ++j;
      }
      if (j == digits_begin) {
        out.push_back(s[i++]);
        continue;
      }
      if (j < s.size() && s[j] == ';') ++j;
      if (cp >= 0x80 && cp < 0xA0 && kCp1252High[cp - 0x80] != 0) {
        cp = kCp1252High[cp - 0x80];
      }
      append_utf8(out, cp);
      i = j;
      continue;
    }
    while (j < s.size() && j - i <= 10 &&
           (is_alpha(s[j]) || (s[j] >= '0' && s[j] <= '9'))) {
      ++j;
    }
    const std::string_view name = s.substr(i + 1, j - i - 1);
    const auto& table = named_entities();
    auto it = table.find(name);
    if (it != table.end() &&
        ((j < s.size() && s[j] == ';') || is_legacy_entity(name))) {
      append_utf8(out, it->second);
      i = (j < s.size() && s[j] == ';') ? j + 1 : j;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tokenizer.

enum class TokenType { kStartTag, kEndTag, kText };

struct Token {
  TokenType type = TokenType::kText;
  std::string name;  // Lowercase tag name.
  Attributes attributes;
  std::string text;  // Decoded character data.
};

bool is_raw_text(std::string_view tag) {
  return tag == "script" || tag == "style" || tag == "xmp" ||
         tag == "iframe" || tag == "noembed" || tag == "noframes" ||
         tag == "noscript";
}

bool is_rcdata(std::string_view tag) {
  return tag == "title" || tag == "textarea";
}

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view input) : in_(input) {}

  // Returns false at end of input.
  bool Next(Token& token) {
    if (!raw_end_tag_.empty()) return ReadRawText(token);
    while (pos_ < in_.size()) {
      if (in_[pos_] != '<') return ReadText(token);
      const std::size_t rest = in_.size() - pos_;
      if (rest >= 4 && in_.compare(pos_, 4, "<!--") == 0) {
        SkipComment();
        continue;
      }
      if (rest >= 2 && (in_[pos_ + 1] == '!' || in_[pos_ + 1] == '?')) {
        SkipPast('>');
        continue;
      }
      if (rest >= 3 && in_[pos_ + 1] == '/' && is_alpha(in_[pos_ + 2])) {
        ReadEndTag(token);
        return true;
      }
      if (rest >= 2 && in_[pos_ + 1] == '/' ) {
        // "</>" or "</ junk>": bogus comment.
        SkipPast('>');
        continue;
      }
      if (rest >= 2 && is_alpha(in_[pos_ + 1])) {
        ReadStartTag(token);
        return true;
      }
      return ReadText(token);
    }
    return false;
  }

 private:
  void SkipComment() {
    const std::size_t end = in_.find("-->", pos_ + 4);
    pos_ = end == std::string_view::npos ? in_.size() : end + 3;
  }

  void SkipPast(char c) {
    const std::size_t end = in_.find(c, pos_);
    pos_ = end == std::string_view::npos ? in_.size() : end + 1;
  }

  bool ReadText(Token& token) {
    // A '<' that does not open markup is literal text.
    std::size_t end = in_.find('<', pos_ + 1);
    if (end == std::string_view::npos) end = in_.size();
    token = Token{};
    token.type = TokenType::kText;
    token.text = decode_entities(in_.substr(pos_, end - pos_));
    pos_ = end;
    return true;
  }

  std::string ReadName() {
    const std::size_t begin = pos_;
    while (pos_ < in_.size() && !is_space(in_[pos_]) && in_[pos_] != '/' &&
           in_[pos_] != '>') {
      ++pos_;
    }
    return lowercase(in_.substr(begin, pos_ - begin));
  }

  void ReadEndTag(Token& token) {
    pos_ += 2;
    token = Token{};
    token.type = TokenType::kEndTag;
    token.name = ReadName();
    SkipPast('>');
  }

  void ReadStartTag(Token& token) {
    pos_ += 1;
    token = Token{};
    token.type = TokenType::kStartTag;
    token.name = ReadName();
    while (pos_ < in_.size()) {
      while (pos_ < in_.size() && (is_space(in_[pos_]) || in_[pos_] == '/')) {
        ++pos_;
      }
      if (pos_ >= in_.size()) break;
      if (in_[pos_] == '>') {
        ++pos_;
        break;
      }
      const std::size_t name_begin = pos_;
      ++pos_;  // A leading '=' belongs to the name.
      while (pos_ < in_.size() && !is_space(in_[pos_]) && in_[pos_] != '/' &&
             in_[pos_] != '>' && in_[pos_] != '=') {
        ++pos_;
      }
      std::string name = lowercase(in_.substr(name_begin, pos_ - name_begin));
      while (pos_ < in_.size() && is_space(in_[pos_])) ++pos_;
      std::string value;
      if (pos_ < in_.size() && in_[pos_] == '=') {
        ++pos_;
        while (pos_ < in_.size() && is_space(in_[pos_])) ++pos_;
        if (pos_ < in_.size() && (in_[pos_] == '"' || in_[pos_] == '\'')) {
          const char quote = in_[pos_++];
          std::size_t end = in_.find(quote, pos_);
          if (end == std::string_view::npos) end = in_.size();
          value = decode_entities(in_.substr(pos_, end - pos_));
          pos_ = std::min(end + 1, in_.size());
        } else {
          const std::size_t begin = pos_;
          while (pos_ < in_.size() && !is_space(in_[pos_]) &&
                 in_[pos_] != '>') {
            ++pos_;
          }
          value = decode_entities(in_.substr(begin, pos_ - begin));
        }
      }
      token.attributes.emplace(std::move(name), std::move(value));
    }
    if (is_raw_text(token.name) || is_rcdata(token.name)) {
      raw_end_tag_ = token.name;
    }
  }

  // Content of a raw text or RCDATA element, up to its end tag.
  bool ReadRawText(Token& token) {
    const std::string tag = std::move(raw_end_tag_);
    raw_end_tag_.clear();
    std::size_t search = pos_;
    std::size_t end = in_.size();
    while (true) {
      const std::size_t lt = in_.find("</", search);
      if (lt == std::string_view::npos) break;
      const std::size_t after = lt + 2 + tag.size();
      if (after <= in_.size() &&
          lowercase(in_.substr(lt + 2, tag.size())) == tag &&
          (after == in_.size() || is_space(in_[after]) || in_[after] == '>' ||
           in_[after] == '/')) {
        end = lt;
        break;
      }
      search = lt + 2;
    }
    token = Token{};
    token.type = TokenType::kText;
    const std::string_view content = in_.substr(pos_, end - pos_);
    token.text = is_rcdata(tag) ? decode_entities(content) : std::string(content);
    // The end tag, if any, is read by the next call.
    pos_ = end;
    return true;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  std::string raw_end_tag_;
};

// ---------------------------------------------------------------------------
// Tree construction.

bool is_void(std::string_view tag) {
  static const std::unordered_set<std::string_view> kVoid = {
      "area", "base", "br",    "col",   "embed",  "hr",    "img",
      "input", "link", "meta", "param", "source", "track", "wbr",
      "keygen"};
  return kVoid.count(tag) > 0;
}

// Elements whose start tag closes an open <p>.
bool closes_p(std::string_view tag) {
  static const std::unordered_set<std::string_view> kTags = {
      "address", "article", "aside",   "blockquote", "center",  "details",
      "dialog",  "dir",     "div",     "dl",         "fieldset", "figcaption",
      "figure",  "footer",  "form",    "h1",         "h2",      "h3",
      "h4",      "h5",      "h6",      "header",     "hgroup",  "hr",
      "li",      "main",    "menu",    "nav",        "ol",      "p",
      "pre",     "section", "summary", "table",      "ul",      "dd",
      "dt",      "listing", "plaintext"};
  return kTags.count(tag) > 0;
}

// Elements that stop the search for a matching end tag.
bool is_special(std::string_view tag) {
  static const std::unordered_set<std::string_view> kTags = {
      "address", "applet",   "area",     "article",  "aside",   "blockquote",
      "body",    "button",   "caption",  "center",   "col",     "colgroup",
      "dd",      "details",  "dir",      "div",      "dl",      "dt",
      "fieldset", "figcaption", "figure", "footer",  "form",    "frameset",
      "h1",      "h2",       "h3",       "h4",       "h5",      "h6",
      "header",  "hgroup",   "html",     "li",       "main",    "marquee",
      "menu",    "nav",      "object",   "ol",       "p",       "pre",
      "section", "select",   "summary",  "table",    "tbody",   "td",
      "template", "textarea", "tfoot",   "th",       "thead",   "tr",
      "ul"};
  return kTags.count(tag) > 0;
}

bool is_heading(std::string_view tag) {
  return tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '6';
}

bool is_head_content(std::string_view tag) {
  return tag == "title" || tag == "meta" || tag == "link" || tag == "base" ||
         tag == "style" || tag == "script" || tag == "noscript" ||
         tag == "template";
}

bool is_metadata(std::string_view tag) {
  return tag == "meta" || tag == "link" || tag == "base";
}

class TreeConstructor {
 public:
  TreeConstructor(const IngestOptions& options, std::string source)
      : options_(options) {
    builder_.set_source_identifier(std::move(source));
    stack_.push_back({builder_.root(), "html"});
  }

  void Run(Tokenizer& tokenizer) {
    Token token;
    while (tokenizer.Next(token)) Handle(token);
    if (strip_depth_ == 0) FlushText();
    builder_.set_page_title(collapse_whitespace(title_));
  }

  DomTree Build() const { return builder_.Build(); }

 private:
  struct Open {
    NodeId node;
    std::string tag;
  };

  void Handle(const Token& token) {
    if (in_title_) {
      // Title content never enters the tree; the first title names the page.
      if (token.type == TokenType::kText) {
        if (!title_done_) title_ += token.text;
        return;
      }
      in_title_ = false;
      title_done_ = true;
      if (token.type == TokenType::kEndTag && token.name == "title") return;
    }
    if (strip_depth_ > 0) {
      HandleStripped(token);
      return;
    }
    switch (token.type) {
      case TokenType::kText:
        HandleText(token.text);
        break;
      case TokenType::kStartTag:
        HandleStart(token);
        break;
      case TokenType::kEndTag:
        HandleEnd(token.name);
        break;
    }
  }

  // Inside a stripped subtree: only track nesting of the stripped tag.
  void HandleStripped(const Token& token) {
    if (token.name == strip_tag_ && !is_void(strip_tag_)) {
      if (token.type == TokenType::kStartTag) ++strip_depth_;
      if (token.type == TokenType::kEndTag) --strip_depth_;
    } else if (strip_tag_ == "head" && token.type == TokenType::kStartTag) {
      if (token.name == "title") {
        in_title_ = true;
      } else if (!is_head_content(token.name)) {
        // Unclosed head.
        strip_depth_ = 0;
        HandleStart(token);
      }
    }
  }

  void HandleText(const std::string& text) {
    if (!body_ && collapse_whitespace(text).empty()) return;
    pending_text_ += text;
  }

  void FlushText() {
    if (pending_text_.empty()) return;
    std::string text = collapse_whitespace(pending_text_);
    pending_text_.clear();
    if (text.empty() ||
        utf8_length(text) < static_cast<std::size_t>(options_.min_text_chars)) {
      return;
    }
    EnsureBody();
    builder_.AddText(current(), text);
  }

  NodeId current() const { return stack_.back().node; }

  void EnsureBody() {
    if (body_) return;
    body_ = builder_.AddElement(builder_.root(), "body");
    stack_.push_back({*body_, "body"});
  }

  // Index into stack_ of the nearest open `tags` element above the first
  // `boundary` element, or nullopt.
  template <typename Match, typename Boundary>
  std::optional<std::size_t> FindInScope(Match match, Boundary boundary) const {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (match(stack_[i].tag)) return i;
      if (boundary(stack_[i].tag)) return std::nullopt;
    }
    return std::nullopt;
  }

  void PopTo(std::size_t index) { stack_.resize(index); }

  static bool default_boundary(std::string_view t) {
    return t == "html" || t == "body" || t == "table" || t == "td" ||
           t == "th" || t == "caption" || t == "marquee" || t == "object" ||
           t == "applet" || t == "template";
  }

  void CloseImplied(std::string_view tag) {
    auto eq = [](std::string_view want) {
      return [want](std::string_view t) { return t == want; };
    };
    if (closes_p(tag)) {
      if (auto i = FindInScope(eq("p"), [](std::string_view t) {
            return default_boundary(t) || t == "button";
          })) {
        PopTo(*i);
      }
    }
    if (tag == "li") {
      if (auto i = FindInScope(eq("li"), [](std::string_view t) {
            return default_boundary(t) || t == "ul" || t == "ol";
          })) {
        PopTo(*i);
      }
    } else if (tag == "dd" || tag == "dt") {
      if (auto i = FindInScope(
              [](std::string_view t) { return t == "dd" || t == "dt"; },
              [](std::string_view t) {
                return default_boundary(t) || t == "dl";
              })) {
        PopTo(*i);
      }
    } else if (tag == "tr") {
      if (auto i = FindInScope(eq("tr"), [](std::string_view t) {
            return t == "table" || t == "html" || t == "body";
          })) {
        PopTo(*i);
      }
    } else if (tag == "td" || tag == "th") {
      if (auto i = FindInScope(
              [](std::string_view t) { return t == "td" || t == "th"; },
              [](std::string_view t) {
                return t == "tr" || t == "table" || t == "html" ||
                       t == "body";
              })) {
        PopTo(*i);
      }
    } else if (tag == "thead" || tag == "tbody" || tag == "tfoot") {
      if (auto i = FindInScope(
              [](std::string_view t) {
                return t == "thead" || t == "tbody" || t == "tfoot";
              },
              [](std::string_view t) {
                return t == "table" || t == "html" || t == "body";
              })) {
        PopTo(*i);
      }
    } else if (tag == "option" || tag == "optgroup") {
      if (stack_.back().tag == "option") PopTo(stack_.size() - 1);
      if (tag == "optgroup" && stack_.back().tag == "optgroup") {
        PopTo(stack_.size() - 1);
      }
    } else if (is_heading(tag) && is_heading(stack_.back().tag)) {
      PopTo(stack_.size() - 1);
    } else if (tag == "a") {
      if (auto i = FindInScope(eq("a"), default_boundary)) PopTo(*i);
    }
  }

  void HandleStart(const Token& token) {
    const std::string& tag = token.name;
    if (tag == "html") {
      builder_.MergeAttributes(builder_.root(), token.attributes);
      return;
    }
    if (tag == "title") {
      in_title_ = true;
      return;
    }
    if (is_metadata(tag)) return;
    if (tag == "head") {
      if (options_.strip_tags.count("head")) Strip("head");
      return;
    }
    if (tag == "body") {
      FlushText();
      if (body_) {
        builder_.MergeAttributes(*body_, token.attributes);
      } else {
        body_ = builder_.AddElement(builder_.root(), "body", token.attributes);
        stack_.push_back({*body_, "body"});
      }
      return;
    }
    if (options_.strip_tags.count(tag)) {
      Strip(tag);
      return;
    }

    FlushText();
    EnsureBody();
    CloseImplied(tag);
    if (tag == "img") {
      builder_.AddImage(current(), token.attributes);
      if (options_.treat_alt_as_text) {
        auto alt = token.attributes.find("alt");
        if (alt != token.attributes.end()) {
          const std::string text = collapse_whitespace(alt->second);
          if (!text.empty() &&
              utf8_length(text) >=
                  static_cast<std::size_t>(options_.min_text_chars)) {
            builder_.AddText(current(), text);
          }
        }
      }
      return;
    }
    const NodeId id = builder_.AddElement(current(), tag, token.attributes);
    if (!is_void(tag)) stack_.push_back({id, tag});
  }

  void Strip(const std::string& tag) {
    if (is_void(tag)) return;
    strip_tag_ = tag;
    strip_depth_ = 1;
  }

  void HandleEnd(const std::string& tag) {
    if (tag == "html" || tag == "body" || tag == "head") return;
    if (tag == "br") {
      Token br;
      br.type = TokenType::kStartTag;
      br.name = "br";
      HandleStart(br);
      return;
    }
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i].tag == tag) {
        FlushText();
        PopTo(i);
        return;
      }
      if (is_special(stack_[i].tag)) return;
    }
  }

  const IngestOptions& options_;
  DomTreeBuilder builder_;
  std::vector<Open> stack_;
  std::optional<NodeId> body_;
  std::string pending_text_;
  std::string title_;
  bool in_title_ = false;
  bool title_done_ = false;
  std::string strip_tag_;
  int strip_depth_ = 0;
};

void escape_into(std::string& out, std::string_view s, bool attribute) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attribute) {
          out += "&quot;";
          break;
        }
        [[fallthrough]];
      default:
        out.push_back(c);
    }
  }
}

void write_open_tag(std::string& out, const DomNode& node) {
  out += '<';
  out += node.tag;
  for (const auto& [name, value] : node.attributes) {
    out += ' ';
    out += name;
    out += "=\"";
    escape_into(out, value, true);
    out += '"';
  }
  out += '>';
}

void write_node(std::string& out, const DomTree& tree, NodeId id,
                bool raw_parent) {
  const DomNode& node = tree.node(id);
  switch (node.kind) {
    case NodeKind::kText:
      if (raw_parent) out += node.text;
      else escape_into(out, node.text, false);
      return;
    case NodeKind::kImage:
      write_open_tag(out, node);
      return;
    case NodeKind::kElement:
      break;
  }
  const bool is_root = id == tree.root();
  if (!is_root) write_open_tag(out, node);
  const bool raw = is_raw_text(node.tag);
  for (NodeId child : node.children) write_node(out, tree, child, raw);
  if (!is_root && !is_void(node.tag)) {
    out += "</";
    out += node.tag;
    out += '>';
  }
}

}  // namespace

std::string decode_document(std::string_view bytes) {
  if (bytes.size() >= 3 && static_cast<unsigned char>(bytes[0]) == 0xEF &&
      static_cast<unsigned char>(bytes[1]) == 0xBB &&
      static_cast<unsigned char>(bytes[2]) == 0xBF) {
    return repair_utf8(bytes.substr(3));
  }
  if (auto charset = sniff_charset(bytes); charset && is_latin1_family(*charset)) {
    return decode_latin1(bytes);
  }
  return repair_utf8(bytes);
}

DomTree parse_html(std::string_view bytes, std::string source_identifier,
                   const IngestOptions& options) {
  options.Validate();
  if (bytes.empty()) throw ParseError("empty document");
  const std::string text = decode_document(bytes);
  Tokenizer tokenizer(text);
  TreeConstructor constructor(options, std::move(source_identifier));
  constructor.Run(tokenizer);
  return constructor.Build();
}

std::string to_html(const DomTree& tree) {
  std::string out;
  const DomNode& root = tree.node(tree.root());
  write_open_tag(out, root);
  if (!tree.page_title().empty()) {
    out += "<head><title>";
    escape_into(out, tree.page_title(), false);
    out += "</title></head>";
  }
  write_node(out, tree, tree.root(), false);
  out += "</";
  out += root.tag;
  out += '>';
  return out;
}

}  // namespace imgseg
