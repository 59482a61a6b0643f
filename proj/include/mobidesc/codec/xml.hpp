#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mobidesc/core/errors.hpp"

namespace mobidesc {

struct XmlAttr {
  std::string name;
  std::string value;
};

/// Parsed XML element. Text and child elements are both kept so the caller
/// can reject mixed content; whitespace-only text between children is
/// formatting and is dropped during parsing.
struct XmlElement {
  std::string name;
  std::vector<XmlAttr> attributes;
  std::vector<XmlElement> children;
  std::string text;
  bool self_closed = false;

  const XmlAttr* attr(std::string_view attr_name) const {
    for (const auto& a : attributes) {
      if (a.name == attr_name) return &a;
    }
    return nullptr;
  }
};

namespace xml_detail {

inline bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

inline bool is_name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':';
}

inline bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

class Parser {
public:
  explicit Parser(std::string_view input) : in_(input) {}

  XmlElement parse_document() {
    // UTF-8 BOM, XML declaration, comments and whitespace may precede the
    // single root element; anything after it except trailing trivia is an
    // error.
    if (in_.substr(pos_, 3) == "\xEF\xBB\xBF") pos_ += 3;
    skip_trivia(true);
    XmlElement root = parse_element();
    skip_trivia(false);
    if (pos_ != in_.size()) fail("content after document root");
    return root;
  }

private:
  [[noreturn]] void fail(const std::string& what) {
    throw MalformedXml("malformed XML at offset " + std::to_string(pos_) + ": " + what);
  }

  char peek() const { return pos_ < in_.size() ? in_[pos_] : '\0'; }

  bool consume(std::string_view token) {
    if (in_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void skip_ws() {
    while (pos_ < in_.size() && is_ws(in_[pos_])) ++pos_;
  }

  void skip_trivia(bool allow_declaration) {
    for (;;) {
      skip_ws();
      if (allow_declaration && in_.substr(pos_, 5) == "<?xml") {
        auto end = in_.find("?>", pos_);
        if (end == std::string_view::npos) fail("unterminated XML declaration");
        pos_ = end + 2;
        allow_declaration = false;
        continue;
      }
      if (in_.substr(pos_, 4) == "<!--") {
        auto end = in_.find("-->", pos_);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos_ = end + 3;
        continue;
      }
      if (in_.substr(pos_, 2) == "<!") fail("DTD and CDATA are not supported");
      if (in_.substr(pos_, 2) == "<?") fail("processing instructions are not supported");
      return;
    }
  }

  std::string parse_name() {
    if (!is_name_start(peek())) fail("expected a name");
    std::size_t start = pos_;
    while (pos_ < in_.size() && is_name_char(in_[pos_])) ++pos_;
    return std::string(in_.substr(start, pos_ - start));
  }

  std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size();) {
      if (raw[i] != '&') {
        out += raw[i++];
        continue;
      }
      auto semi = raw.find(';', i);
      if (semi == std::string_view::npos) fail("unterminated entity reference");
      std::string_view entity = raw.substr(i + 1, semi - i - 1);
      if (entity == "amp") out += '&';
      else if (entity == "lt") out += '<';
      else if (entity == "gt") out += '>';
      else if (entity == "quot") out += '"';
      else if (entity == "apos") out += '\'';
      else if (!entity.empty() && entity[0] == '#') {
        unsigned long code = 0;
        bool ok = entity.size() > 1;
        if (entity.size() > 2 && (entity[1] == 'x' || entity[1] == 'X')) {
          for (std::size_t j = 2; j < entity.size() && ok; ++j) {
            const char c = entity[j];
            int digit;
            if (c >= '0' && c <= '9') digit = c - '0';
            else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
            else { ok = false; break; }
            code = code * 16 + static_cast<unsigned long>(digit);
          }
          ok = ok && entity.size() > 2;
        } else {
          for (std::size_t j = 1; j < entity.size() && ok; ++j) {
            const char c = entity[j];
            if (c < '0' || c > '9') { ok = false; break; }
            code = code * 10 + static_cast<unsigned long>(c - '0');
          }
        }
        if (!ok || code == 0 || code > 0x10FFFF) fail("bad character reference");
        append_utf8(out, static_cast<char32_t>(code));
      } else {
        fail("unknown entity '&" + std::string(entity) + ";'");
      }
      i = semi + 1;
    }
    return out;
  }

  static void append_utf8(std::string& out, char32_t code) {
    if (code < 0x80) {
      out += static_cast<char>(code);
    } else if (code < 0x800) {
      out += static_cast<char>(0xC0 | (code >> 6));
      out += static_cast<char>(0x80 | (code & 0x3F));
    } else if (code < 0x10000) {
      out += static_cast<char>(0xE0 | (code >> 12));
      out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (code & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (code >> 18));
      out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (code & 0x3F));
    }
  }

  std::string parse_attr_value() {
    const char quote = peek();
    if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
    ++pos_;
    std::size_t start = pos_;
    while (pos_ < in_.size() && in_[pos_] != quote) {
      if (in_[pos_] == '<') fail("'<' in attribute value");
      ++pos_;
    }
    if (pos_ == in_.size()) fail("unterminated attribute value");
    std::string value = decode_entities(in_.substr(start, pos_ - start));
    ++pos_;
    return value;
  }

  XmlElement parse_element() {
    if (!consume("<")) fail("expected '<'");
    XmlElement el;
    el.name = parse_name();
    for (;;) {
      skip_ws();
      if (consume("/>")) {
        el.self_closed = true;
        return el;
      }
      if (consume(">")) break;
      XmlAttr attr;
      attr.name = parse_name();
      skip_ws();
      if (!consume("=")) fail("expected '=' after attribute name");
      skip_ws();
      attr.value = parse_attr_value();
      for (const auto& existing : el.attributes) {
        if (existing.name == attr.name) fail("duplicate attribute '" + attr.name + "'");
      }
      el.attributes.push_back(std::move(attr));
    }

    // Content: text segments and child elements until the matching end tag.
    std::string raw_text;
    bool text_is_ws = true;
    for (;;) {
      if (pos_ >= in_.size()) fail("unterminated element '" + el.name + "'");
      if (peek() == '<') {
        if (in_.substr(pos_, 2) == "</") {
          pos_ += 2;
          std::string closing = parse_name();
          if (closing != el.name) fail("mismatched end tag '" + closing + "'");
          skip_ws();
          if (!consume(">")) fail("expected '>' in end tag");
          break;
        }
        if (in_.substr(pos_, 4) == "<!--") {
          auto end = in_.find("-->", pos_);
          if (end == std::string_view::npos) fail("unterminated comment");
          pos_ = end + 3;
          continue;
        }
        if (in_.substr(pos_, 2) == "<!" || in_.substr(pos_, 2) == "<?") {
          fail("unsupported markup inside element");
        }
        el.children.push_back(parse_element());
        continue;
      }
      const char c = in_[pos_];
      raw_text += c;
      if (!is_ws(c)) text_is_ws = false;
      ++pos_;
    }

    if (el.children.empty()) {
      el.text = decode_entities(raw_text);
    } else if (!text_is_ws) {
      el.text = decode_entities(raw_text); // caller decides: mixed content
    }
    return el;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

inline void escape_text(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
}

inline void escape_attr(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
}

} // namespace xml_detail

/// Parses one XML document (subset: no DTD, CDATA, or PIs). Throws
/// MalformedXml on anything that is not well formed.
inline XmlElement xml_parse(std::string_view bytes) {
  xml_detail::Parser parser(bytes);
  return parser.parse_document();
}

} // namespace mobidesc
