#include "grw/cli/toml.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include "grw/error.hpp"

namespace grw::cli {

using nlohmann::json;

namespace {

bool bare_key_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        table = header(root);
      } else {
        key_value(*table);
      }
      end_of_line();
    }
    return root;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  // Canonical ids (with array-of-tables indices) of tables opened by a header.
  std::set<std::string> defined_;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("config line " + std::to_string(line_) + ": " + what);
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  char get() {
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++pos_;
  }
  void skip_blank_lines() {
    while (true) {
      skip_ws();
      skip_comment();
      if (eof()) return;
      if (peek() == '\n') {
        get();
      } else if (peek() == '\r' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '\n') {
        ++pos_;
        get();
      } else {
        return;
      }
    }
  }
  // Whitespace, comments and newlines inside arrays.
  void skip_ws_nl() {
    while (true) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        get();
      } else {
        return;
      }
    }
  }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (eof()) return;
    if (peek() == '\r') ++pos_;
    if (peek() != '\n') fail(std::string("unexpected '") + peek() + "' after value");
    get();
  }

  std::vector<std::string> key_path() {
    std::vector<std::string> parts;
    while (true) {
      skip_ws();
      std::string part;
      if (peek() == '"') {
        part = basic_string();
      } else if (peek() == '\'') {
        part = literal_string();
      } else {
        while (!eof() && bare_key_char(peek())) part += get();
        if (part.empty()) fail("expected a key");
      }
      parts.push_back(part);
      skip_ws();
      if (peek() != '.') break;
      ++pos_;
    }
    return parts;
  }

  std::string joined(const std::vector<std::string>& path) const {
    std::string out;
    for (const auto& p : path) out += (out.empty() ? "" : ".") + p;
    return out;
  }

  json* descend(json& start, const std::vector<std::string>& path, std::size_t count, std::string* id = nullptr) {
    json* cur = &start;
    for (std::size_t k = 0; k < count; ++k) {
      json& next = (*cur)[path[k]];
      if (id) *id += "." + path[k];
      if (next.is_null()) next = json::object();
      if (next.is_array() && !next.empty() && next.back().is_object()) {
        if (id) *id += "[" + std::to_string(next.size() - 1) + "]";
        cur = &next.back();  // last element of an array of tables
        continue;
      }
      if (!next.is_object()) fail("key '" + joined(path) + "' redefines a value as a table");
      cur = &next;
    }
    return cur;
  }

  json* header(json& root) {
    ++pos_;
    const bool array = peek() == '[';
    if (array) ++pos_;
    const auto path = key_path();
    if (peek() != ']') fail("expected ']' to close the table header");
    ++pos_;
    if (array) {
      if (peek() != ']') fail("expected ']]' to close the array-of-tables header");
      ++pos_;
    }
    std::string id;
    json* parent = descend(root, path, path.size() - 1, &id);
    id += "." + path.back();
    json& slot = (*parent)[path.back()];
    if (array) {
      if (slot.is_null()) slot = json::array();
      if (!slot.is_array()) fail("'" + joined(path) + "' is not an array of tables");
      slot.push_back(json::object());
      return &slot.back();
    }
    if (slot.is_null()) slot = json::object();
    if (!slot.is_object()) fail("'" + joined(path) + "' is already a value");
    if (!defined_.insert(id).second) fail("table [" + joined(path) + "] defined twice");
    return &slot;
  }

  void key_value(json& table) {
    const auto path = key_path();
    skip_ws();
    if (peek() != '=') fail("expected '=' after key '" + joined(path) + "'");
    ++pos_;
    skip_ws();
    json* parent = descend(table, path, path.size() - 1);
    if (parent->contains(path.back())) fail("duplicate key '" + joined(path) + "'");
    (*parent)[path.back()] = value();
  }

  json value() {
    const char c = peek();
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    if (c == '{') return inline_table();
    if (s_.substr(pos_, 4) == "true" && !bare_key_char(pos_ + 4 < s_.size() ? s_[pos_ + 4] : ' ')) {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false" && !bare_key_char(pos_ + 5 < s_.size() ? s_[pos_ + 5] : ' ')) {
      pos_ += 5;
      return false;
    }
    return number();
  }

  json number() {
    std::string tok;
    while (!eof() && (bare_key_char(peek()) || peek() == '+' || peek() == '.')) tok += get();
    if (tok.empty()) fail("expected a value");
    std::string body = tok;
    double sign = 1.0;
    if (body[0] == '+' || body[0] == '-') {
      sign = body[0] == '-' ? -1.0 : 1.0;
      body.erase(0, 1);
    }
    if (body == "inf") return sign * std::numeric_limits<double>::infinity();
    if (body == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::string digits;
    for (std::size_t k = 0; k < tok.size(); ++k) {
      if (tok[k] != '_') {
        digits += tok[k];
        continue;
      }
      const bool ok = k > 0 && k + 1 < tok.size() && std::isdigit(static_cast<unsigned char>(tok[k - 1])) &&
                      std::isdigit(static_cast<unsigned char>(tok[k + 1]));
      if (!ok) fail("misplaced '_' in number '" + tok + "'");
    }
    const bool is_float = digits.find_first_of(".eE") != std::string::npos;
    const char* first = digits.data() + (digits[0] == '+' ? 1 : 0);
    const char* last = digits.data() + digits.size();
    if (is_float) {
      double v = 0;
      const auto [p, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || p != last) fail("invalid number '" + tok + "'");
      return v;
    }
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last) fail("invalid value '" + tok + "'");
    return v;
  }

  std::string basic_string() {
    ++pos_;
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (eof()) fail("unterminated string");
      const char e = get();
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'u':
        case 'U': {
          const std::size_t n = e == 'u' ? 4 : 8;
          if (pos_ + n > s_.size()) fail("truncated unicode escape");
          unsigned long cp = 0;
          const auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + pos_ + n, cp, 16);
          if (ec != std::errc() || p != s_.data() + pos_ + n) fail("invalid unicode escape");
          pos_ += n;
          append_utf8(out, cp);
          break;
        }
        default: fail(std::string("invalid escape '\\") + e + "'");
      }
    }
  }

  std::string literal_string() {
    ++pos_;
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '\'') return out;
      out += c;
    }
  }

  json array() {
    ++pos_;
    json out = json::array();
    while (true) {
      skip_ws_nl();
      if (peek() == ']') {
        ++pos_;
        return out;
      }
      out.push_back(value());
      skip_ws_nl();
      if (peek() == ',') {
        ++pos_;
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  json inline_table() {
    ++pos_;
    json out = json::object();
    skip_ws();
    if (peek() == '}') {
      ++pos_;
      return out;
    }
    while (true) {
      key_value(out);
      skip_ws();
      if (peek() == '}') {
        ++pos_;
        return out;
      }
      if (peek() != ',') fail("expected ',' or '}' in inline table");
      ++pos_;
    }
  }
};

}  // namespace

json parse_toml(std::string_view text) { return Parser(text).parse(); }

json parse_toml_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_toml(buf.str());
}

}  // namespace grw::cli
