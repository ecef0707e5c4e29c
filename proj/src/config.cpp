#include "bai/config.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace bai {

namespace {

struct token {
  enum class kind { str, num, ident, punct, end };
  kind type = kind::end;
  std::string text;
  double num = 0;
  int line = 1;
};

class lexer {
 public:
  explicit lexer(const std::string& text) : s_(text) { advance(); }

  const token& peek() const { return tok_; }
  token take() {
    token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    tok_ = token{};
    tok_.line = line_;
    if (pos_ >= s_.size()) return;
    const char c = s_[pos_];
    if (c == '"') {
      ++pos_;
      std::string out;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\n') fail(errc::config_error, loc() + ": unterminated string");
        out.push_back(s_[pos_++]);
      }
      if (pos_ >= s_.size()) fail(errc::config_error, loc() + ": unterminated string");
      ++pos_;
      tok_.type = token::kind::str;
      tok_.text = std::move(out);
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      std::size_t end = pos_;
      while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) ||
                                 s_[end] == '.' || s_[end] == '-' || s_[end] == '+'))
        ++end;
      const std::string text = s_.substr(pos_, end - pos_);
      try {
        std::size_t used = 0;
        tok_.num = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
      } catch (const std::exception&) {
        fail(errc::config_error, loc() + ": bad number '" + text + "'");
      }
      tok_.type = token::kind::num;
      tok_.text = text;
      pos_ = end;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) ||
                                 s_[end] == '_' || s_[end] == '-'))
        ++end;
      tok_.type = token::kind::ident;
      tok_.text = s_.substr(pos_, end - pos_);
      pos_ = end;
    } else if (c == '=' || c == '{' || c == '}' || c == '[' || c == ']' || c == ',') {
      tok_.type = token::kind::punct;
      tok_.text = std::string(1, c);
      ++pos_;
    } else {
      fail(errc::config_error, loc() + ": unexpected character '" + std::string(1, c) + "'");
    }
  }

  std::string loc() const { return "line " + std::to_string(line_); }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  token tok_;
};

class parser {
 public:
  explicit parser(const std::string& text) : lex_(text) {}

  cfg_value document() {
    cfg_value root;
    root.type = cfg_value::kind::table;
    root.line = 1;
    while (lex_.peek().type != token::kind::end) {
      auto [key, val] = entry();
      for (const auto& [k, v] : root.table)
        if (k == key)
          fail(errc::config_error,
               "line " + std::to_string(val.line) + ": duplicate key '" + key + "'");
      root.table.emplace_back(std::move(key), std::move(val));
    }
    return root;
  }

 private:
  std::pair<std::string, cfg_value> entry() {
    const token key = lex_.take();
    if (key.type != token::kind::ident && key.type != token::kind::str)
      fail(errc::config_error, at(key) + ": expected a key");
    expect_punct("=");
    return {key.text, value()};
  }

  void expect_punct(const std::string& p) {
    const token t = lex_.take();
    if (t.type != token::kind::punct || t.text != p)
      fail(errc::config_error, at(t) + ": expected '" + p + "'");
  }

  cfg_value value() {
    const token t = lex_.take();
    cfg_value v;
    v.line = t.line;
    switch (t.type) {
      case token::kind::num:
        v.type = cfg_value::kind::number;
        v.num = t.num;
        return v;
      case token::kind::str:
        v.type = cfg_value::kind::string;
        v.str = t.text;
        return v;
      case token::kind::ident:
        if (t.text == "true" || t.text == "false") {
          v.type = cfg_value::kind::boolean;
          v.flag = t.text == "true";
          return v;
        }
        fail(errc::config_error, at(t) + ": bare word '" + t.text + "' (quote strings)");
      case token::kind::punct:
        if (t.text == "{") {
          v.type = cfg_value::kind::table;
          if (peek_punct("}")) {
            lex_.take();
            return v;
          }
          for (;;) {
            auto [key, val] = entry();
            v.table.emplace_back(std::move(key), std::move(val));
            const token sep = lex_.take();
            if (sep.type == token::kind::punct && sep.text == ",") {
              if (peek_punct("}")) {  // trailing comma
                lex_.take();
                return v;
              }
              continue;
            }
            if (sep.type == token::kind::punct && sep.text == "}") return v;
            fail(errc::config_error, at(sep) + ": expected ',' or '}'");
          }
        }
        if (t.text == "[") {
          v.type = cfg_value::kind::array;
          if (peek_punct("]")) {
            lex_.take();
            return v;
          }
          for (;;) {
            v.array.push_back(value());
            const token sep = lex_.take();
            if (sep.type == token::kind::punct && sep.text == ",") {
              if (peek_punct("]")) {
                lex_.take();
                return v;
              }
              continue;
            }
            if (sep.type == token::kind::punct && sep.text == "]") return v;
            fail(errc::config_error, at(sep) + ": expected ',' or ']'");
          }
        }
        [[fallthrough]];
      default:
        fail(errc::config_error, at(t) + ": expected a value");
    }
  }

  bool peek_punct(const std::string& p) {
    return lex_.peek().type == token::kind::punct && lex_.peek().text == p;
  }

  static std::string at(const token& t) { return "line " + std::to_string(t.line); }

  lexer lex_;
};

}  // namespace

double cfg_value::as_number(const std::string& what) const {
  if (type != kind::number)
    fail(errc::config_error, "line " + std::to_string(line) + ": " + what + " must be a number");
  return num;
}

std::int64_t cfg_value::as_int(const std::string& what) const {
  const double v = as_number(what);
  const auto i = static_cast<std::int64_t>(v);
  if (static_cast<double>(i) != v)
    fail(errc::config_error, "line " + std::to_string(line) + ": " + what + " must be an integer");
  return i;
}

const std::string& cfg_value::as_string(const std::string& what) const {
  if (type != kind::string)
    fail(errc::config_error, "line " + std::to_string(line) + ": " + what + " must be a string");
  return str;
}

bool cfg_value::as_bool(const std::string& what) const {
  if (type != kind::boolean)
    fail(errc::config_error, "line " + std::to_string(line) + ": " + what + " must be a boolean");
  return flag;
}

cfg_value parse_config_text(const std::string& text) { return parser(text).document(); }

cfg_value load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace bai
