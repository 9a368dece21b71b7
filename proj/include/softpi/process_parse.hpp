#pragma once

#include <cctype>
#include <string>

#include "softpi/parse_error.hpp"
#include "softpi/process.hpp"

namespace softpi {
namespace detail {

// Hand-rolled recursive descent. Composition binds loosest and associates
// left; prefix bodies extend to the next composition bar, so a parallel
// body under a prefix requires parentheses.
class ProcParser {
 public:
  explicit ProcParser(const std::string& text) : text_(text) {}

  Process parse_whole() {
    Process p = parse_parallel();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input after process");
    return p;
  }

 private:
  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(line_, col_, msg);
  }

  void advance() {
    if (pos_ < text_.size()) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!eat(c)) fail(std::string("expected '") + c + "' " + what);
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  Name parse_ident(const char* what) {
    skip_ws();
    if (pos_ >= text_.size() || !ident_start(text_[pos_]))
      fail(std::string("expected name ") + what);
    size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
    return text_.substr(start, pos_ - start);
  }

  bool eat_keyword(const char* kw) {
    skip_ws();
    size_t len = std::string(kw).size();
    if (text_.compare(pos_, len, kw) != 0) return false;
    size_t after = pos_ + len;
    if (after < text_.size() && ident_char(text_[after])) return false;
    for (size_t i = 0; i < len; ++i) advance();
    return true;
  }

  Process parse_parallel() {
    Process p = parse_prefixed();
    while (peek() == '|') {
      advance();
      p = par(p, parse_prefixed());
    }
    return p;
  }

  Process parse_prefixed() {
    char c = peek();
    if (c == '0') {
      advance();
      return nil();
    }
    if (c == '(') {
      advance();
      Process p = parse_parallel();
      expect(')', "to close group");
      return p;
    }
    if (c == '!') {
      advance();
      Name chan = parse_ident("after '!'");
      expect('?', "in replicated input");
      expect('(', "before bound name");
      Name bound = parse_ident("as bound name");
      expect(')', "after bound name");
      expect('.', "after replicated input prefix");
      return server(chan, bound, parse_prefixed());
    }
    if (eat_keyword("new")) {
      Name x = parse_ident("after 'new'");
      expect('.', "after restriction binder");
      return nu(x, parse_prefixed());
    }
    if (eat_keyword("case")) {
      Name chan = parse_ident("after 'case'");
      expect('{', "to open case branches");
      if (!eat_keyword("inl")) fail("expected 'inl' branch");
      expect(':', "after 'inl'");
      Process l = parse_parallel();
      expect(';', "between case branches");
      if (!eat_keyword("inr")) fail("expected 'inr' branch");
      expect(':', "after 'inr'");
      Process r = parse_parallel();
      expect('}', "to close case branches");
      return choice(chan, l, r);
    }
    if (!ident_start(c)) fail("expected a process");
    Name chan = parse_ident("as channel");
    c = peek();
    if (c == '?') {
      advance();
      expect('(', "before bound name");
      Name bound = parse_ident("as bound name");
      expect(')', "after bound name");
      expect('.', "after input prefix");
      return receive(chan, bound, parse_prefixed());
    }
    if (c == '!') {
      advance();
      expect('(', "before payload");
      Name payload = parse_ident("as payload");
      expect(')', "after payload");
      expect('.', "after output prefix");
      return send(chan, payload, parse_prefixed());
    }
    if (c == '.') {
      advance();
      bool inl = eat_keyword("inl");
      if (!inl && !eat_keyword("inr")) fail("expected 'inl' or 'inr'");
      expect('.', "after selection");
      Process body = parse_prefixed();
      return inl ? sel_l(chan, body) : sel_r(chan, body);
    }
    fail("expected '?', '!' or '.' after channel");
  }
};

}  // namespace detail

inline Process parse_process(const std::string& text) {
  detail::ProcParser parser(text);
  return parser.parse_whole();
}

}  // namespace softpi
