#pragma once

#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "softpi/names.hpp"
#include "softpi/parse_error.hpp"

namespace softpi {

// Session types: 1 is the only leaf, ! the only modality.
enum class TypeKind { One, Tensor, Lolli, Plus, With, Bang };

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

struct TypeNode {
  TypeKind kind = TypeKind::One;
  Type left;
  Type right;
};

inline Type make_type(TypeKind kind, Type left, Type right) {
  auto node = std::make_shared<TypeNode>();
  node->kind = kind;
  node->left = std::move(left);
  node->right = std::move(right);
  return node;
}

inline Type ty_one() { return make_type(TypeKind::One, nullptr, nullptr); }
inline Type ty_tensor(Type a, Type b) {
  return make_type(TypeKind::Tensor, std::move(a), std::move(b));
}
inline Type ty_lolli(Type a, Type b) {
  return make_type(TypeKind::Lolli, std::move(a), std::move(b));
}
inline Type ty_plus(Type a, Type b) {
  return make_type(TypeKind::Plus, std::move(a), std::move(b));
}
inline Type ty_with(Type a, Type b) {
  return make_type(TypeKind::With, std::move(a), std::move(b));
}
inline Type ty_bang(Type a) {
  return make_type(TypeKind::Bang, std::move(a), nullptr);
}

inline bool type_equal(const Type& a, const Type& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  return type_equal(a->left, b->left) && type_equal(a->right, b->right);
}

inline unsigned type_depth(const Type& a) {
  if (!a) return 0;
  switch (a->kind) {
    case TypeKind::One:
      return 0;
    case TypeKind::Bang:
      return 1 + type_depth(a->left);
    default:
      return std::max(type_depth(a->left), type_depth(a->right));
  }
}

namespace detail {

inline bool is_binary_type(const Type& t) {
  return t->kind != TypeKind::One && t->kind != TypeKind::Bang;
}

inline void print_type(const Type& t, std::ostream& os) {
  switch (t->kind) {
    case TypeKind::One:
      os << "1";
      return;
    case TypeKind::Bang:
      os << "!";
      if (is_binary_type(t->left)) {
        os << "(";
        print_type(t->left, os);
        os << ")";
      } else {
        print_type(t->left, os);
      }
      return;
    default: {
      const char* op = t->kind == TypeKind::Tensor  ? " * "
                       : t->kind == TypeKind::Lolli ? " -o "
                       : t->kind == TypeKind::Plus  ? " (+) "
                                                    : " & ";
      if (is_binary_type(t->left)) {
        os << "(";
        print_type(t->left, os);
        os << ")";
      } else {
        print_type(t->left, os);
      }
      os << op;
      print_type(t->right, os);
      return;
    }
  }
}

// Type expressions: '!' binds tightest, every binary operator shares one
// precedence level and associates right.
class TypeParser {
 public:
  TypeParser(const std::string& text, size_t pos, int line, int col)
      : text_(text), pos_(pos), line_(line), col_(col) {}

  Type parse() {
    Type left = parse_unary();
    skip_ws();
    if (match_op("*")) return ty_tensor(left, parse());
    if (match_op("-o")) return ty_lolli(left, parse());
    if (match_op("(+)")) return ty_plus(left, parse());
    if (match_op("&")) return ty_with(left, parse());
    return left;
  }

  size_t pos() const { return pos_; }
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  const std::string& text_;
  size_t pos_;
  int line_;
  int col_;

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
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      advance();
  }

  bool match_op(const std::string& op) {
    skip_ws();
    if (text_.compare(pos_, op.size(), op) != 0) return false;
    for (size_t i = 0; i < op.size(); ++i) advance();
    return true;
  }

  Type parse_unary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a type");
    char c = text_[pos_];
    if (c == '1') {
      advance();
      return ty_one();
    }
    if (c == '!') {
      advance();
      return ty_bang(parse_unary());
    }
    if (c == '(') {
      if (text_.compare(pos_, 3, "(+)") == 0) fail("expected a type before '(+)'");
      advance();
      Type t = parse();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      advance();
      return t;
    }
    fail("expected a type");
  }
};

}  // namespace detail

inline std::string type_to_string(const Type& t) {
  std::ostringstream os;
  detail::print_type(t, os);
  return os.str();
}

inline Type parse_type(const std::string& text) {
  detail::TypeParser parser(text, 0, 1, 1);
  Type t = parser.parse();
  size_t rest = parser.pos();
  while (rest < text.size() &&
         std::isspace(static_cast<unsigned char>(text[rest])))
    ++rest;
  if (rest != text.size())
    throw ParseError(parser.line(), parser.col(), "trailing input after type");
  return t;
}

// Context bindings are a finite map; each name bound at most once.
using Context = std::map<Name, Type>;

inline bool context_equal(const Context& a, const Context& b) {
  if (a.size() != b.size()) return false;
  auto it = b.begin();
  for (const auto& [name, ty] : a) {
    if (it->first != name || !type_equal(it->second, ty)) return false;
    ++it;
  }
  return true;
}

// True when every binding of a appears in b with an equal type.
inline bool context_subset(const Context& a, const Context& b) {
  for (const auto& [name, ty] : a) {
    auto it = b.find(name);
    if (it == b.end() || !type_equal(it->second, ty)) return false;
  }
  return true;
}

struct Judgment {
  Context auxiliary;    // Γ
  Context multiplexor;  // Δ
  Context linear;       // Θ
  Name subject;
  Type offered;
};

inline bool judgment_equal(const Judgment& a, const Judgment& b) {
  return a.subject == b.subject && type_equal(a.offered, b.offered) &&
         context_equal(a.auxiliary, b.auxiliary) &&
         context_equal(a.multiplexor, b.multiplexor) &&
         context_equal(a.linear, b.linear);
}

// Pairwise disjoint context domains, subject in none of them.
inline bool judgment_wellformed(const Judgment& j) {
  for (const auto& [name, ty] : j.auxiliary) {
    if (j.multiplexor.count(name) || j.linear.count(name)) return false;
    if (name == j.subject) return false;
  }
  for (const auto& [name, ty] : j.multiplexor) {
    if (j.linear.count(name)) return false;
    if (name == j.subject) return false;
  }
  if (j.linear.count(j.subject)) return false;
  return true;
}

inline unsigned context_depth(const Context& c) {
  unsigned d = 0;
  for (const auto& [name, ty] : c) d = std::max(d, type_depth(ty));
  return d;
}

inline unsigned judgment_depth(const Judgment& j) {
  unsigned d = type_depth(j.offered);
  d = std::max(d, context_depth(j.auxiliary));
  d = std::max(d, context_depth(j.multiplexor));
  d = std::max(d, context_depth(j.linear));
  return d;
}

namespace detail {

inline void print_context(const Context& c, std::ostream& os) {
  os << "{";
  bool first = true;
  for (const auto& [name, ty] : c) {
    if (!first) os << ", ";
    first = false;
    os << name << ": " << type_to_string(ty);
  }
  os << "}";
}

}  // namespace detail

inline std::string judgment_to_string(const Judgment& j) {
  std::ostringstream os;
  os << "G: ";
  detail::print_context(j.auxiliary, os);
  os << " ; D: ";
  detail::print_context(j.multiplexor, os);
  os << " ; T: ";
  detail::print_context(j.linear, os);
  os << " |- " << j.subject << " : " << type_to_string(j.offered);
  return os.str();
}

namespace detail {

class JudgmentParser {
 public:
  explicit JudgmentParser(const std::string& text) : text_(text) {}

  Judgment parse() {
    Judgment j;
    expect_word("G");
    expect(':');
    j.auxiliary = parse_context();
    expect(';');
    expect_word("D");
    expect(':');
    j.multiplexor = parse_context();
    expect(';');
    expect_word("T");
    expect(':');
    j.linear = parse_context();
    expect_str("|-");
    j.subject = parse_ident();
    expect(':');
    TypeParser tp(text_, pos_, line_, col_);
    j.offered = tp.parse();
    pos_ = tp.pos();
    line_ = tp.line();
    col_ = tp.col();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input after judgment");
    if (!judgment_wellformed(j)) fail("judgment contexts overlap");
    return j;
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
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      advance();
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    advance();
  }

  void expect_str(const std::string& s) {
    skip_ws();
    if (text_.compare(pos_, s.size(), s) != 0) fail("expected '" + s + "'");
    for (size_t i = 0; i < s.size(); ++i) advance();
  }

  void expect_word(const std::string& w) {
    skip_ws();
    if (text_.compare(pos_, w.size(), w) != 0) fail("expected '" + w + "'");
    for (size_t i = 0; i < w.size(); ++i) advance();
  }

  Name parse_ident() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')
        advance();
      else
        break;
    }
    if (start == pos_) fail("expected a name");
    return text_.substr(start, pos_ - start);
  }

  Context parse_context() {
    Context c;
    expect('{');
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '}') {
      advance();
      return c;
    }
    for (;;) {
      Name n = parse_ident();
      expect(':');
      skip_ws();
      TypeParser tp(text_, pos_, line_, col_);
      Type t = tp.parse();
      pos_ = tp.pos();
      line_ = tp.line();
      col_ = tp.col();
      if (c.count(n) != 0) fail("name bound twice in context: " + n);
      c[n] = t;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        advance();
        continue;
      }
      expect('}');
      return c;
    }
  }
};

}  // namespace detail

inline Judgment parse_judgment(const std::string& text) {
  detail::JudgmentParser parser(text);
  return parser.parse();
}

}  // namespace softpi
