#pragma once

#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "softpi/names.hpp"
#include "softpi/parse_error.hpp"
#include "softpi/process.hpp"
#include "softpi/types.hpp"

namespace softpi {

// One constructor per typing rule. chan is the rule channel or offered
// subject; arg is the secondary name of the rule (bound name, payload, or
// the server input binder of the exponential cuts); ann is the branch
// type annotation of the injection and projection rules; aux lists the
// auxiliary channels of a replicated server in recorded order.
enum class TermKind {
  OneL,
  OneR,
  TensorL,
  TensorR,
  LolliL,
  LolliR,
  PlusL,
  PlusR1,
  PlusR2,
  WithL1,
  WithL2,
  WithR,
  FlatSharp,
  FlatBang,
  BangLSharp,
  BangLBang,
  BangR,
  Cut,
  CutBang,
  CutSharp
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  TermKind kind = TermKind::OneR;
  Name chan;
  Name arg;
  Type ann;
  std::vector<Name> aux;
  Term left;
  Term right;
};

inline Term make_term(TermKind kind, Name chan, Name arg, Type ann,
                      std::vector<Name> aux, Term left, Term right) {
  auto node = std::make_shared<TermNode>();
  node->kind = kind;
  node->chan = std::move(chan);
  node->arg = std::move(arg);
  node->ann = std::move(ann);
  node->aux = std::move(aux);
  node->left = std::move(left);
  node->right = std::move(right);
  return node;
}

inline Term one_r(Name subject) {
  return make_term(TermKind::OneR, std::move(subject), {}, nullptr, {}, nullptr,
                   nullptr);
}
inline Term one_l(Name chan, Term body) {
  return make_term(TermKind::OneL, std::move(chan), {}, nullptr, {},
                   std::move(body), nullptr);
}
inline Term tens_l(Name chan, Name bound, Term body) {
  return make_term(TermKind::TensorL, std::move(chan), std::move(bound),
                   nullptr, {}, std::move(body), nullptr);
}
inline Term tens_r(Name subject, Name payload, Term left, Term right) {
  return make_term(TermKind::TensorR, std::move(subject), std::move(payload),
                   nullptr, {}, std::move(left), std::move(right));
}
inline Term lolli_l(Name chan, Name payload, Term left, Term right) {
  return make_term(TermKind::LolliL, std::move(chan), std::move(payload),
                   nullptr, {}, std::move(left), std::move(right));
}
inline Term lolli_r(Name subject, Name bound, Term body) {
  return make_term(TermKind::LolliR, std::move(subject), std::move(bound),
                   nullptr, {}, std::move(body), nullptr);
}
inline Term plus_l(Name chan, Term left, Term right) {
  return make_term(TermKind::PlusL, std::move(chan), {}, nullptr, {},
                   std::move(left), std::move(right));
}
inline Term plus_r1(Name subject, Type other, Term body) {
  return make_term(TermKind::PlusR1, std::move(subject), {}, std::move(other),
                   {}, std::move(body), nullptr);
}
inline Term plus_r2(Name subject, Type other, Term body) {
  return make_term(TermKind::PlusR2, std::move(subject), {}, std::move(other),
                   {}, std::move(body), nullptr);
}
inline Term with_l1(Name chan, Type other, Term body) {
  return make_term(TermKind::WithL1, std::move(chan), {}, std::move(other), {},
                   std::move(body), nullptr);
}
inline Term with_l2(Name chan, Type other, Term body) {
  return make_term(TermKind::WithL2, std::move(chan), {}, std::move(other), {},
                   std::move(body), nullptr);
}
inline Term with_r(Name subject, Term left, Term right) {
  return make_term(TermKind::WithR, std::move(subject), {}, nullptr, {},
                   std::move(left), std::move(right));
}
inline Term flat_sharp(Name chan, Name bound, Term body) {
  return make_term(TermKind::FlatSharp, std::move(chan), std::move(bound),
                   nullptr, {}, std::move(body), nullptr);
}
inline Term flat_bang(Name chan, Name bound, Term body) {
  return make_term(TermKind::FlatBang, std::move(chan), std::move(bound),
                   nullptr, {}, std::move(body), nullptr);
}
inline Term bang_l_sharp(Name chan, Term body) {
  return make_term(TermKind::BangLSharp, std::move(chan), {}, nullptr, {},
                   std::move(body), nullptr);
}
inline Term bang_l_bang(Name chan, Term body) {
  return make_term(TermKind::BangLBang, std::move(chan), {}, nullptr, {},
                   std::move(body), nullptr);
}
inline Term bang_r(Name subject, Name bound, std::vector<Name> aux, Term body) {
  return make_term(TermKind::BangR, std::move(subject), std::move(bound),
                   nullptr, std::move(aux), std::move(body), nullptr);
}
inline Term cut(Name chan, Term left, Term right) {
  return make_term(TermKind::Cut, std::move(chan), {}, nullptr, {},
                   std::move(left), std::move(right));
}
inline Term cut_bang(Name chan, Name bound, Term left, Term right) {
  return make_term(TermKind::CutBang, std::move(chan), std::move(bound),
                   nullptr, {}, std::move(left), std::move(right));
}
inline Term cut_sharp(Name chan, Name bound, Term left, Term right) {
  return make_term(TermKind::CutSharp, std::move(chan), std::move(bound),
                   nullptr, {}, std::move(left), std::move(right));
}

// Binding structure of each constructor. The cut channel is bound in both
// premises; the exponential cuts bind arg in the left premise and chan in
// the right one; payload carriers bind arg in the left premise only.
inline bool term_binds_arg_in_left(TermKind k) {
  switch (k) {
    case TermKind::TensorL:
    case TermKind::TensorR:
    case TermKind::LolliL:
    case TermKind::LolliR:
    case TermKind::FlatSharp:
    case TermKind::FlatBang:
    case TermKind::BangR:
    case TermKind::CutBang:
    case TermKind::CutSharp:
      return true;
    default:
      return false;
  }
}

inline bool term_binds_chan_in_left(TermKind k) { return k == TermKind::Cut; }
inline bool term_binds_chan_in_right(TermKind k) {
  return k == TermKind::Cut || k == TermKind::CutBang || k == TermKind::CutSharp;
}

// chan is a free occurrence at the node for every rule whose channel
// appears in its own conclusion.
inline bool term_chan_free(TermKind k) {
  return !term_binds_chan_in_left(k) && !term_binds_chan_in_right(k);
}

inline bool term_equal(const Term& a, const Term& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->chan != b->chan || a->arg != b->arg) return false;
  if ((a->ann == nullptr) != (b->ann == nullptr)) return false;
  if (a->ann && !type_equal(a->ann, b->ann)) return false;
  if (a->aux != b->aux) return false;
  return term_equal(a->left, b->left) && term_equal(a->right, b->right);
}

inline void term_free_names_into(const Term& t, NameSet& bound, NameSet& out) {
  if (!t) return;
  auto use = [&](const Name& n) {
    if (!n.empty() && bound.count(n) == 0) out.insert(n);
  };
  if (term_chan_free(t->kind)) use(t->chan);
  for (const Name& n : t->aux) use(n);
  auto scoped = [&](const Term& child, const Name& binder) {
    if (!child) return;
    if (binder.empty() || bound.count(binder) != 0) {
      term_free_names_into(child, bound, out);
    } else {
      bound.insert(binder);
      term_free_names_into(child, bound, out);
      bound.erase(binder);
    }
  };
  Name left_binder;
  if (term_binds_arg_in_left(t->kind)) left_binder = t->arg;
  if (term_binds_chan_in_left(t->kind)) left_binder = t->chan;
  scoped(t->left, left_binder);
  Name right_binder;
  if (term_binds_chan_in_right(t->kind)) right_binder = t->chan;
  scoped(t->right, right_binder);
}

inline NameSet term_free_names(const Term& t) {
  NameSet bound, out;
  term_free_names_into(t, bound, out);
  return out;
}

inline void term_all_names_into(const Term& t, NameSet& out) {
  if (!t) return;
  if (!t->chan.empty()) out.insert(t->chan);
  if (!t->arg.empty()) out.insert(t->arg);
  for (const Name& n : t->aux) out.insert(n);
  term_all_names_into(t->left, out);
  term_all_names_into(t->right, out);
}

inline NameSet term_all_names(const Term& t) {
  NameSet out;
  term_all_names_into(t, out);
  return out;
}

// Capture-avoiding replacement of free x by v; colliding binders are
// renamed with appended primes. The plain cut shares one binder across
// both premises; exponential cuts bind arg on the left and chan on the
// right independently.
inline Term term_rename(const Term& t, const Name& x, const Name& v) {
  if (!t || x == v) return t;
  Name chan = t->chan;
  Name arg = t->arg;
  std::vector<Name> aux = t->aux;
  if (term_chan_free(t->kind) && chan == x) chan = v;
  for (Name& n : aux)
    if (n == x) n = v;

  Term left = t->left;
  Term right = t->right;

  if (t->kind == TermKind::Cut) {
    if (t->chan == x) {
      return make_term(t->kind, chan, arg, t->ann, aux, left, right);
    }
    if (t->chan == v) {
      NameSet avoid = term_free_names(left);
      NameSet rf = term_free_names(right);
      avoid.insert(rf.begin(), rf.end());
      avoid.insert(x);
      avoid.insert(v);
      Name renamed = fresh_name(t->chan, avoid);
      chan = renamed;
      left = term_rename(left, t->chan, renamed);
      right = term_rename(right, t->chan, renamed);
    }
    return make_term(t->kind, chan, arg, t->ann, aux, term_rename(left, x, v),
                     term_rename(right, x, v));
  }

  Name left_binder = term_binds_arg_in_left(t->kind) ? t->arg : Name{};
  Name right_binder = term_binds_chan_in_right(t->kind) ? t->chan : Name{};

  if (left) {
    if (!left_binder.empty() && left_binder == x) {
      // Shadowed: left untouched.
    } else if (!left_binder.empty() && left_binder == v) {
      NameSet avoid = term_free_names(left);
      avoid.insert(x);
      avoid.insert(v);
      Name renamed = fresh_name(left_binder, avoid);
      arg = renamed;
      left = term_rename(term_rename(left, left_binder, renamed), x, v);
    } else {
      left = term_rename(left, x, v);
    }
  }
  if (right) {
    if (!right_binder.empty() && right_binder == x) {
      // Shadowed: right untouched.
    } else if (!right_binder.empty() && right_binder == v) {
      NameSet avoid = term_free_names(right);
      avoid.insert(x);
      avoid.insert(v);
      Name renamed = fresh_name(right_binder, avoid);
      chan = renamed;
      right = term_rename(term_rename(right, right_binder, renamed), x, v);
    } else {
      right = term_rename(right, x, v);
    }
  }
  return make_term(t->kind, chan, arg, t->ann, aux, left, right);
}

namespace detail {

// Serialization with binder-indexed names: alpha-equivalent terms share
// one key, and the key orders terms totally for search dedup.
inline void term_key_rec(const Term& t, std::map<Name, int>& env, int& next,
                         std::string& out) {
  if (!t) {
    out += "_";
    return;
  }
  auto emit_name = [&](const Name& n) {
    auto it = env.find(n);
    if (it != env.end())
      out += "b" + std::to_string(it->second) + ";";
    else
      out += "f" + n + ";";
  };
  out += std::to_string(static_cast<int>(t->kind)) + "(";
  if (term_chan_free(t->kind)) emit_name(t->chan);
  if (t->ann) out += "[" + type_to_string(t->ann) + "]";
  for (const Name& n : t->aux) emit_name(n);

  Name left_binder;
  if (term_binds_arg_in_left(t->kind)) left_binder = t->arg;
  if (term_binds_chan_in_left(t->kind)) left_binder = t->chan;
  Name right_binder;
  if (term_binds_chan_in_right(t->kind)) right_binder = t->chan;

  if (t->left) {
    if (!left_binder.empty()) {
      auto saved = env.find(left_binder) != env.end()
                       ? std::optional<int>(env[left_binder])
                       : std::nullopt;
      env[left_binder] = next++;
      term_key_rec(t->left, env, next, out);
      if (saved)
        env[left_binder] = *saved;
      else
        env.erase(left_binder);
    } else {
      term_key_rec(t->left, env, next, out);
    }
  }
  if (t->right) {
    out += "|";
    if (!right_binder.empty()) {
      auto saved = env.find(right_binder) != env.end()
                       ? std::optional<int>(env[right_binder])
                       : std::nullopt;
      env[right_binder] = next++;
      term_key_rec(t->right, env, next, out);
      if (saved)
        env[right_binder] = *saved;
      else
        env.erase(right_binder);
    } else {
      term_key_rec(t->right, env, next, out);
    }
  }
  out += ")";
}

}  // namespace detail

inline std::string term_key(const Term& t) {
  std::map<Name, int> env;
  int next = 0;
  std::string out;
  detail::term_key_rec(t, env, next, out);
  return out;
}

inline bool term_alpha_eq(const Term& a, const Term& b) {
  return term_key(a) == term_key(b);
}

// Process extraction, one clause per constructor.
inline Process extract(const Term& t) {
  switch (t->kind) {
    case TermKind::OneR:
      return nil();
    case TermKind::OneL:
    case TermKind::BangLSharp:
    case TermKind::BangLBang:
      return extract(t->left);
    case TermKind::TensorL:
      return receive(t->chan, t->arg, extract(t->left));
    case TermKind::TensorR:
    case TermKind::LolliL:
      return nu(t->arg,
                send(t->chan, t->arg, par(extract(t->left), extract(t->right))));
    case TermKind::LolliR:
      return receive(t->chan, t->arg, extract(t->left));
    case TermKind::PlusL:
    case TermKind::WithR:
      return choice(t->chan, extract(t->left), extract(t->right));
    case TermKind::PlusR1:
    case TermKind::WithL1:
      return sel_l(t->chan, extract(t->left));
    case TermKind::PlusR2:
    case TermKind::WithL2:
      return sel_r(t->chan, extract(t->left));
    case TermKind::FlatSharp:
    case TermKind::FlatBang:
      return nu(t->arg, send(t->chan, t->arg, extract(t->left)));
    case TermKind::BangR:
      return server(t->chan, t->arg, extract(t->left));
    case TermKind::Cut:
      return nu(t->chan, par(extract(t->left), extract(t->right)));
    case TermKind::CutBang:
    case TermKind::CutSharp:
      return nu(t->chan, par(server(t->chan, t->arg, extract(t->left)),
                             extract(t->right)));
  }
  return nil();
}

inline const char* term_head(TermKind k) {
  switch (k) {
    case TermKind::OneL:
      return "1L";
    case TermKind::OneR:
      return "1R";
    case TermKind::TensorL:
      return "tensL";
    case TermKind::TensorR:
      return "tensR";
    case TermKind::LolliL:
      return "lolliL";
    case TermKind::LolliR:
      return "lolliR";
    case TermKind::PlusL:
      return "plusL";
    case TermKind::PlusR1:
      return "plusR1";
    case TermKind::PlusR2:
      return "plusR2";
    case TermKind::WithL1:
      return "withL1";
    case TermKind::WithL2:
      return "withL2";
    case TermKind::WithR:
      return "withR";
    case TermKind::FlatBang:
      return "flat!";
    case TermKind::FlatSharp:
      return "flat#";
    case TermKind::BangLBang:
      return "bangL!";
    case TermKind::BangLSharp:
      return "bangL#";
    case TermKind::BangR:
      return "bangR";
    case TermKind::Cut:
      return "cut";
    case TermKind::CutBang:
      return "cut!";
    case TermKind::CutSharp:
      return "cut#";
  }
  return "?";
}

namespace detail {

inline void print_term_rec(const Term& t, std::ostream& os) {
  os << "(" << term_head(t->kind);
  switch (t->kind) {
    case TermKind::OneR:
      os << " " << t->chan;
      break;
    case TermKind::OneL:
    case TermKind::PlusL:
    case TermKind::WithR:
    case TermKind::BangLSharp:
    case TermKind::BangLBang:
    case TermKind::Cut:
      os << " " << t->chan;
      break;
    case TermKind::TensorL:
    case TermKind::TensorR:
    case TermKind::LolliL:
    case TermKind::LolliR:
    case TermKind::FlatSharp:
    case TermKind::FlatBang:
    case TermKind::CutBang:
    case TermKind::CutSharp:
      os << " " << t->chan << " " << t->arg;
      break;
    case TermKind::PlusR1:
    case TermKind::PlusR2:
    case TermKind::WithL1:
    case TermKind::WithL2:
      os << " " << t->chan << " " << type_to_string(t->ann);
      break;
    case TermKind::BangR: {
      os << " " << t->chan << " " << t->arg << " (";
      bool first = true;
      for (const Name& n : t->aux) {
        if (!first) os << " ";
        first = false;
        os << n;
      }
      os << ")";
      break;
    }
  }
  if (t->left) {
    os << " ";
    print_term_rec(t->left, os);
  }
  if (t->right) {
    os << " ";
    print_term_rec(t->right, os);
  }
  os << ")";
}

}  // namespace detail

inline std::string term_to_string(const Term& t) {
  std::ostringstream os;
  detail::print_term_rec(t, os);
  return os.str();
}

namespace detail {

class TermParser {
 public:
  explicit TermParser(const std::string& text) : text_(text) {}

  Term parse_whole() {
    Term t = parse_term();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input after proof term");
    return t;
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

  std::string parse_symbol() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
          c == '\'' || c == '!' || c == '#')
        advance();
      else
        break;
    }
    if (start == pos_) fail("expected a symbol");
    return text_.substr(start, pos_ - start);
  }

  Name parse_name() {
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

  Type parse_ann() {
    skip_ws();
    TypeParser tp(text_, pos_, line_, col_);
    Type t = tp.parse();
    pos_ = tp.pos();
    line_ = tp.line();
    col_ = tp.col();
    return t;
  }

  Term parse_term() {
    expect('(');
    std::string head = parse_symbol();
    Term result;
    if (head == "1R") {
      result = one_r(parse_name());
    } else if (head == "1L") {
      Name c = parse_name();
      result = one_l(c, parse_term());
    } else if (head == "tensL") {
      Name c = parse_name();
      Name y = parse_name();
      result = tens_l(c, y, parse_term());
    } else if (head == "tensR") {
      Name c = parse_name();
      Name y = parse_name();
      Term l = parse_term();
      result = tens_r(c, y, l, parse_term());
    } else if (head == "lolliL") {
      Name c = parse_name();
      Name y = parse_name();
      Term l = parse_term();
      result = lolli_l(c, y, l, parse_term());
    } else if (head == "lolliR") {
      Name c = parse_name();
      Name y = parse_name();
      result = lolli_r(c, y, parse_term());
    } else if (head == "plusL") {
      Name c = parse_name();
      Term l = parse_term();
      result = plus_l(c, l, parse_term());
    } else if (head == "plusR1" || head == "plusR2") {
      Name c = parse_name();
      Type ann = parse_ann();
      Term body = parse_term();
      result = head == "plusR1" ? plus_r1(c, ann, body) : plus_r2(c, ann, body);
    } else if (head == "withL1" || head == "withL2") {
      Name c = parse_name();
      Type ann = parse_ann();
      Term body = parse_term();
      result = head == "withL1" ? with_l1(c, ann, body) : with_l2(c, ann, body);
    } else if (head == "withR") {
      Name c = parse_name();
      Term l = parse_term();
      result = with_r(c, l, parse_term());
    } else if (head == "flat!") {
      Name c = parse_name();
      Name y = parse_name();
      result = flat_bang(c, y, parse_term());
    } else if (head == "flat#") {
      Name c = parse_name();
      Name y = parse_name();
      result = flat_sharp(c, y, parse_term());
    } else if (head == "bangL!") {
      Name c = parse_name();
      result = bang_l_bang(c, parse_term());
    } else if (head == "bangL#") {
      Name c = parse_name();
      result = bang_l_sharp(c, parse_term());
    } else if (head == "bangR") {
      Name c = parse_name();
      Name y = parse_name();
      expect('(');
      std::vector<Name> aux;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != ')') {
        aux.push_back(parse_name());
        skip_ws();
      }
      expect(')');
      result = bang_r(c, y, aux, parse_term());
    } else if (head == "cut") {
      Name c = parse_name();
      Term l = parse_term();
      result = cut(c, l, parse_term());
    } else if (head == "cut!") {
      Name c = parse_name();
      Name y = parse_name();
      Term l = parse_term();
      result = cut_bang(c, y, l, parse_term());
    } else if (head == "cut#") {
      Name c = parse_name();
      Name y = parse_name();
      Term l = parse_term();
      result = cut_sharp(c, y, l, parse_term());
    } else {
      fail("unknown rule head '" + head + "'");
    }
    expect(')');
    return result;
  }
};

}  // namespace detail

inline Term parse_term(const std::string& text) {
  detail::TermParser parser(text);
  return parser.parse_whole();
}

}  // namespace softpi
