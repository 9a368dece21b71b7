#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "softpi/proof.hpp"
#include "softpi/types.hpp"

namespace softpi {

enum class ErrorClass {
  NameClash,
  ContextMismatch,
  TypeMismatch,
  MultiplexorRequired,
  AuxiliaryNonlinear,
  DeclaredMismatch,
  NotTypable,
  RedexNotFound,
  SearchExhausted,
  Unterminated
};

inline const char* error_class_name(ErrorClass c) {
  switch (c) {
    case ErrorClass::NameClash:
      return "NameClash";
    case ErrorClass::ContextMismatch:
      return "ContextMismatch";
    case ErrorClass::TypeMismatch:
      return "TypeMismatch";
    case ErrorClass::MultiplexorRequired:
      return "MultiplexorRequired";
    case ErrorClass::AuxiliaryNonlinear:
      return "AuxiliaryNonlinear";
    case ErrorClass::DeclaredMismatch:
      return "DeclaredMismatch";
    case ErrorClass::NotTypable:
      return "NotTypable";
    case ErrorClass::RedexNotFound:
      return "RedexNotFound";
    case ErrorClass::SearchExhausted:
      return "SearchExhausted";
    case ErrorClass::Unterminated:
      return "Unterminated";
  }
  return "?";
}

struct TypeError : std::runtime_error {
  ErrorClass cls;
  TypeError(ErrorClass cls_, const std::string& msg)
      : std::runtime_error(std::string(error_class_name(cls_)) + ": " + msg),
        cls(cls_) {}
};

struct TypingEvidence {
  Judgment judgment;
  std::map<std::string, Judgment> per_node;
};

// Free-occurrence count in a process, the two branches of a case counted
// as one occurrence.
inline Nat occ_count(const Process& p, const Name& x) {
  if (!p) return 0;
  Nat self = 0;
  switch (p->kind) {
    case ProcKind::Nil:
      return 0;
    case ProcKind::Par:
      return occ_count(p->left, x) + occ_count(p->right, x);
    case ProcKind::New:
      return p->chan == x ? Nat(0) : occ_count(p->left, x);
    case ProcKind::In:
    case ProcKind::RepIn:
      self = p->chan == x ? 1 : 0;
      if (p->arg == x) return self;
      return self + occ_count(p->left, x);
    case ProcKind::Out:
      self = (p->chan == x ? 1 : 0) + (p->arg == x ? 1 : 0);
      return self + occ_count(p->left, x);
    case ProcKind::SelL:
    case ProcKind::SelR:
      self = p->chan == x ? 1 : 0;
      return self + occ_count(p->left, x);
    case ProcKind::Case:
      self = p->chan == x ? 1 : 0;
      return self + nat_max(occ_count(p->left, x), occ_count(p->right, x));
  }
  return 0;
}

namespace detail {

[[noreturn]] inline void type_fail(ErrorClass cls, const std::string& rule,
                                   const Name& chan, const std::string& msg) {
  throw TypeError(cls, "rule " + rule + " on channel " + chan + ": " + msg);
}

// Disjoint union of auxiliary contexts; a shared name is a nonlinear use.
inline Context merge_auxiliary(const Context& a, const Context& b,
                               const std::string& rule, const Name& chan) {
  Context out = a;
  for (const auto& [name, ty] : b) {
    if (out.count(name) != 0)
      type_fail(ErrorClass::AuxiliaryNonlinear, rule, chan,
                "auxiliary channel " + name + " used in both premises");
    out[name] = ty;
  }
  return out;
}

// Union with agreement on shared names for multiplexor contexts and for
// auxiliary contexts of additive branches.
inline Context merge_agreeing(const Context& a, const Context& b,
                              const std::string& rule, const Name& chan,
                              const char* what) {
  Context out = a;
  for (const auto& [name, ty] : b) {
    auto it = out.find(name);
    if (it != out.end()) {
      if (!type_equal(it->second, ty))
        type_fail(ErrorClass::NameClash, rule, chan,
                  std::string(what) + " channel " + name +
                      " carries two different types");
    } else {
      out[name] = ty;
    }
  }
  return out;
}

// Disjoint union of linear contexts.
inline Context merge_linear(const Context& a, const Context& b,
                            const std::string& rule, const Name& chan) {
  Context out = a;
  for (const auto& [name, ty] : b) {
    if (out.count(name) != 0)
      type_fail(ErrorClass::NameClash, rule, chan,
                "linear channel " + name + " bound in both premises");
    out[name] = ty;
  }
  return out;
}

inline Type require_linear(const Judgment& j, const Name& n,
                           const std::string& rule, const Name& chan) {
  auto it = j.linear.find(n);
  if (it == j.linear.end())
    type_fail(ErrorClass::ContextMismatch, rule, chan,
              "premise linear context lacks " + n);
  return it->second;
}

inline void require_wellformed(const Judgment& j, const std::string& rule,
                               const Name& chan) {
  if (!judgment_wellformed(j))
    type_fail(ErrorClass::NameClash, rule, chan,
              "conclusion contexts overlap or capture the subject");
}

inline void require_empty(const Context& c, const char* slot,
                          const std::string& rule, const Name& chan) {
  if (!c.empty())
    type_fail(ErrorClass::ContextMismatch, rule, chan,
              std::string("premise must have empty ") + slot + " context");
}

inline void require_subject(const Judgment& j, const Name& n,
                            const std::string& rule, const Name& chan) {
  if (j.subject != n)
    type_fail(ErrorClass::ContextMismatch, rule, chan,
              "premise must offer " + n + " but offers " + j.subject);
}

inline bool mentions(const Judgment& j, const Name& n) {
  return j.subject == n || j.auxiliary.count(n) != 0 ||
         j.multiplexor.count(n) != 0 || j.linear.count(n) != 0;
}

inline Judgment synth(const Term& t, const std::string& path,
                      std::map<std::string, Judgment>& per_node);

inline Judgment synth_child(const Term& t, int index, const std::string& path,
                            std::map<std::string, Judgment>& per_node) {
  const Term& child = index == 0 ? t->left : t->right;
  std::string child_path =
      path.empty() ? std::to_string(index) : path + "/" + std::to_string(index);
  return synth(child, child_path, per_node);
}

inline Judgment synth(const Term& t, const std::string& path,
                      std::map<std::string, Judgment>& per_node) {
  Judgment out;
  const std::string rule = term_head(t->kind);
  switch (t->kind) {
    case TermKind::OneR: {
      out.subject = t->chan;
      out.offered = ty_one();
      break;
    }
    case TermKind::OneL: {
      Judgment p = synth_child(t, 0, path, per_node);
      if (mentions(p, t->chan))
        type_fail(ErrorClass::NameClash, rule, t->chan,
                  "channel already appears in the premise judgment");
      out = p;
      out.linear[t->chan] = ty_one();
      break;
    }
    case TermKind::TensorL: {
      Judgment p = synth_child(t, 0, path, per_node);
      Type a = require_linear(p, t->arg, rule, t->chan);
      Type b = require_linear(p, t->chan, rule, t->chan);
      out = p;
      out.linear.erase(t->arg);
      out.linear.erase(t->chan);
      out.linear[t->chan] = ty_tensor(a, b);
      break;
    }
    case TermKind::TensorR: {
      Judgment l = synth_child(t, 0, path, per_node);
      Judgment r = synth_child(t, 1, path, per_node);
      if (t->arg == t->chan)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "payload name equals the subject");
      require_subject(l, t->arg, rule, t->chan);
      require_subject(r, t->chan, rule, t->chan);
      if (mentions(r, t->arg))
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "payload " + t->arg + " escapes into the second premise");
      out.auxiliary = merge_auxiliary(l.auxiliary, r.auxiliary, rule, t->chan);
      out.multiplexor =
          merge_agreeing(l.multiplexor, r.multiplexor, rule, t->chan,
                         "multiplexor");
      out.linear = merge_linear(l.linear, r.linear, rule, t->chan);
      out.subject = t->chan;
      out.offered = ty_tensor(l.offered, r.offered);
      break;
    }
    case TermKind::LolliL: {
      Judgment l = synth_child(t, 0, path, per_node);
      Judgment r = synth_child(t, 1, path, per_node);
      if (t->arg == t->chan)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "payload name equals the rule channel");
      require_subject(l, t->arg, rule, t->chan);
      Type b = require_linear(r, t->chan, rule, t->chan);
      if (mentions(l, t->chan))
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "rule channel appears in the first premise");
      if (mentions(r, t->arg))
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "payload " + t->arg + " escapes into the second premise");
      out.auxiliary = merge_auxiliary(l.auxiliary, r.auxiliary, rule, t->chan);
      out.multiplexor =
          merge_agreeing(l.multiplexor, r.multiplexor, rule, t->chan,
                         "multiplexor");
      Context theta_r = r.linear;
      theta_r.erase(t->chan);
      out.linear = merge_linear(l.linear, theta_r, rule, t->chan);
      if (out.linear.count(t->chan) != 0)
        type_fail(ErrorClass::NameClash, rule, t->chan,
                  "rule channel already consumed by the first premise");
      out.linear[t->chan] = ty_lolli(l.offered, b);
      out.subject = r.subject;
      out.offered = r.offered;
      break;
    }
    case TermKind::LolliR: {
      Judgment p = synth_child(t, 0, path, per_node);
      require_subject(p, t->chan, rule, t->chan);
      Type a = require_linear(p, t->arg, rule, t->chan);
      out = p;
      out.linear.erase(t->arg);
      out.offered = ty_lolli(a, p.offered);
      break;
    }
    case TermKind::PlusL: {
      Judgment l = synth_child(t, 0, path, per_node);
      Judgment r = synth_child(t, 1, path, per_node);
      Type a = require_linear(l, t->chan, rule, t->chan);
      Type b = require_linear(r, t->chan, rule, t->chan);
      if (l.subject != r.subject || !type_equal(l.offered, r.offered))
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "branches offer different sessions");
      Context tl = l.linear;
      tl.erase(t->chan);
      Context tr = r.linear;
      tr.erase(t->chan);
      if (!context_equal(tl, tr))
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "branches consume different linear contexts");
      out.auxiliary =
          merge_agreeing(l.auxiliary, r.auxiliary, rule, t->chan, "auxiliary");
      out.multiplexor = merge_agreeing(l.multiplexor, r.multiplexor, rule,
                                       t->chan, "multiplexor");
      out.linear = tl;
      out.linear[t->chan] = ty_plus(a, b);
      out.subject = l.subject;
      out.offered = l.offered;
      break;
    }
    case TermKind::PlusR1:
    case TermKind::PlusR2: {
      Judgment p = synth_child(t, 0, path, per_node);
      require_subject(p, t->chan, rule, t->chan);
      out = p;
      out.offered = t->kind == TermKind::PlusR1 ? ty_plus(p.offered, t->ann)
                                                : ty_plus(t->ann, p.offered);
      break;
    }
    case TermKind::WithL1:
    case TermKind::WithL2: {
      Judgment p = synth_child(t, 0, path, per_node);
      Type got = require_linear(p, t->chan, rule, t->chan);
      out = p;
      out.linear.erase(t->chan);
      out.linear[t->chan] = t->kind == TermKind::WithL1
                                ? ty_with(got, t->ann)
                                : ty_with(t->ann, got);
      break;
    }
    case TermKind::WithR: {
      Judgment l = synth_child(t, 0, path, per_node);
      Judgment r = synth_child(t, 1, path, per_node);
      require_subject(l, t->chan, rule, t->chan);
      require_subject(r, t->chan, rule, t->chan);
      if (!context_equal(l.linear, r.linear))
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "branches consume different linear contexts");
      out.auxiliary =
          merge_agreeing(l.auxiliary, r.auxiliary, rule, t->chan, "auxiliary");
      out.multiplexor = merge_agreeing(l.multiplexor, r.multiplexor, rule,
                                       t->chan, "multiplexor");
      out.linear = l.linear;
      out.subject = t->chan;
      out.offered = ty_with(l.offered, r.offered);
      break;
    }
    case TermKind::FlatSharp: {
      Judgment p = synth_child(t, 0, path, per_node);
      if (t->arg == t->chan)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "payload name equals the rule channel");
      Type a = require_linear(p, t->arg, rule, t->chan);
      out = p;
      out.linear.erase(t->arg);
      if (t->chan == p.subject)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "rule channel equals the offered subject");
      auto it = out.multiplexor.find(t->chan);
      if (it != out.multiplexor.end()) {
        if (!type_equal(it->second, a))
          type_fail(ErrorClass::TypeMismatch, rule, t->chan,
                    "multiplexor channel already carries a different type");
      } else {
        if (out.auxiliary.count(t->chan) != 0 || out.linear.count(t->chan) != 0)
          type_fail(ErrorClass::MultiplexorRequired, rule, t->chan,
                    "channel is committed outside the multiplexor context");
        out.multiplexor[t->chan] = a;
      }
      break;
    }
    case TermKind::FlatBang: {
      Judgment p = synth_child(t, 0, path, per_node);
      if (t->arg == t->chan)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "payload name equals the rule channel");
      Type a = require_linear(p, t->arg, rule, t->chan);
      out = p;
      out.linear.erase(t->arg);
      if (t->chan == p.subject)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "rule channel equals the offered subject");
      if (out.auxiliary.count(t->chan) != 0)
        type_fail(ErrorClass::AuxiliaryNonlinear, rule, t->chan,
                  "auxiliary channel used a second time");
      if (out.multiplexor.count(t->chan) != 0 || out.linear.count(t->chan) != 0)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "channel is already committed in another context");
      out.auxiliary[t->chan] = a;
      break;
    }
    case TermKind::BangLSharp: {
      Judgment p = synth_child(t, 0, path, per_node);
      auto it = p.multiplexor.find(t->chan);
      if (it == p.multiplexor.end())
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "premise multiplexor context lacks the channel");
      out = p;
      Type a = it->second;
      out.multiplexor.erase(t->chan);
      out.linear[t->chan] = ty_bang(a);
      break;
    }
    case TermKind::BangLBang: {
      Judgment p = synth_child(t, 0, path, per_node);
      auto it = p.auxiliary.find(t->chan);
      if (it == p.auxiliary.end())
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "premise auxiliary context lacks the channel");
      out = p;
      Type a = it->second;
      out.auxiliary.erase(t->chan);
      out.linear[t->chan] = ty_bang(a);
      break;
    }
    case TermKind::BangR: {
      Judgment p = synth_child(t, 0, path, per_node);
      if (t->chan == t->arg)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "subject equals the input binder");
      require_subject(p, t->arg, rule, t->chan);
      require_empty(p.multiplexor, "multiplexor", rule, t->chan);
      require_empty(p.linear, "linear", rule, t->chan);
      NameSet listed(t->aux.begin(), t->aux.end());
      if (listed.size() != t->aux.size())
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "auxiliary name listed twice");
      NameSet premise_aux;
      for (const auto& [name, ty] : p.auxiliary) premise_aux.insert(name);
      if (listed != premise_aux)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "listed auxiliary names disagree with the premise");
      if (p.auxiliary.count(t->chan) != 0)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "subject occurs in the premise auxiliary context");
      Process body = extract(t->left);
      for (const auto& [name, ty] : p.auxiliary) {
        if (occ_count(body, name) != 1)
          type_fail(ErrorClass::AuxiliaryNonlinear, rule, t->chan,
                    "auxiliary channel " + name +
                        " must occur free exactly once in the body");
      }
      for (const auto& [name, ty] : p.auxiliary)
        out.linear[name] = ty_bang(ty);
      out.subject = t->chan;
      out.offered = ty_bang(p.offered);
      break;
    }
    case TermKind::Cut: {
      Judgment l = synth_child(t, 0, path, per_node);
      Judgment r = synth_child(t, 1, path, per_node);
      require_subject(l, t->chan, rule, t->chan);
      auto it = r.linear.find(t->chan);
      if (it == r.linear.end())
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "second premise does not consume the cut channel");
      if (!type_equal(it->second, l.offered))
        type_fail(ErrorClass::TypeMismatch, rule, t->chan,
                  "cut formula differs between premises");
      out.auxiliary = merge_auxiliary(l.auxiliary, r.auxiliary, rule, t->chan);
      out.multiplexor = merge_agreeing(l.multiplexor, r.multiplexor, rule,
                                       t->chan, "multiplexor");
      Context theta_r = r.linear;
      theta_r.erase(t->chan);
      out.linear = merge_linear(l.linear, theta_r, rule, t->chan);
      out.subject = r.subject;
      out.offered = r.offered;
      break;
    }
    case TermKind::CutBang: {
      Judgment l = synth_child(t, 0, path, per_node);
      Judgment r = synth_child(t, 1, path, per_node);
      if (t->chan == t->arg)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "cut channel equals the server binder");
      require_subject(l, t->arg, rule, t->chan);
      require_empty(l.multiplexor, "multiplexor", rule, t->chan);
      require_empty(l.linear, "linear", rule, t->chan);
      if (r.subject == t->chan)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "cut channel equals the offered subject");
      if (r.multiplexor.count(t->chan) != 0 || r.linear.count(t->chan) != 0)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "cut channel used outside the auxiliary context");
      auto it = r.auxiliary.find(t->chan);
      if (it != r.auxiliary.end() && !type_equal(it->second, l.offered))
        type_fail(ErrorClass::TypeMismatch, rule, t->chan,
                  "cut formula differs between premises");
      Context gamma_r = r.auxiliary;
      gamma_r.erase(t->chan);
      out.auxiliary = merge_auxiliary(l.auxiliary, gamma_r, rule, t->chan);
      out.multiplexor = r.multiplexor;
      out.linear = r.linear;
      out.subject = r.subject;
      out.offered = r.offered;
      break;
    }
    case TermKind::CutSharp: {
      Judgment l = synth_child(t, 0, path, per_node);
      Judgment r = synth_child(t, 1, path, per_node);
      if (t->chan == t->arg)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "cut channel equals the server binder");
      require_subject(l, t->arg, rule, t->chan);
      require_empty(l.multiplexor, "multiplexor", rule, t->chan);
      require_empty(l.linear, "linear", rule, t->chan);
      if (r.subject == t->chan)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "cut channel equals the offered subject");
      if (r.auxiliary.count(t->chan) != 0 || r.linear.count(t->chan) != 0)
        type_fail(ErrorClass::ContextMismatch, rule, t->chan,
                  "cut channel used outside the multiplexor context");
      auto it = r.multiplexor.find(t->chan);
      if (it != r.multiplexor.end() && !type_equal(it->second, l.offered))
        type_fail(ErrorClass::TypeMismatch, rule, t->chan,
                  "cut formula differs between premises");
      Context delta_r = r.multiplexor;
      delta_r.erase(t->chan);
      out.auxiliary = r.auxiliary;
      out.multiplexor =
          merge_agreeing(l.auxiliary, delta_r, rule, t->chan, "multiplexor");
      out.linear = r.linear;
      out.subject = r.subject;
      out.offered = r.offered;
      break;
    }
  }
  require_wellformed(out, rule, t->chan);
  per_node[path] = out;
  return out;
}

}  // namespace detail

// Minimal judgment at every node, bottom-up.
inline TypingEvidence synthesize(const Term& t) {
  TypingEvidence ev;
  ev.judgment = detail::synth(t, "", ev.per_node);
  return ev;
}

// Declared-judgment validation: linear context and offered session match
// exactly, auxiliary and multiplexor contexts may be weakened.
inline TypingEvidence check(const Term& t, const Judgment& declared) {
  if (!judgment_wellformed(declared))
    throw TypeError(ErrorClass::DeclaredMismatch,
                    "declared judgment contexts overlap");
  TypingEvidence ev = synthesize(t);
  const Judgment& got = ev.judgment;
  if (got.subject != declared.subject)
    throw TypeError(ErrorClass::DeclaredMismatch,
                    "declared subject " + declared.subject +
                        " but the term offers " + got.subject);
  if (!type_equal(got.offered, declared.offered))
    throw TypeError(ErrorClass::DeclaredMismatch,
                    "offered session differs from the declared one");
  if (!context_equal(got.linear, declared.linear))
    throw TypeError(ErrorClass::DeclaredMismatch,
                    "linear context differs from the declared one");
  if (!context_subset(got.auxiliary, declared.auxiliary))
    throw TypeError(ErrorClass::DeclaredMismatch,
                    "auxiliary context is not contained in the declared one");
  if (!context_subset(got.multiplexor, declared.multiplexor))
    throw TypeError(ErrorClass::DeclaredMismatch,
                    "multiplexor context is not contained in the declared one");
  ev.judgment = declared;
  ev.per_node[""] = declared;
  return ev;
}

// Moves every auxiliary use into the multiplexor discipline: dereliction
// and promotion-left switch flavor, exponential cuts turn sharp. Server
// bodies keep their own auxiliary layer.
inline Term lift(const Term& t) {
  if (!t) return t;
  switch (t->kind) {
    case TermKind::FlatBang:
      return flat_sharp(t->chan, t->arg, lift(t->left));
    case TermKind::BangLBang:
      return bang_l_sharp(t->chan, lift(t->left));
    case TermKind::CutBang:
      return cut_sharp(t->chan, t->arg, t->left, lift(t->right));
    case TermKind::CutSharp:
      return cut_sharp(t->chan, t->arg, t->left, lift(t->right));
    case TermKind::BangR:
      return t;
    default: {
      Term l = t->left ? lift(t->left) : t->left;
      Term r = t->right ? lift(t->right) : t->right;
      if (l == t->left && r == t->right) return t;
      return make_term(t->kind, t->chan, t->arg, t->ann, t->aux, l, r);
    }
  }
}

}  // namespace softpi
