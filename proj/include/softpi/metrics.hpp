#pragma once

#include <map>

#include "softpi/typing.hpp"

namespace softpi {

// Nesting level of replicated inputs.
inline Nat bde_process(const Process& p) {
  if (!p) return 0;
  switch (p->kind) {
    case ProcKind::Nil:
      return 0;
    case ProcKind::Par:
    case ProcKind::Case:
      return nat_max(bde_process(p->left), bde_process(p->right));
    case ProcKind::RepIn:
      return 1 + bde_process(p->left);
    case ProcKind::New:
    case ProcKind::In:
    case ProcKind::Out:
    case ProcKind::SelL:
    case ProcKind::SelR:
      return bde_process(p->left);
  }
  return 0;
}

// Nesting level of promotions; exponential cuts box their left premise.
inline Nat bde_term(const Term& t) {
  if (!t) return 0;
  switch (t->kind) {
    case TermKind::OneR:
      return 0;
    case TermKind::BangR:
      return 1 + bde_term(t->left);
    case TermKind::CutBang:
    case TermKind::CutSharp:
      return nat_max(bde_term(t->left) + 1, bde_term(t->right));
    case TermKind::TensorR:
    case TermKind::LolliL:
    case TermKind::PlusL:
    case TermKind::WithR:
    case TermKind::Cut:
      return nat_max(bde_term(t->left), bde_term(t->right));
    default:
      return bde_term(t->left);
  }
}

// Virtual occurrences of the channel w: spawns on w counted once per server
// copy an enclosing exponential cut will fire.
inline Nat foc(const Name& w, const Term& t) {
  if (!t) return 0;
  switch (t->kind) {
    case TermKind::OneR:
      return 0;
    case TermKind::FlatSharp:
    case TermKind::FlatBang:
      return (t->chan == w ? Nat(1) : Nat(0)) + foc(w, t->left);
    case TermKind::BangR:
      return 0;
    case TermKind::TensorR:
    case TermKind::LolliL:
    case TermKind::PlusL:
    case TermKind::WithR:
    case TermKind::Cut:
      return foc(w, t->left) + foc(w, t->right);
    case TermKind::CutBang:
    case TermKind::CutSharp:
      return foc(t->chan, t->right) * foc(w, t->left) + foc(w, t->right);
    default:
      return foc(w, t->left);
  }
}

// Largest spawn count over all promotion-left rule instances.
inline Nat dupf(const Term& t) {
  if (!t) return 0;
  switch (t->kind) {
    case TermKind::OneR:
      return 0;
    case TermKind::BangLSharp:
    case TermKind::BangLBang:
      return nat_max(dupf(t->left), foc(t->chan, t->left));
    case TermKind::TensorR:
    case TermKind::LolliL:
    case TermKind::PlusL:
    case TermKind::WithR:
    case TermKind::Cut:
    case TermKind::CutBang:
    case TermKind::CutSharp:
      return nat_max(dupf(t->left), dupf(t->right));
    default:
      return dupf(t->left);
  }
}

// Weight with every server body counted n times and every exponential-cut
// left premise counted once per spawn of its channel.
inline Nat weip(const Nat& n, const Term& t) {
  if (!t) return 0;
  switch (t->kind) {
    case TermKind::OneR:
      return 0;
    case TermKind::OneL:
    case TermKind::BangLSharp:
    case TermKind::BangLBang:
      return weip(n, t->left);
    case TermKind::TensorL:
    case TermKind::LolliR:
    case TermKind::PlusR1:
    case TermKind::PlusR2:
    case TermKind::WithL1:
    case TermKind::WithL2:
    case TermKind::FlatSharp:
    case TermKind::FlatBang:
      return weip(n, t->left) + 1;
    case TermKind::TensorR:
    case TermKind::LolliL:
    case TermKind::PlusL:
    case TermKind::WithR:
      return weip(n, t->left) + weip(n, t->right) + 1;
    case TermKind::Cut:
      return weip(n, t->left) + weip(n, t->right);
    case TermKind::CutBang:
    case TermKind::CutSharp:
      return foc(t->chan, t->right) * weip(n, t->left) + weip(n, t->right);
    case TermKind::BangR:
      return n * (weip(n, t->left) + 1);
  }
  return 0;
}

inline Nat wei(const Term& t) { return weip(dupf(t), t); }

inline Nat size_term(const Term& t) { return proc_size(extract(t)); }

struct WeightReport {
  Nat boxDepth;
  Nat dupFactor;
  Nat weight;
  Nat termSize;
  std::map<Name, Nat> perChannelFoc;
};

// Full metric record for a typable term; spawn counts cover every channel of
// the auxiliary and multiplexor contexts.
inline WeightReport report(const Term& t) {
  TypingEvidence ev = synthesize(t);
  WeightReport r;
  r.boxDepth = bde_term(t);
  r.dupFactor = dupf(t);
  r.weight = weip(r.dupFactor, t);
  r.termSize = size_term(t);
  for (const auto& [name, ty] : ev.judgment.auxiliary)
    r.perChannelFoc[name] = foc(name, t);
  for (const auto& [name, ty] : ev.judgment.multiplexor)
    r.perChannelFoc[name] = foc(name, t);
  return r;
}

}  // namespace softpi
