#pragma once

#include <cassert>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "softpi/names.hpp"
#include "softpi/nat.hpp"

namespace softpi {

// Finite pi-calculus processes with binary choice and replicated input.
// Binders: New binds chan in left; In and RepIn bind arg in left.
enum class ProcKind { Nil, Par, New, In, Out, RepIn, SelL, SelR, Case };

struct ProcessNode;
using Process = std::shared_ptr<const ProcessNode>;

struct ProcessNode {
  ProcKind kind = ProcKind::Nil;
  Name chan;      // New binder; subject of In, Out, RepIn, SelL, SelR, Case
  Name arg;       // bound name of In and RepIn; payload of Out
  Process left;   // continuation; Par and Case left branch
  Process right;  // Par and Case right branch
};

inline Process make_proc(ProcKind kind, Name chan, Name arg, Process left,
                         Process right) {
  auto node = std::make_shared<ProcessNode>();
  node->kind = kind;
  node->chan = std::move(chan);
  node->arg = std::move(arg);
  node->left = std::move(left);
  node->right = std::move(right);
  return node;
}

inline Process nil() { return make_proc(ProcKind::Nil, {}, {}, nullptr, nullptr); }
inline Process par(Process p, Process q) {
  return make_proc(ProcKind::Par, {}, {}, std::move(p), std::move(q));
}
inline Process nu(Name x, Process body) {
  return make_proc(ProcKind::New, std::move(x), {}, std::move(body), nullptr);
}
inline Process receive(Name chan, Name bound, Process body) {
  return make_proc(ProcKind::In, std::move(chan), std::move(bound),
                   std::move(body), nullptr);
}
inline Process send(Name chan, Name payload, Process body) {
  return make_proc(ProcKind::Out, std::move(chan), std::move(payload),
                   std::move(body), nullptr);
}
inline Process server(Name chan, Name bound, Process body) {
  return make_proc(ProcKind::RepIn, std::move(chan), std::move(bound),
                   std::move(body), nullptr);
}
inline Process sel_l(Name chan, Process body) {
  return make_proc(ProcKind::SelL, std::move(chan), {}, std::move(body), nullptr);
}
inline Process sel_r(Name chan, Process body) {
  return make_proc(ProcKind::SelR, std::move(chan), {}, std::move(body), nullptr);
}
inline Process choice(Name chan, Process left, Process right) {
  return make_proc(ProcKind::Case, std::move(chan), {}, std::move(left),
                   std::move(right));
}

inline bool proc_equal(const Process& p, const Process& q) {
  if (p == q) return true;
  if (!p || !q) return false;
  if (p->kind != q->kind || p->chan != q->chan || p->arg != q->arg) return false;
  return proc_equal(p->left, q->left) && proc_equal(p->right, q->right);
}

inline bool binds_chan(ProcKind kind) { return kind == ProcKind::New; }
inline bool binds_arg(ProcKind kind) {
  return kind == ProcKind::In || kind == ProcKind::RepIn;
}

inline void free_names_into(const Process& p, NameSet& bound, NameSet& out) {
  if (!p) return;
  switch (p->kind) {
    case ProcKind::Nil:
      return;
    case ProcKind::Par:
      free_names_into(p->left, bound, out);
      free_names_into(p->right, bound, out);
      return;
    case ProcKind::New: {
      bool was_bound = bound.count(p->chan) != 0;
      bound.insert(p->chan);
      free_names_into(p->left, bound, out);
      if (!was_bound) bound.erase(p->chan);
      return;
    }
    case ProcKind::In:
    case ProcKind::RepIn: {
      if (bound.count(p->chan) == 0) out.insert(p->chan);
      bool was_bound = bound.count(p->arg) != 0;
      bound.insert(p->arg);
      free_names_into(p->left, bound, out);
      if (!was_bound) bound.erase(p->arg);
      return;
    }
    case ProcKind::Out:
      if (bound.count(p->chan) == 0) out.insert(p->chan);
      if (bound.count(p->arg) == 0) out.insert(p->arg);
      free_names_into(p->left, bound, out);
      return;
    case ProcKind::SelL:
    case ProcKind::SelR:
      if (bound.count(p->chan) == 0) out.insert(p->chan);
      free_names_into(p->left, bound, out);
      return;
    case ProcKind::Case:
      if (bound.count(p->chan) == 0) out.insert(p->chan);
      free_names_into(p->left, bound, out);
      free_names_into(p->right, bound, out);
      return;
  }
}

inline NameSet free_names(const Process& p) {
  NameSet bound, out;
  free_names_into(p, bound, out);
  return out;
}

// All names occurring in p, free or bound, binders included.
inline void all_names_into(const Process& p, NameSet& out) {
  if (!p) return;
  if (!p->chan.empty() || p->kind == ProcKind::New) out.insert(p->chan);
  if (binds_arg(p->kind) || p->kind == ProcKind::Out) out.insert(p->arg);
  all_names_into(p->left, out);
  all_names_into(p->right, out);
}

inline NameSet all_names(const Process& p) {
  NameSet out;
  all_names_into(p, out);
  return out;
}

// Capture-avoiding replacement of free x by v. Colliding binders are
// renamed with appended primes.
inline Process substitute(const Process& p, const Name& x, const Name& v) {
  if (!p) return p;
  auto sub_name = [&](const Name& n) { return n == x ? v : n; };
  switch (p->kind) {
    case ProcKind::Nil:
      return p;
    case ProcKind::Par:
      return par(substitute(p->left, x, v), substitute(p->right, x, v));
    case ProcKind::New:
    case ProcKind::In:
    case ProcKind::RepIn: {
      Name subject =
          p->kind == ProcKind::New ? p->chan : sub_name(p->chan);
      Name binder = p->kind == ProcKind::New ? p->chan : p->arg;
      Process body = p->left;
      if (binder == x) {
        // x is shadowed below this binder.
      } else if (binder == v) {
        NameSet avoid = free_names(body);
        avoid.insert(x);
        avoid.insert(v);
        Name renamed = fresh_name(binder, avoid);
        body = substitute(substitute(body, binder, renamed), x, v);
        binder = renamed;
      } else {
        body = substitute(body, x, v);
      }
      if (p->kind == ProcKind::New) return nu(binder, body);
      if (p->kind == ProcKind::In) return receive(subject, binder, body);
      return server(subject, binder, body);
    }
    case ProcKind::Out:
      return send(sub_name(p->chan), sub_name(p->arg),
                  substitute(p->left, x, v));
    case ProcKind::SelL:
      return sel_l(sub_name(p->chan), substitute(p->left, x, v));
    case ProcKind::SelR:
      return sel_r(sub_name(p->chan), substitute(p->left, x, v));
    case ProcKind::Case:
      return choice(sub_name(p->chan), substitute(p->left, x, v),
                    substitute(p->right, x, v));
  }
  return p;
}

namespace detail {

using AlphaEnv = std::map<Name, int>;

inline bool alpha_eq_name(const Name& a, const Name& b, const AlphaEnv& ea,
                          const AlphaEnv& eb) {
  auto ia = ea.find(a);
  auto ib = eb.find(b);
  if (ia != ea.end() || ib != eb.end()) {
    return ia != ea.end() && ib != eb.end() && ia->second == ib->second;
  }
  return a == b;
}

inline bool alpha_eq_rec(const Process& p, const Process& q, AlphaEnv ea,
                         AlphaEnv eb, int depth) {
  if (!p || !q) return p == q;
  if (p->kind != q->kind) return false;
  switch (p->kind) {
    case ProcKind::Nil:
      return true;
    case ProcKind::Par:
    case ProcKind::Case:
      if (p->kind == ProcKind::Case &&
          !alpha_eq_name(p->chan, q->chan, ea, eb))
        return false;
      return alpha_eq_rec(p->left, q->left, ea, eb, depth) &&
             alpha_eq_rec(p->right, q->right, ea, eb, depth);
    case ProcKind::New: {
      ea[p->chan] = depth;
      eb[q->chan] = depth;
      return alpha_eq_rec(p->left, q->left, std::move(ea), std::move(eb),
                          depth + 1);
    }
    case ProcKind::In:
    case ProcKind::RepIn: {
      if (!alpha_eq_name(p->chan, q->chan, ea, eb)) return false;
      ea[p->arg] = depth;
      eb[q->arg] = depth;
      return alpha_eq_rec(p->left, q->left, std::move(ea), std::move(eb),
                          depth + 1);
    }
    case ProcKind::Out:
      return alpha_eq_name(p->chan, q->chan, ea, eb) &&
             alpha_eq_name(p->arg, q->arg, ea, eb) &&
             alpha_eq_rec(p->left, q->left, ea, eb, depth);
    case ProcKind::SelL:
    case ProcKind::SelR:
      return alpha_eq_name(p->chan, q->chan, ea, eb) &&
             alpha_eq_rec(p->left, q->left, ea, eb, depth);
  }
  return false;
}

}  // namespace detail

inline bool alpha_eq(const Process& p, const Process& q) {
  return detail::alpha_eq_rec(p, q, {}, {}, 0);
}

// Interaction size: prefixes count 1, restriction and composition count 0.
inline Nat proc_size(const Process& p) {
  if (!p) return 0;
  switch (p->kind) {
    case ProcKind::Nil:
      return 0;
    case ProcKind::Par:
      return proc_size(p->left) + proc_size(p->right);
    case ProcKind::New:
      return proc_size(p->left);
    case ProcKind::In:
    case ProcKind::Out:
    case ProcKind::RepIn:
    case ProcKind::SelL:
    case ProcKind::SelR:
      return proc_size(p->left) + 1;
    case ProcKind::Case:
      return proc_size(p->left) + proc_size(p->right) + 1;
  }
  return 0;
}

inline Nat node_count(const Process& p) {
  if (!p) return 0;
  return 1 + node_count(p->left) + node_count(p->right);
}

namespace detail {

inline void print_proc(const Process& p, std::ostream& os) {
  switch (p->kind) {
    case ProcKind::Nil:
      os << "0";
      return;
    case ProcKind::Par:
      print_proc(p->left, os);
      os << " | ";
      if (p->right->kind == ProcKind::Par) {
        os << "(";
        print_proc(p->right, os);
        os << ")";
      } else {
        print_proc(p->right, os);
      }
      return;
    case ProcKind::New:
      os << "new " << p->chan << ". ";
      if (p->left->kind == ProcKind::Par) {
        os << "(";
        print_proc(p->left, os);
        os << ")";
      } else {
        print_proc(p->left, os);
      }
      return;
    case ProcKind::In:
    case ProcKind::RepIn:
      if (p->kind == ProcKind::RepIn) os << "!";
      os << p->chan << "?(" << p->arg << "). ";
      if (p->left->kind == ProcKind::Par) {
        os << "(";
        print_proc(p->left, os);
        os << ")";
      } else {
        print_proc(p->left, os);
      }
      return;
    case ProcKind::Out:
      os << p->chan << "!(" << p->arg << "). ";
      if (p->left->kind == ProcKind::Par) {
        os << "(";
        print_proc(p->left, os);
        os << ")";
      } else {
        print_proc(p->left, os);
      }
      return;
    case ProcKind::SelL:
    case ProcKind::SelR:
      os << p->chan << (p->kind == ProcKind::SelL ? ".inl. " : ".inr. ");
      if (p->left->kind == ProcKind::Par) {
        os << "(";
        print_proc(p->left, os);
        os << ")";
      } else {
        print_proc(p->left, os);
      }
      return;
    case ProcKind::Case:
      os << "case " << p->chan << " { inl: ";
      print_proc(p->left, os);
      os << " ; inr: ";
      print_proc(p->right, os);
      os << " }";
      return;
  }
}

}  // namespace detail

inline std::string proc_to_string(const Process& p) {
  std::ostringstream os;
  detail::print_proc(p, os);
  return os.str();
}

}  // namespace softpi
