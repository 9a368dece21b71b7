#pragma once

#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "softpi/process.hpp"

namespace softpi {

// Seeded random process builder for congruence and canonicalization
// properties. Draws channel names from a small pool so that components
// share names and regions overlap nontrivially.
inline Process random_process(std::mt19937& rng, int budget) {
  static const char* pool[] = {"a", "b", "c", "d", "e", "f"};
  auto name = [&]() { return Name(pool[rng() % 6]); };
  if (budget <= 0) return nil();
  switch (rng() % 12) {
    case 0:
      return nil();
    case 1:
    case 2: {
      int split = budget > 1 ? static_cast<int>(rng() % budget) : 0;
      return par(random_process(rng, split),
                 random_process(rng, budget - 1 - split));
    }
    case 3:
    case 4:
      return nu(name(), random_process(rng, budget - 1));
    case 5:
    case 6:
      return receive(name(), name(), random_process(rng, budget - 1));
    case 7:
    case 8:
      return send(name(), name(), random_process(rng, budget - 1));
    case 9:
      return server(name(), name(), random_process(rng, budget - 1));
    case 10:
      return rng() % 2 == 0 ? sel_l(name(), random_process(rng, budget - 1))
                            : sel_r(name(), random_process(rng, budget - 1));
    default: {
      int split = budget > 1 ? static_cast<int>(rng() % budget) : 0;
      return choice(name(), random_process(rng, split),
                    random_process(rng, budget - 1 - split));
    }
  }
}

namespace detail {

using ProcRebuild = std::function<Process(Process)>;

struct CongruenceCandidate {
  std::string axiom;
  Process result;
};

// Enumerates single applications of the congruence axioms (both
// orientations, alpha renaming included) at every subterm position.
inline void collect_congruence_rewrites(
    const Process& p, const ProcRebuild& wrap, int& fresh,
    std::vector<CongruenceCandidate>& out) {
  if (!p) return;
  auto fresh_name_for = [&](const Process& scope) {
    NameSet avoid = all_names(scope);
    Name n;
    do {
      n = "g" + std::to_string(fresh++);
    } while (avoid.count(n) != 0);
    return n;
  };

  if (p->kind == ProcKind::Nil) {
    Name x = fresh_name_for(p);
    out.push_back({"nu-nil-intro", wrap(nu(x, nil()))});
  }
  out.push_back({"nil-intro-right", wrap(par(p, nil()))});
  out.push_back({"nil-intro-left", wrap(par(nil(), p))});

  if (p->kind == ProcKind::Par) {
    out.push_back({"par-comm", wrap(par(p->right, p->left))});
    if (p->right->kind == ProcKind::Nil) out.push_back({"nil-elim", wrap(p->left)});
    if (p->left->kind == ProcKind::Nil) out.push_back({"nil-elim", wrap(p->right)});
    if (p->left->kind == ProcKind::Par) {
      out.push_back({"par-assoc-right",
                     wrap(par(p->left->left, par(p->left->right, p->right)))});
    }
    if (p->right->kind == ProcKind::Par) {
      out.push_back({"par-assoc-left",
                     wrap(par(par(p->left, p->right->left), p->right->right))});
    }
    if (p->left->kind == ProcKind::New &&
        free_names(p->right).count(p->left->chan) == 0) {
      out.push_back(
          {"extrude", wrap(nu(p->left->chan, par(p->left->left, p->right)))});
    }
  }
  if (p->kind == ProcKind::New) {
    if (p->left->kind == ProcKind::Nil) out.push_back({"nu-nil-elim", wrap(nil())});
    if (p->left->kind == ProcKind::New && p->chan != p->left->chan) {
      out.push_back(
          {"nu-swap", wrap(nu(p->left->chan, nu(p->chan, p->left->left)))});
    }
    if (p->left->kind == ProcKind::Par &&
        free_names(p->left->right).count(p->chan) == 0) {
      out.push_back(
          {"intrude", wrap(par(nu(p->chan, p->left->left), p->left->right))});
    }
  }
  if (binds_chan(p->kind) || binds_arg(p->kind)) {
    Name binder = binds_chan(p->kind) ? p->chan : p->arg;
    Name renamed = fresh_name_for(p);
    Process body = substitute(p->left, binder, renamed);
    Process replacement =
        p->kind == ProcKind::New    ? nu(renamed, body)
        : p->kind == ProcKind::In   ? receive(p->chan, renamed, body)
                                    : server(p->chan, renamed, body);
    out.push_back({"alpha", wrap(replacement)});
  }

  if (p->left) {
    ProcRebuild wrap_left = [&, p](Process sub) {
      return wrap(make_proc(p->kind, p->chan, p->arg, std::move(sub), p->right));
    };
    collect_congruence_rewrites(p->left, wrap_left, fresh, out);
  }
  if (p->right) {
    ProcRebuild wrap_right = [&, p](Process sub) {
      return wrap(make_proc(p->kind, p->chan, p->arg, p->left, std::move(sub)));
    };
    collect_congruence_rewrites(p->right, wrap_right, fresh, out);
  }
}

}  // namespace detail

// One random congruence axiom application at a random position. Every
// result is structurally congruent to the input.
inline std::pair<std::string, Process> congruence_rewrite(const Process& p,
                                                          std::mt19937& rng) {
  std::vector<detail::CongruenceCandidate> candidates;
  int fresh = static_cast<int>(rng() % 1000);
  detail::ProcRebuild identity = [](Process q) { return q; };
  detail::collect_congruence_rewrites(p, identity, fresh, candidates);
  const auto& pick = candidates[rng() % candidates.size()];
  return {pick.axiom, pick.result};
}

}  // namespace softpi
