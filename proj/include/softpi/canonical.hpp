#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "softpi/process.hpp"

namespace softpi {

// A region is a maximal cluster of composition and restriction nodes.
// Decomposition lists the restricted names in syntactic order and the
// non-cluster leaves left to right; Nil leaves are kept.
struct Region {
  std::vector<Name> binders;
  std::vector<Process> components;
};

namespace detail {

inline void decompose_into(const Process& p, Region& r) {
  if (!p) return;
  if (p->kind == ProcKind::Par) {
    decompose_into(p->left, r);
    decompose_into(p->right, r);
  } else if (p->kind == ProcKind::New) {
    r.binders.push_back(p->chan);
    decompose_into(p->left, r);
  } else {
    r.components.push_back(p);
  }
}

}  // namespace detail

inline Region decompose_region(const Process& p) {
  Region r;
  detail::decompose_into(p, r);
  return r;
}

// Inverse of decompose_region: binders wrapped outermost first, components
// folded into a left-associated composition; empty component list gives Nil.
inline Process rebuild_region(const Region& r) {
  Process body;
  for (const Process& c : r.components)
    body = body ? par(body, c) : c;
  if (!body) body = nil();
  for (auto it = r.binders.rbegin(); it != r.binders.rend(); ++it)
    body = nu(*it, body);
  return body;
}

namespace detail {

constexpr char kTempPrefix = '\x01';

inline bool is_temp(const Name& n) { return !n.empty() && n[0] == kTempPrefix; }

// Renames every binder to a globally unique reserved name so later passes
// can hoist restrictions and compare scopes without capture checks.
class TempRenamer {
 public:
  Process run(const Process& p) { return walk(p, {}); }

 private:
  int counter_ = 0;

  Name next_temp() {
    return std::string(1, kTempPrefix) + "t" + std::to_string(counter_++);
  }

  Name lookup(const Name& n, const std::map<Name, Name>& env) const {
    auto it = env.find(n);
    return it == env.end() ? n : it->second;
  }

  Process walk(const Process& p, std::map<Name, Name> env) {
    if (!p) return p;
    switch (p->kind) {
      case ProcKind::Nil:
        return p;
      case ProcKind::Par:
        return par(walk(p->left, env), walk(p->right, env));
      case ProcKind::New: {
        Name t = next_temp();
        env[p->chan] = t;
        return nu(t, walk(p->left, std::move(env)));
      }
      case ProcKind::In:
      case ProcKind::RepIn: {
        Name subject = lookup(p->chan, env);
        Name t = next_temp();
        env[p->arg] = t;
        Process body = walk(p->left, std::move(env));
        return p->kind == ProcKind::In ? receive(subject, t, body)
                                       : server(subject, t, body);
      }
      case ProcKind::Out:
        return send(lookup(p->chan, env), lookup(p->arg, env),
                    walk(p->left, env));
      case ProcKind::SelL:
        return sel_l(lookup(p->chan, env), walk(p->left, env));
      case ProcKind::SelR:
        return sel_r(lookup(p->chan, env), walk(p->left, env));
      case ProcKind::Case:
        return choice(lookup(p->chan, env), walk(p->left, env),
                      walk(p->right, env));
    }
    return p;
  }
};

// Flattens every region: hoists restrictions to the region root, drops Nil
// components and restrictions on unused names, collapses empty regions to
// Nil. Sound for unique binder names.
inline Process normalize_shape(const Process& p) {
  if (!p) return p;
  switch (p->kind) {
    case ProcKind::Nil:
      return p;
    case ProcKind::Par:
    case ProcKind::New: {
      Region raw = decompose_region(p);
      Region flat;
      NameSet used;
      for (const Process& c : raw.components) {
        Process n = normalize_shape(c);
        if (n->kind == ProcKind::Nil) continue;
        flat.components.push_back(n);
        NameSet bound;
        free_names_into(n, bound, used);
      }
      for (const Name& b : raw.binders)
        if (used.count(b) != 0) flat.binders.push_back(b);
      if (flat.components.empty()) return nil();
      if (flat.components.size() == 1 && flat.binders.empty())
        return flat.components[0];
      return rebuild_region(flat);
    }
    case ProcKind::In:
      return receive(p->chan, p->arg, normalize_shape(p->left));
    case ProcKind::RepIn:
      return server(p->chan, p->arg, normalize_shape(p->left));
    case ProcKind::Out:
      return send(p->chan, p->arg, normalize_shape(p->left));
    case ProcKind::SelL:
      return sel_l(p->chan, normalize_shape(p->left));
    case ProcKind::SelR:
      return sel_r(p->chan, normalize_shape(p->left));
    case ProcKind::Case:
      return choice(p->chan, normalize_shape(p->left),
                    normalize_shape(p->right));
  }
  return p;
}

using ColorMap = std::map<Name, int>;

inline std::string color_code(const Name& n, const ColorMap& colors,
                              const Name* mark) {
  if (mark && n == *mark) return "*";
  auto it = colors.find(n);
  if (it != colors.end()) return "b" + std::to_string(it->second);
  return "f" + n;
}

// Order-insensitive serialization: regions render their components as a
// sorted multiset, so the string is invariant under composition reorder.
inline std::string serialize(const Process& p, const ColorMap& colors,
                             const Name* mark) {
  switch (p->kind) {
    case ProcKind::Nil:
      return "0";
    case ProcKind::Par:
    case ProcKind::New: {
      Region r = decompose_region(p);
      std::vector<std::string> parts;
      parts.reserve(r.components.size());
      for (const Process& c : r.components)
        parts.push_back(serialize(c, colors, mark));
      std::sort(parts.begin(), parts.end());
      std::string out = "[" + std::to_string(r.binders.size()) + "|";
      for (const std::string& s : parts) out += s + ",";
      return out + "]";
    }
    case ProcKind::In:
    case ProcKind::RepIn: {
      std::string out = p->kind == ProcKind::In ? "i(" : "r(";
      out += color_code(p->chan, colors, mark) + ";" +
             color_code(p->arg, colors, mark) + ";" +
             serialize(p->left, colors, mark) + ")";
      return out;
    }
    case ProcKind::Out:
      return "o(" + color_code(p->chan, colors, mark) + ";" +
             color_code(p->arg, colors, mark) + ";" +
             serialize(p->left, colors, mark) + ")";
    case ProcKind::SelL:
      return "l(" + color_code(p->chan, colors, mark) + ";" +
             serialize(p->left, colors, mark) + ")";
    case ProcKind::SelR:
      return "s(" + color_code(p->chan, colors, mark) + ";" +
             serialize(p->left, colors, mark) + ")";
    case ProcKind::Case:
      return "c(" + color_code(p->chan, colors, mark) + ";" +
             serialize(p->left, colors, mark) + ";" +
             serialize(p->right, colors, mark) + ")";
  }
  return "";
}

struct BinderSite {
  Name name;
  int kind_tag;
  std::vector<Process> region;  // components of the region the binder scopes over
};

inline std::vector<Process> body_components(const Process& body) {
  if (!body) return {};
  if (body->kind == ProcKind::Nil) return {};
  if (body->kind == ProcKind::Par || body->kind == ProcKind::New)
    return decompose_region(body).components;
  return {body};
}

inline void collect_binder_sites(const Process& p,
                                 std::vector<BinderSite>& out) {
  if (!p) return;
  switch (p->kind) {
    case ProcKind::Nil:
      return;
    case ProcKind::Par:
    case ProcKind::New: {
      Region r = decompose_region(p);
      for (const Name& b : r.binders) out.push_back({b, 0, r.components});
      for (const Process& c : r.components) collect_binder_sites(c, out);
      return;
    }
    case ProcKind::In:
    case ProcKind::RepIn:
      out.push_back({p->arg, p->kind == ProcKind::In ? 1 : 2,
                     body_components(p->left)});
      collect_binder_sites(p->left, out);
      return;
    case ProcKind::Out:
    case ProcKind::SelL:
    case ProcKind::SelR:
      collect_binder_sites(p->left, out);
      return;
    case ProcKind::Case:
      collect_binder_sites(p->left, out);
      collect_binder_sites(p->right, out);
      return;
  }
}

// Iterated refinement of binder colors by the serialized shape of the
// region each binder scopes over, with the binder's own occurrences
// marked. Converges once the color partition stops splitting.
inline ColorMap refine_colors(const Process& p) {
  std::vector<BinderSite> sites;
  collect_binder_sites(p, sites);
  ColorMap colors;
  for (const BinderSite& s : sites) colors[s.name] = s.kind_tag;
  size_t rounds = sites.size() + 2;
  for (size_t round = 0; round < rounds; ++round) {
    std::map<Name, std::string> sig;
    for (const BinderSite& s : sites) {
      std::vector<std::string> parts;
      parts.reserve(s.region.size());
      for (const Process& c : s.region)
        parts.push_back(serialize(c, colors, &s.name));
      std::sort(parts.begin(), parts.end());
      std::string joined = std::to_string(colors[s.name]) + "#";
      for (const std::string& t : parts) joined += t + ",";
      sig[s.name] = joined;
    }
    std::vector<std::string> ranked;
    ranked.reserve(sig.size());
    for (const auto& [name, s] : sig) ranked.push_back(s);
    std::sort(ranked.begin(), ranked.end());
    ranked.erase(std::unique(ranked.begin(), ranked.end()), ranked.end());
    ColorMap next;
    for (const auto& [name, s] : sig) {
      next[name] = static_cast<int>(
          std::lower_bound(ranked.begin(), ranked.end(), s) - ranked.begin());
    }
    if (next == colors) break;
    colors = std::move(next);
  }
  return colors;
}

inline void first_occurrences(const Process& p, std::vector<Name>& order,
                              NameSet& seen) {
  if (!p) return;
  auto note = [&](const Name& n) {
    if (is_temp(n) && seen.insert(n).second) order.push_back(n);
  };
  note(p->chan);
  note(p->arg);
  first_occurrences(p->left, order, seen);
  first_occurrences(p->right, order, seen);
}

// Sorts every region's components by their color serialization and orders
// region binders by first occurrence in the sorted component list. Stable
// on ties, so equal-key components keep their incoming order.
inline Process sort_pass(const Process& p, const ColorMap& colors) {
  if (!p) return p;
  switch (p->kind) {
    case ProcKind::Nil:
      return p;
    case ProcKind::Par:
    case ProcKind::New: {
      Region r = decompose_region(p);
      std::vector<std::pair<std::string, Process>> keyed;
      keyed.reserve(r.components.size());
      for (const Process& c : r.components) {
        Process s = sort_pass(c, colors);
        keyed.emplace_back(serialize(s, colors, nullptr), s);
      }
      std::stable_sort(keyed.begin(), keyed.end(),
                       [](const auto& a, const auto& b) {
                         return a.first < b.first;
                       });
      Region out;
      out.components.reserve(keyed.size());
      for (auto& [key, c] : keyed) out.components.push_back(c);
      NameSet binder_set(r.binders.begin(), r.binders.end());
      std::vector<Name> occ;
      NameSet seen;
      for (const Process& c : out.components) first_occurrences(c, occ, seen);
      for (const Name& n : occ)
        if (binder_set.count(n) != 0) out.binders.push_back(n);
      return rebuild_region(out);
    }
    case ProcKind::In:
      return receive(p->chan, p->arg, sort_pass(p->left, colors));
    case ProcKind::RepIn:
      return server(p->chan, p->arg, sort_pass(p->left, colors));
    case ProcKind::Out:
      return send(p->chan, p->arg, sort_pass(p->left, colors));
    case ProcKind::SelL:
      return sel_l(p->chan, sort_pass(p->left, colors));
    case ProcKind::SelR:
      return sel_r(p->chan, sort_pass(p->left, colors));
    case ProcKind::Case:
      return choice(p->chan, sort_pass(p->left, colors),
                    sort_pass(p->right, colors));
  }
  return p;
}

class FinalRenamer {
 public:
  explicit FinalRenamer(NameSet avoid) : avoid_(std::move(avoid)) {}

  Process run(const Process& p) {
    assign(p);
    return apply(p);
  }

 private:
  NameSet avoid_;
  int counter_ = 0;
  std::map<Name, Name> names_;

  Name next_final() {
    for (;;) {
      Name candidate = "_v" + std::to_string(counter_++);
      if (avoid_.count(candidate) == 0) return candidate;
    }
  }

  void assign(const Process& p) {
    if (!p) return;
    if (binds_chan(p->kind)) names_[p->chan] = next_final();
    if (binds_arg(p->kind)) names_[p->arg] = next_final();
    assign(p->left);
    assign(p->right);
  }

  Name map_name(const Name& n) const {
    auto it = names_.find(n);
    return it == names_.end() ? n : it->second;
  }

  Process apply(const Process& p) {
    if (!p) return p;
    if (p->kind == ProcKind::Nil) return p;
    return make_proc(p->kind, map_name(p->chan),
                     binds_arg(p->kind) || p->kind == ProcKind::Out
                         ? map_name(p->arg)
                         : p->arg,
                     apply(p->left), apply(p->right));
  }
};

}  // namespace detail

// Normal form under structural congruence: alpha renaming, the Nil unit
// and restriction laws, commutativity and associativity of composition,
// restriction swap and scope extrusion. Canonically equal processes are
// congruent; congruent processes canonicalize equal up to refinement ties.
inline Process canonical_form(const Process& p) {
  NameSet frees = free_names(p);
  detail::TempRenamer tr;
  Process shaped = detail::normalize_shape(tr.run(p));
  detail::ColorMap colors = detail::refine_colors(shaped);
  Process sorted = detail::sort_pass(shaped, colors);
  detail::FinalRenamer fr(frees);
  return fr.run(sorted);
}

inline bool struct_congruent(const Process& p, const Process& q) {
  return proc_equal(canonical_form(p), canonical_form(q));
}

// A process is inert when, after canonicalization, iteratively deleting
// replicated servers on restricted channels that no other component
// mentions leaves Nil. Spent private servers cannot interact again.
inline bool is_inert(const Process& p) {
  Process c = canonical_form(p);
  for (;;) {
    if (c->kind == ProcKind::Nil) return true;
    Region r = decompose_region(c);
    NameSet binder_set(r.binders.begin(), r.binders.end());
    bool removed = false;
    for (size_t i = 0; i < r.components.size(); ++i) {
      const Process& comp = r.components[i];
      if (comp->kind != ProcKind::RepIn) continue;
      if (binder_set.count(comp->chan) == 0) continue;
      bool mentioned = false;
      for (size_t j = 0; j < r.components.size() && !mentioned; ++j) {
        if (j == i) continue;
        mentioned = free_names(r.components[j]).count(comp->chan) != 0;
      }
      if (mentioned) continue;
      Region rest;
      rest.binders = r.binders;
      for (size_t j = 0; j < r.components.size(); ++j)
        if (j != i) rest.components.push_back(r.components[j]);
      c = canonical_form(rebuild_region(rest));
      removed = true;
      break;
    }
    if (!removed) return false;
  }
}

}  // namespace softpi
