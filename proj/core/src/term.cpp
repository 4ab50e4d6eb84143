#include "mualg/term.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace mualg {

namespace {

Term make(Kind k, std::string n, Term l, Term r) {
  return std::make_shared<const TermNode>(k, std::move(n), std::move(l),
                                          std::move(r));
}

const Term& top_singleton() {
  static const Term t = make(Kind::Top, "", nullptr, nullptr);
  return t;
}
const Term& bot_singleton() {
  static const Term t = make(Kind::Bot, "", nullptr, nullptr);
  return t;
}

}  // namespace

Term gen(std::string name) { return make(Kind::Gen, std::move(name), nullptr, nullptr); }
Term var(std::string name) { return make(Kind::Var, std::move(name), nullptr, nullptr); }
Term top() { return top_singleton(); }
Term bot() { return bot_singleton(); }
Term conj(Term a, Term b) { return make(Kind::And, "", std::move(a), std::move(b)); }
Term disj(Term a, Term b) { return make(Kind::Or, "", std::move(a), std::move(b)); }
Term neg(Term a) { return make(Kind::Neg, "", std::move(a), nullptr); }
Term dia(std::string action, Term body) {
  return make(Kind::Dia, std::move(action), std::move(body), nullptr);
}
Term box(std::string action, Term body) {
  return make(Kind::Box, std::move(action), std::move(body), nullptr);
}
Term mu(std::string v, Term body) {
  return make(Kind::Mu, std::move(v), std::move(body), nullptr);
}
Term nu(std::string v, Term body) {
  return make(Kind::Nu, std::move(v), std::move(body), nullptr);
}

Term conj_of(const std::vector<Term>& ts) {
  if (ts.empty()) return top();
  Term acc = ts[0];
  for (std::size_t i = 1; i < ts.size(); ++i) acc = conj(acc, ts[i]);
  return acc;
}

Term disj_of(const std::vector<Term>& ts) {
  if (ts.empty()) return bot();
  Term acc = ts[0];
  for (std::size_t i = 1; i < ts.size(); ++i) acc = disj(acc, ts[i]);
  return acc;
}

bool is_atom(const Term& t) {
  switch (t->kind) {
    case Kind::Gen:
    case Kind::Var:
    case Kind::Top:
    case Kind::Bot:
      return true;
    default:
      return false;
  }
}

int term_compare(const Term& a, const Term& b) {
  if (a == b) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
  const bool la = a->lhs != nullptr, lb = b->lhs != nullptr;
  if (la != lb) return la < lb ? -1 : 1;
  if (la) {
    if (int c = term_compare(a->lhs, b->lhs)) return c;
  }
  const bool ra = a->rhs != nullptr, rb = b->rhs != nullptr;
  if (ra != rb) return ra < rb ? -1 : 1;
  if (ra) {
    if (int c = term_compare(a->rhs, b->rhs)) return c;
  }
  return 0;
}

bool structural_equal(const Term& a, const Term& b) {
  return term_compare(a, b) == 0;
}

namespace {

Term canonical_rec(const Term& t, std::map<std::string, std::string>& ren,
                   int depth) {
  switch (t->kind) {
    case Kind::Gen:
    case Kind::Top:
    case Kind::Bot:
      return t;
    case Kind::Var: {
      auto it = ren.find(t->name);
      return it == ren.end() ? t : var(it->second);
    }
    case Kind::And:
      return conj(canonical_rec(t->lhs, ren, depth),
                  canonical_rec(t->rhs, ren, depth));
    case Kind::Or:
      return disj(canonical_rec(t->lhs, ren, depth),
                  canonical_rec(t->rhs, ren, depth));
    case Kind::Neg:
      return neg(canonical_rec(t->lhs, ren, depth));
    case Kind::Dia:
      return dia(t->name, canonical_rec(t->lhs, ren, depth));
    case Kind::Box:
      return box(t->name, canonical_rec(t->lhs, ren, depth));
    case Kind::Mu:
    case Kind::Nu: {
      // Positional names: binder nesting depth determines the new name, so
      // alpha-equivalent terms coincide.  User identifiers start with a
      // lowercase letter, never '_', so no capture is possible.
      const std::string fresh = "_" + std::to_string(depth);
      auto saved = ren.find(t->name);
      std::string old;
      bool had = false;
      if (saved != ren.end()) {
        had = true;
        old = saved->second;
      }
      ren[t->name] = fresh;
      Term body = canonical_rec(t->lhs, ren, depth + 1);
      if (had)
        ren[t->name] = old;
      else
        ren.erase(t->name);
      return make(t->kind, fresh, std::move(body), nullptr);
    }
  }
  assert(false);
  return t;
}

}  // namespace

Term canonical(const Term& t) {
  std::map<std::string, std::string> ren;
  return canonical_rec(t, ren, 0);
}

bool alpha_equal(const Term& a, const Term& b) {
  return structural_equal(canonical(a), canonical(b));
}

namespace {

void free_vars_rec(const Term& t, std::set<std::string>& bound,
                   std::set<std::string>& out) {
  switch (t->kind) {
    case Kind::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case Kind::Gen:
    case Kind::Top:
    case Kind::Bot:
      return;
    case Kind::And:
    case Kind::Or:
      free_vars_rec(t->lhs, bound, out);
      free_vars_rec(t->rhs, bound, out);
      return;
    case Kind::Neg:
    case Kind::Dia:
    case Kind::Box:
      free_vars_rec(t->lhs, bound, out);
      return;
    case Kind::Mu:
    case Kind::Nu: {
      const bool added = bound.insert(t->name).second;
      free_vars_rec(t->lhs, bound, out);
      if (added) bound.erase(t->name);
      return;
    }
  }
}

template <typename F>
void walk(const Term& t, F&& f) {
  f(t);
  if (t->lhs) walk(t->lhs, f);
  if (t->rhs) walk(t->rhs, f);
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> bound, out;
  free_vars_rec(t, bound, out);
  return out;
}

std::set<std::string> generators_of(const Term& t) {
  std::set<std::string> out;
  walk(t, [&](const Term& s) {
    if (s->kind == Kind::Gen) out.insert(s->name);
  });
  return out;
}

std::set<std::string> actions_of(const Term& t) {
  std::set<std::string> out;
  walk(t, [&](const Term& s) {
    if (s->kind == Kind::Dia || s->kind == Kind::Box) out.insert(s->name);
  });
  return out;
}

namespace {

bool positive_rec(const Term& t, const std::string& v, bool positive) {
  switch (t->kind) {
    case Kind::Var:
      return t->name != v || positive;
    case Kind::Gen:
    case Kind::Top:
    case Kind::Bot:
      return true;
    case Kind::And:
    case Kind::Or:
      return positive_rec(t->lhs, v, positive) &&
             positive_rec(t->rhs, v, positive);
    case Kind::Neg:
      return positive_rec(t->lhs, v, !positive);
    case Kind::Dia:
    case Kind::Box:
      return positive_rec(t->lhs, v, positive);
    case Kind::Mu:
    case Kind::Nu:
      if (t->name == v) return true;  // shadowed
      return positive_rec(t->lhs, v, positive);
  }
  return true;
}

}  // namespace

bool positive_in(const Term& t, const std::string& v) {
  return positive_rec(t, v, true);
}

bool well_formed(const Term& t, std::string* why) {
  bool ok = true;
  walk(t, [&](const Term& s) {
    if (!ok) return;
    if ((s->kind == Kind::Mu || s->kind == Kind::Nu) &&
        !positive_in(s->lhs, s->name)) {
      ok = false;
      if (why)
        *why = "variable " + s->name + " under odd negations in its binder";
    }
  });
  return ok;
}

TermSet::TermSet(const std::vector<Term>& ts) {
  for (const auto& t : ts) insert(t);
}

bool TermSet::insert(const Term& t) { return items_.insert(canonical(t)).second; }

bool TermSet::contains(const Term& t) const {
  return items_.count(canonical(t)) > 0;
}

namespace {

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

Term subst_rec(const Term& t, const std::map<std::string, Term>& binding,
               const std::map<std::string, std::set<std::string>>& img_fv) {
  switch (t->kind) {
    case Kind::Var: {
      auto it = binding.find(t->name);
      return it == binding.end() ? t : it->second;
    }
    case Kind::Gen:
    case Kind::Top:
    case Kind::Bot:
      return t;
    case Kind::And:
      return conj(subst_rec(t->lhs, binding, img_fv),
                  subst_rec(t->rhs, binding, img_fv));
    case Kind::Or:
      return disj(subst_rec(t->lhs, binding, img_fv),
                  subst_rec(t->rhs, binding, img_fv));
    case Kind::Neg:
      return neg(subst_rec(t->lhs, binding, img_fv));
    case Kind::Dia:
      return dia(t->name, subst_rec(t->lhs, binding, img_fv));
    case Kind::Box:
      return box(t->name, subst_rec(t->lhs, binding, img_fv));
    case Kind::Mu:
    case Kind::Nu: {
      std::map<std::string, Term> inner = binding;
      inner.erase(t->name);  // shadowing
      if (inner.empty()) return t;
      // Capture check: the binder variable may not appear free in any image
      // substituted below it.
      bool capture = false;
      std::set<std::string> body_free = free_vars(t->lhs);
      for (const auto& [v, img] : inner) {
        if (!body_free.count(v)) continue;
        auto fit = img_fv.find(v);
        if (fit != img_fv.end() && fit->second.count(t->name)) capture = true;
      }
      std::string bv = t->name;
      Term body = t->lhs;
      if (capture) {
        std::set<std::string> avoid = body_free;
        for (const auto& [v, fv] : img_fv)
          avoid.insert(fv.begin(), fv.end());
        avoid.insert(bv);
        bv = fresh_name(t->name, avoid);
        std::map<std::string, Term> ren{{t->name, var(bv)}};
        body = substitute(body, ren);
      }
      return make(t->kind, bv, subst_rec(body, inner, img_fv), nullptr);
    }
  }
  assert(false);
  return t;
}

}  // namespace

Term substitute(const Term& t, const std::map<std::string, Term>& binding) {
  if (binding.empty()) return t;
  std::map<std::string, std::set<std::string>> img_fv;
  for (const auto& [v, img] : binding) img_fv[v] = free_vars(img);
  return subst_rec(t, binding, img_fv);
}

namespace {

// bound_flipped: variables whose binder was dualized; their occurrences under
// negative polarity denote the doubly negated (hence plain) variable.
Term nnf_rec(const Term& t, bool positive, std::set<std::string>& bound) {
  switch (t->kind) {
    case Kind::Gen:
      return positive ? t : neg(t);
    case Kind::Var:
      if (bound.count(t->name)) return t;  // polarity matches binder's
      return positive ? t : neg(t);
    case Kind::Top:
      return positive ? top() : bot();
    case Kind::Bot:
      return positive ? bot() : top();
    case Kind::Neg:
      return nnf_rec(t->lhs, !positive, bound);
    case Kind::And: {
      Term l = nnf_rec(t->lhs, positive, bound);
      Term r = nnf_rec(t->rhs, positive, bound);
      return positive ? conj(l, r) : disj(l, r);
    }
    case Kind::Or: {
      Term l = nnf_rec(t->lhs, positive, bound);
      Term r = nnf_rec(t->rhs, positive, bound);
      return positive ? disj(l, r) : conj(l, r);
    }
    case Kind::Dia: {
      Term b = nnf_rec(t->lhs, positive, bound);
      return positive ? dia(t->name, b) : box(t->name, b);
    }
    case Kind::Box: {
      Term b = nnf_rec(t->lhs, positive, bound);
      return positive ? box(t->name, b) : dia(t->name, b);
    }
    case Kind::Mu:
    case Kind::Nu: {
      const bool added = bound.insert(t->name).second;
      Term b = nnf_rec(t->lhs, positive, bound);
      if (added) bound.erase(t->name);
      const bool is_mu = (t->kind == Kind::Mu);
      // ~mu x.f(x) = nu x.~f(~x); the inner substitution cancels on the
      // bound occurrences thanks to positivity.
      if (positive == is_mu) return mu(t->name, b);
      return nu(t->name, b);
    }
  }
  assert(false);
  return t;
}

}  // namespace

Term nnf(const Term& t) {
  std::set<std::string> bound;
  return nnf_rec(t, true, bound);
}

namespace {

bool is_literal_term(const Term& t) {
  if (t->kind == Kind::Gen || t->kind == Kind::Var) return true;
  return t->kind == Kind::Neg &&
         (t->lhs->kind == Kind::Gen || t->lhs->kind == Kind::Var);
}

// Grammar membership for the fixed-point-free-of-the-other-binder classes.
// cls: Sigma1 admits Mu only, Pi1 admits Nu only.
bool parses_in(const Term& t, Fragment cls) {
  switch (t->kind) {
    case Kind::Gen:
    case Kind::Var:
    case Kind::Top:
    case Kind::Bot:
      return true;
    case Kind::Neg:
      return is_literal_term(t);
    case Kind::And:
    case Kind::Or:
      return parses_in(t->lhs, cls) && parses_in(t->rhs, cls);
    case Kind::Dia:
    case Kind::Box:
      return parses_in(t->lhs, cls);
    case Kind::Mu:
      return cls == Fragment::Sigma1 && parses_in(t->lhs, cls);
    case Kind::Nu:
      return cls == Fragment::Pi1 && parses_in(t->lhs, cls);
  }
  return false;
}

bool is_comp(const Term& t);

// Top-context parse in class cls; subterms free of the enclosing bound
// variables may be cut and classified independently.
bool comp_parse(const Term& t, Fragment cls, std::set<std::string>& binders,
                bool root) {
  if (!root) {
    bool cuttable = true;
    for (const auto& v : free_vars(t))
      if (binders.count(v)) {
        cuttable = false;
        break;
      }
    if (cuttable && is_comp(t)) return true;
  }
  switch (t->kind) {
    case Kind::Gen:
    case Kind::Var:
    case Kind::Top:
    case Kind::Bot:
      return true;
    case Kind::Neg:
      return is_literal_term(t);
    case Kind::And:
    case Kind::Or:
      return comp_parse(t->lhs, cls, binders, false) &&
             comp_parse(t->rhs, cls, binders, false);
    case Kind::Dia:
    case Kind::Box:
      return comp_parse(t->lhs, cls, binders, false);
    case Kind::Mu:
    case Kind::Nu: {
      const bool allowed = (t->kind == Kind::Mu) == (cls == Fragment::Sigma1);
      if (!allowed) return false;
      const bool added = binders.insert(t->name).second;
      bool ok = comp_parse(t->lhs, cls, binders, false);
      if (added) binders.erase(t->name);
      return ok;
    }
  }
  return false;
}

bool is_comp(const Term& t) {
  std::set<std::string> binders;
  if (comp_parse(t, Fragment::Sigma1, binders, true)) return true;
  binders.clear();
  return comp_parse(t, Fragment::Pi1, binders, true);
}

}  // namespace

Fragment classify(const Term& t) {
  if (parses_in(t, Fragment::Sigma1)) return Fragment::Sigma1;
  if (parses_in(t, Fragment::Pi1)) return Fragment::Pi1;
  if (is_comp(t)) return Fragment::CompSigma1Pi1;
  return Fragment::General;
}

const char* fragment_name(Fragment f) {
  switch (f) {
    case Fragment::Sigma1: return "sigma1";
    case Fragment::Pi1: return "pi1";
    case Fragment::CompSigma1Pi1: return "comp_sigma1_pi1";
    case Fragment::General: return "general";
  }
  return "?";
}

TermSet fl_closure(const Term& t) {
  TermSet out;
  std::vector<Term> work{canonical(t)};
  out.insert(t);
  while (!work.empty()) {
    Term cur = work.back();
    work.pop_back();
    std::vector<Term> next;
    switch (cur->kind) {
      case Kind::And:
      case Kind::Or:
        next = {cur->lhs, cur->rhs};
        break;
      case Kind::Neg:
      case Kind::Dia:
      case Kind::Box:
        next = {cur->lhs};
        break;
      case Kind::Mu:
      case Kind::Nu:
        next = {unfold(cur)};
        break;
      default:
        break;
    }
    for (const auto& n : next)
      if (out.insert(n)) work.push_back(canonical(n));
  }
  return out;
}

namespace {

bool guarded_rec(const Term& t, std::set<std::string>& pending) {
  switch (t->kind) {
    case Kind::Var:
      return !pending.count(t->name);
    case Kind::Gen:
    case Kind::Top:
    case Kind::Bot:
      return true;
    case Kind::And:
    case Kind::Or:
      return guarded_rec(t->lhs, pending) && guarded_rec(t->rhs, pending);
    case Kind::Neg:
      return guarded_rec(t->lhs, pending);
    case Kind::Dia:
    case Kind::Box: {
      std::set<std::string> none;
      return guarded_rec(t->lhs, none);
    }
    case Kind::Mu:
    case Kind::Nu: {
      const bool added = pending.insert(t->name).second;
      bool ok = guarded_rec(t->lhs, pending);
      if (added) pending.erase(t->name);
      return ok;
    }
  }
  return true;
}

}  // namespace

bool is_guarded(const Term& t) {
  std::set<std::string> pending;
  return guarded_rec(t, pending);
}

bool is_guarded_for(const Term& t, const std::set<std::string>& xs) {
  std::set<std::string> pending = xs;
  // Binders inside t may shadow members of xs; guarded_rec handles that by
  // keeping them pending, which is the right reading for system variables
  // only when names are disjoint.  System validation enforces disjointness.
  return guarded_rec(t, pending);
}

namespace {

// Does x occur in t outside the scope of any modal operator (and not
// shadowed)?
bool has_unguarded(const Term& t, const std::string& x) {
  switch (t->kind) {
    case Kind::Var:
      return t->name == x;
    case Kind::Gen:
    case Kind::Top:
    case Kind::Bot:
      return false;
    case Kind::And:
    case Kind::Or:
      return has_unguarded(t->lhs, x) || has_unguarded(t->rhs, x);
    case Kind::Neg:
      return has_unguarded(t->lhs, x);
    case Kind::Dia:
    case Kind::Box:
      return false;
    case Kind::Mu:
    case Kind::Nu:
      if (t->name == x) return false;
      return has_unguarded(t->lhs, x);
  }
  return false;
}

// Unfold fixed-point subterms holding unguarded occurrences of x until all
// such occurrences live in the top boolean skeleton.  Inner binders must
// already be guarded, which bounds the unfolding.
Term expose(const Term& t, const std::string& x, int fuel) {
  if (fuel <= 0)
    throw std::logic_error("guard: exposure fuel exhausted (invariant breach)");
  switch (t->kind) {
    case Kind::And:
      return conj(expose(t->lhs, x, fuel), expose(t->rhs, x, fuel));
    case Kind::Or:
      return disj(expose(t->lhs, x, fuel), expose(t->rhs, x, fuel));
    case Kind::Mu:
    case Kind::Nu:
      if (has_unguarded(t, x)) return expose(unfold(t), x, fuel - 1);
      return t;
    default:
      return t;
  }
}

using LeafSet = std::set<Term, TermLess>;

bool leafset_less(const LeafSet& a, const LeafSet& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      TermLess{});
}

bool leafset_equal(const LeafSet& a, const LeafSet& b) {
  if (a.size() != b.size()) return false;
  auto it = b.begin();
  for (const auto& x : a)
    if (term_compare(x, *it++) != 0) return false;
  return true;
}

bool leafset_subset(const LeafSet& small, const LeafSet& big) {
  for (const auto& x : small)
    if (!big.count(x)) return false;
  return true;
}

// Deduplicate and drop groups that include a strictly smaller group; the
// outer connective absorbs them.
void absorb(std::vector<LeafSet>& sets) {
  std::sort(sets.begin(), sets.end(), leafset_less);
  sets.erase(std::unique(sets.begin(), sets.end(), leafset_equal), sets.end());
  std::vector<bool> dropped(sets.size(), false);
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = 0; j < sets.size() && !dropped[i]; ++j)
      if (i != j && sets[j].size() < sets[i].size() &&
          leafset_subset(sets[j], sets[i]))
        dropped[i] = true;
  std::vector<LeafSet> kept;
  for (std::size_t i = 0; i < sets.size(); ++i)
    if (!dropped[i]) kept.push_back(std::move(sets[i]));
  sets = std::move(kept);
}

// Groups are pruned at every combination step, so intermediate lists stay
// antichains over the distinct leaves.
std::vector<LeafSet> skeleton_groups_rec(const Term& t, bool disjunctive) {
  const Kind outer = disjunctive ? Kind::Or : Kind::And;
  const Kind inner = disjunctive ? Kind::And : Kind::Or;
  const Kind unit = disjunctive ? Kind::Top : Kind::Bot;
  const Kind zero = disjunctive ? Kind::Bot : Kind::Top;
  if (t->kind == outer) {
    auto l = skeleton_groups_rec(t->lhs, disjunctive);
    auto r = skeleton_groups_rec(t->rhs, disjunctive);
    l.insert(l.end(), std::make_move_iterator(r.begin()),
             std::make_move_iterator(r.end()));
    absorb(l);
    return l;
  }
  if (t->kind == inner) {
    auto l = skeleton_groups_rec(t->lhs, disjunctive);
    auto r = skeleton_groups_rec(t->rhs, disjunctive);
    std::vector<LeafSet> out;
    for (const auto& a : l)
      for (const auto& b : r) {
        LeafSet m = a;
        m.insert(b.begin(), b.end());
        out.push_back(std::move(m));
      }
    absorb(out);
    if (out.size() > (1u << 14))
      throw std::logic_error("skeleton_groups: distribution too large");
    return out;
  }
  Term c = canonical(t);
  if (c->kind == zero) return {};          // absorbs its group
  if (c->kind == unit) return {LeafSet{}};  // neutral group
  return {LeafSet{c}};
}

}  // namespace

std::vector<std::vector<Term>> skeleton_groups(const Term& t, bool disjunctive) {
  auto sets = skeleton_groups_rec(t, disjunctive);
  std::vector<std::vector<Term>> result;
  for (const auto& s : sets) result.emplace_back(s.begin(), s.end());
  return result;
}

namespace {

Term guard_rec(const Term& t) {
  switch (t->kind) {
    case Kind::Gen:
    case Kind::Var:
    case Kind::Top:
    case Kind::Bot:
      return t;
    case Kind::And:
      return conj(guard_rec(t->lhs), guard_rec(t->rhs));
    case Kind::Or:
      return disj(guard_rec(t->lhs), guard_rec(t->rhs));
    case Kind::Neg:
      return neg(guard_rec(t->lhs));
    case Kind::Dia:
      return dia(t->name, guard_rec(t->lhs));
    case Kind::Box:
      return box(t->name, guard_rec(t->lhs));
    case Kind::Mu:
    case Kind::Nu: {
      const std::string& x = t->name;
      Term body = guard_rec(t->lhs);
      if (!has_unguarded(body, x) && is_guarded(body))
        return make(t->kind, x, std::move(body), nullptr);
      body = expose(body, x, 64);
      const bool is_mu = t->kind == Kind::Mu;
      // mu: drop DNF disjuncts holding a bare x; nu dually on CNF conjuncts.
      auto groups = skeleton_groups(body, is_mu);
      std::vector<Term> kept;
      for (auto& g : groups) {
        bool has_x = false;
        for (const auto& leaf : g)
          if (leaf->kind == Kind::Var && leaf->name == x) has_x = true;
        if (!has_x) kept.push_back(is_mu ? conj_of(g) : disj_of(g));
      }
      Term rebuilt = is_mu ? disj_of(kept) : conj_of(kept);
      return make(t->kind, x, std::move(rebuilt), nullptr);
    }
  }
  assert(false);
  return t;
}

}  // namespace

Term guard(const Term& t) { return guard_rec(t); }

Term simplify_lattice(const Term& t) {
  switch (t->kind) {
    case Kind::And: {
      Term l = simplify_lattice(t->lhs), r = simplify_lattice(t->rhs);
      if (l->kind == Kind::Bot || r->kind == Kind::Bot) return bot();
      if (l->kind == Kind::Top) return r;
      if (r->kind == Kind::Top) return l;
      if (alpha_equal(l, r)) return l;
      return conj(l, r);
    }
    case Kind::Or: {
      Term l = simplify_lattice(t->lhs), r = simplify_lattice(t->rhs);
      if (l->kind == Kind::Top || r->kind == Kind::Top) return top();
      if (l->kind == Kind::Bot) return r;
      if (r->kind == Kind::Bot) return l;
      if (alpha_equal(l, r)) return l;
      return disj(l, r);
    }
    case Kind::Neg:
      return neg(simplify_lattice(t->lhs));
    case Kind::Dia:
      return dia(t->name, simplify_lattice(t->lhs));
    case Kind::Box:
      return box(t->name, simplify_lattice(t->lhs));
    case Kind::Mu:
      return mu(t->name, simplify_lattice(t->lhs));
    case Kind::Nu:
      return nu(t->name, simplify_lattice(t->lhs));
    default:
      return t;
  }
}

Term unfold(const Term& t) {
  if (t->kind != Kind::Mu && t->kind != Kind::Nu)
    throw std::invalid_argument("unfold: not a fixed-point term");
  return substitute(t->lhs, {{t->name, t}});
}

Term arrow(const std::string& action, const std::vector<Term>& xs) {
  Term result = box(action, disj_of(xs));
  for (const auto& x : xs) result = conj(result, dia(action, x));
  return result;
}

Term Literal::to_term() const {
  Term a = is_var ? var(atom) : gen(atom);
  return negated ? neg(a) : a;
}

std::vector<std::string> SpconSpec::coordinates() const {
  std::vector<std::string> out;
  for (const auto& [act, xs] : blocks)
    out.insert(out.end(), xs.begin(), xs.end());
  return out;
}

void SpconSpec::validate() const {
  std::set<std::string> seen;
  for (const auto& [act, xs] : blocks) {
    for (const auto& x : xs)
      if (!seen.insert(x).second)
        throw std::invalid_argument("spcon: overlapping variable blocks at " + x);
  }
  for (const auto& l : literals)
    if (l.is_var)
      throw std::invalid_argument("spcon: literal over a variable " + l.atom);
}

Term spcon(const SpconSpec& s) {
  s.validate();
  std::vector<Term> parts;
  for (const auto& l : s.literals) parts.push_back(l.to_term());
  for (const auto& [act, xs] : s.blocks) {
    std::vector<Term> vars;
    for (const auto& x : xs) vars.push_back(var(x));
    parts.push_back(arrow(act, vars));
  }
  return conj_of(parts);
}

Term Clause::to_term() const {
  std::vector<Term> parts;
  if (has_top) parts.push_back(top());
  for (const auto& l : literals) parts.push_back(l.to_term());
  for (const auto& [act, d] : dia_part) parts.push_back(dia(act, d));
  for (const auto& [act, es] : box_part)
    for (const auto& e : es) parts.push_back(box(act, e));
  return disj_of(parts);
}

bool Clause::syntactically_top() const {
  if (has_top) return true;
  for (const auto& l : literals) {
    Literal flip = l;
    flip.negated = !flip.negated;
    if (literals.count(flip)) return true;
  }
  return false;
}

namespace {

Clause merge_clauses(const Clause& a, const Clause& b) {
  Clause out = a;
  out.has_top = a.has_top || b.has_top;
  out.literals.insert(b.literals.begin(), b.literals.end());
  for (const auto& [act, d] : b.dia_part) {
    auto it = out.dia_part.find(act);
    if (it == out.dia_part.end())
      out.dia_part[act] = d;
    else
      it->second = disj(it->second, d);  // <a>u \/ <a>v = <a>(u \/ v)
  }
  for (const auto& [act, es] : b.box_part) {
    auto& dst = out.box_part[act];
    for (const auto& e : es) {
      bool dup = false;
      for (const auto& x : dst)
        if (alpha_equal(x, e)) dup = true;
      if (!dup) dst.push_back(e);
    }
  }
  return out;
}

void sort_clause(Clause& c) {
  for (auto& [act, es] : c.box_part)
    std::sort(es.begin(), es.end(), [](const Term& a, const Term& b) {
      return term_compare(canonical(a), canonical(b)) < 0;
    });
}

// Unfold top-level fixed points until the boolean skeleton exposes only
// atoms and modal subterms.  Requires a guarded input.
Term modal_surface(const Term& t, int fuel) {
  if (fuel <= 0)
    throw std::logic_error("modal_cnf: surface fuel exhausted (invariant breach)");
  switch (t->kind) {
    case Kind::And:
      return conj(modal_surface(t->lhs, fuel), modal_surface(t->rhs, fuel));
    case Kind::Or:
      return disj(modal_surface(t->lhs, fuel), modal_surface(t->rhs, fuel));
    case Kind::Mu:
    case Kind::Nu:
      return modal_surface(unfold(t), fuel - 1);
    default:
      return t;
  }
}

Clause leaf_clause(const Term& t) {
  Clause c;
  switch (t->kind) {
    case Kind::Top:
      c.has_top = true;
      return c;
    case Kind::Bot:
      return c;  // empty join
    case Kind::Gen:
      c.literals.insert({t->name, false, false});
      return c;
    case Kind::Var:
      c.literals.insert({t->name, false, true});
      return c;
    case Kind::Neg: {
      const Term& a = t->lhs;
      if (a->kind == Kind::Gen || a->kind == Kind::Var) {
        c.literals.insert({a->name, true, a->kind == Kind::Var});
        return c;
      }
      throw std::logic_error("modal_cnf: negation not on an atom (input not nnf)");
    }
    case Kind::Dia:
      c.dia_part[t->name] = t->lhs;
      return c;
    case Kind::Box:
      c.box_part[t->name] = {t->lhs};
      return c;
    default:
      throw std::logic_error("modal_cnf: fixed point at modal surface");
  }
}

std::vector<Clause> cnf_rec(const Term& t) {
  switch (t->kind) {
    case Kind::And: {
      auto l = cnf_rec(t->lhs);
      auto r = cnf_rec(t->rhs);
      l.insert(l.end(), r.begin(), r.end());
      return l;
    }
    case Kind::Or: {
      auto l = cnf_rec(t->lhs);
      auto r = cnf_rec(t->rhs);
      std::vector<Clause> out;
      for (const auto& a : l)
        for (const auto& b : r) out.push_back(merge_clauses(a, b));
      return out;
    }
    default:
      return {leaf_clause(t)};
  }
}

}  // namespace

std::vector<Clause> modal_cnf(const Term& t) {
  Term g = guard(t);
  Term surface = modal_surface(g, 256);
  auto clauses = cnf_rec(surface);
  std::vector<Clause> out;
  for (auto& c : clauses) {
    if (c.syntactically_top()) continue;  // absorbed by the meet
    sort_clause(c);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const Clause& a, const Clause& b) {
    return term_compare(canonical(a.to_term()), canonical(b.to_term())) < 0;
  });
  return out;
}

}  // namespace mualg
