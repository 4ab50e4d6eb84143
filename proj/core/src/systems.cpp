#include "mualg/systems.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>
#include <stdexcept>

namespace mualg {

void System::validate() const {
  std::set<std::string> xs(bound.begin(), bound.end());
  if (xs.size() != bound.size())
    throw std::invalid_argument("system: duplicate bound variable");
  for (const auto& y : params)
    if (xs.count(y))
      throw std::invalid_argument("system: variable both bound and free: " + y);
  if (equations.size() != bound.size())
    throw std::invalid_argument("system: equations do not match bound variables");
  for (const auto& x : bound) {
    auto it = equations.find(x);
    if (it == equations.end())
      throw std::invalid_argument("system: missing equation for " + x);
    std::string why;
    if (!well_formed(it->second, &why))
      throw std::invalid_argument("system: " + why);
    for (const auto& x2 : bound)
      if (!positive_in(it->second, x2))
        throw std::invalid_argument("system: equation for " + x +
                                    " not positive in " + x2);
  }
}

std::set<std::string> System::bound_set() const {
  return std::set<std::string>(bound.begin(), bound.end());
}

// ---------------------------------------------------------------------------
// Arrow recognition and system classification.

namespace {

void flatten(const Term& t, Kind k, std::vector<Term>& out) {
  if (t->kind == k) {
    flatten(t->lhs, k, out);
    flatten(t->rhs, k, out);
    return;
  }
  out.push_back(t);
}

std::set<Term, TermLess> canon_set(const std::vector<Term>& ts) {
  std::set<Term, TermLess> out;
  for (const auto& t : ts) out.insert(canonical(t));
  return out;
}

}  // namespace

bool match_arrow(const Term& t, std::string* action, std::vector<Term>* operands) {
  std::vector<Term> parts;
  flatten(t, Kind::And, parts);
  const TermNode* the_box = nullptr;
  std::vector<Term> dia_bodies;
  std::string act;
  for (const auto& p : parts) {
    if (p->kind == Kind::Box) {
      if (the_box) return false;  // a single box per arrow
      the_box = p.get();
      act = p->name;
    } else if (p->kind == Kind::Dia) {
      dia_bodies.push_back(p->lhs);
    } else {
      return false;
    }
  }
  if (!the_box) return false;
  for (const auto& p : parts)
    if (p->kind == Kind::Dia && p->name != act) return false;
  if (dia_bodies.empty()) {
    if (the_box->lhs->kind != Kind::Bot) return false;
    if (action) *action = act;
    if (operands) operands->clear();
    return true;
  }
  // The box body must be the join of the diamond bodies; compare the
  // flattened join atoms so operands that are themselves joins match.
  std::vector<Term> box_atoms, dia_atoms;
  flatten(the_box->lhs, Kind::Or, box_atoms);
  for (const auto& d : dia_bodies) flatten(d, Kind::Or, dia_atoms);
  if (canon_set(box_atoms) != canon_set(dia_atoms)) return false;
  if (action) *action = act;
  if (operands) {
    operands->clear();
    auto cs = canon_set(dia_bodies);
    operands->assign(cs.begin(), cs.end());
  }
  return true;
}

namespace {

bool is_var_in(const Term& t, const std::set<std::string>& xs) {
  return t->kind == Kind::Var && xs.count(t->name) > 0;
}

bool touches(const Term& t, const std::set<std::string>& xs) {
  for (const auto& v : free_vars(t))
    if (xs.count(v)) return true;
  return false;
}

// DNF of a term over X variables only (And/Or/Var); meets become masks over
// the bound-variable order.  Fails on anything else.
bool xbody_masks(const Term& t, const std::map<std::string, int>& xindex,
                 std::set<std::uint64_t>* out) {
  switch (t->kind) {
    case Kind::Var: {
      auto it = xindex.find(t->name);
      if (it == xindex.end()) return false;
      out->insert(std::uint64_t(1) << it->second);
      return true;
    }
    case Kind::Or: {
      std::set<std::uint64_t> l, r;
      if (!xbody_masks(t->lhs, xindex, &l) || !xbody_masks(t->rhs, xindex, &r))
        return false;
      out->insert(l.begin(), l.end());
      out->insert(r.begin(), r.end());
      return true;
    }
    case Kind::And: {
      std::set<std::uint64_t> l, r;
      if (!xbody_masks(t->lhs, xindex, &l) || !xbody_masks(t->rhs, xindex, &r))
        return false;
      for (auto a : l)
        for (auto b : r) out->insert(a | b);
      return true;
    }
    default:
      return false;
  }
}

using XBody = std::set<std::uint64_t>;     // DNF over X: join of meets
using ArrowOps = std::set<XBody>;          // operand set D_sigma

struct NormDisjunct {
  std::vector<Term> params;                            // X-free conjuncts
  std::map<std::string, std::vector<ArrowOps>> arrows;  // unmerged, per action
};

// Normal form of a simple right-hand side: a join of meets of parameters and
// arrows whose operands are X-only distributive terms.  Recognition is
// structural: arrows must appear grouped as the arrow constructor builds
// them.
bool normalize_simple(const Term& t, const std::set<std::string>& xs,
                      const std::map<std::string, int>& xindex,
                      std::vector<NormDisjunct>* out) {
  if (t->kind == Kind::Bot) {
    out->clear();
    return true;
  }
  // Arrow recognition comes first: an arrow with no operands carries no
  // bound variable yet still participates in the per-action case split.
  if (t->kind == Kind::And || t->kind == Kind::Box) {
    std::string act;
    std::vector<Term> ops;
    if (match_arrow(t, &act, &ops)) {
      ArrowOps d;
      bool pure = true;
      for (const auto& op : ops) {
        XBody b;
        if (!xbody_masks(op, xindex, &b)) {
          pure = false;
          break;
        }
        d.insert(b);
      }
      if (pure) {
        NormDisjunct nd;
        nd.arrows[act].push_back(d);
        *out = {nd};
        return true;
      }
      // Arrows over non-variable operands only pass as constants.
      if (!touches(t, xs)) {
        NormDisjunct nd;
        nd.params.push_back(t);
        *out = {nd};
        return true;
      }
      return false;
    }
  }
  if (!touches(t, xs)) {
    NormDisjunct d;
    if (t->kind != Kind::Top) d.params.push_back(t);
    *out = {d};
    return true;
  }
  switch (t->kind) {
    case Kind::Or: {
      std::vector<NormDisjunct> l, r;
      if (!normalize_simple(t->lhs, xs, xindex, &l) ||
          !normalize_simple(t->rhs, xs, xindex, &r))
        return false;
      l.insert(l.end(), r.begin(), r.end());
      *out = std::move(l);
      return true;
    }
    case Kind::And: {
      std::vector<NormDisjunct> l, r;
      if (!normalize_simple(t->lhs, xs, xindex, &l) ||
          !normalize_simple(t->rhs, xs, xindex, &r))
        return false;
      std::vector<NormDisjunct> prod;
      for (const auto& a : l)
        for (const auto& b : r) {
          NormDisjunct m = a;
          m.params.insert(m.params.end(), b.params.begin(), b.params.end());
          for (const auto& [s, v] : b.arrows) {
            auto& dst = m.arrows[s];
            dst.insert(dst.end(), v.begin(), v.end());
          }
          prod.push_back(std::move(m));
        }
      *out = std::move(prod);
      return true;
    }
    default:
      return false;
  }
}

bool elementary_rhs(const Term& t) {
  switch (t->kind) {
    case Kind::Var:
    case Kind::Top:
    case Kind::Bot:
      return true;
    case Kind::And:
    case Kind::Or:
      if (t->lhs->kind == Kind::Var && t->rhs->kind == Kind::Var) return true;
      break;
    default:
      break;
  }
  std::vector<Term> ops;
  if (!match_arrow(t, nullptr, &ops)) return false;
  for (const auto& op : ops)
    if (op->kind != Kind::Var) return false;
  return true;
}

std::map<std::string, int> bound_index(const System& s) {
  std::map<std::string, int> idx;
  for (std::size_t i = 0; i < s.bound.size(); ++i) idx[s.bound[i]] = int(i);
  return idx;
}

}  // namespace

SystemClass classify_system(const System& s) {
  SystemClass c;
  const auto xs = s.bound_set();
  const auto xindex = bound_index(s);
  c.elementary = true;
  c.simple = true;
  c.disjunctive_simple = true;
  c.guarded = true;
  for (const auto& x : s.bound) {
    const Term& rhs = s.equations.at(x);
    if (!elementary_rhs(rhs)) c.elementary = false;
    if (!is_guarded_for(rhs, xs)) c.guarded = false;
    std::vector<NormDisjunct> nf;
    if (!normalize_simple(rhs, xs, xindex, &nf)) {
      c.simple = false;
      c.disjunctive_simple = false;
      continue;
    }
    for (const auto& d : nf) {
      if (!c.disjunctive_simple) break;
      for (const auto& [act, list] : d.arrows) {
        if (list.size() > 1) c.disjunctive_simple = false;
        for (const auto& ops : list)
          for (const auto& body : ops)
            for (auto mask : body)
              if (__builtin_popcountll(mask) != 1) c.disjunctive_simple = false;
      }
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Solving.

Solution bekic_solve(const System& s, const KripkeModel& m, const Env& yenv) {
  s.validate();
  std::function<Solution(std::vector<std::string>, std::map<std::string, Term>)>
      solve = [&](std::vector<std::string> order,
                  std::map<std::string, Term> eqs) -> Solution {
    if (order.empty()) return {};
    std::string xe = order.back();
    order.pop_back();
    Term mue = mu(xe, eqs.at(xe));
    eqs.erase(xe);
    for (auto& [x, rhs] : eqs) rhs = substitute(rhs, {{xe, mue}});
    Solution sol = solve(order, eqs);
    Env env = yenv;
    for (const auto& [x, v] : sol) env[x] = v;
    sol[xe] = eval(m, mue, env);
    return sol;
  };
  return solve(s.bound, s.equations);
}

std::vector<Elem> system_step(const System& s, const KripkeModel& m,
                              const Env& yenv, const std::vector<Elem>& x) {
  Env env = yenv;
  for (std::size_t i = 0; i < s.bound.size(); ++i) env[s.bound[i]] = x[i];
  std::vector<Elem> out(s.bound.size());
  for (std::size_t i = 0; i < s.bound.size(); ++i)
    out[i] = eval(m, s.equations.at(s.bound[i]), env);
  return out;
}

std::pair<Solution, VectorTrace> simultaneous_solve(const System& s,
                                                    const KripkeModel& m,
                                                    const Env& yenv) {
  s.validate();
  VectorTrace tr;
  std::vector<Elem> cur(s.bound.size(), 0);
  tr.entries.push_back(cur);
  for (;;) {
    std::vector<Elem> next = system_step(s, m, yenv, cur);
    tr.entries.push_back(next);
    if (next == cur) break;
    cur = next;
  }
  tr.stab_index = tr.entries.size() - 2;
  Solution sol;
  for (std::size_t i = 0; i < s.bound.size(); ++i) sol[s.bound[i]] = cur[i];
  return {sol, tr};
}

// ---------------------------------------------------------------------------
// Guarding.

namespace {

// Unfold fixed-point subterms that still hold unguarded system variables, so
// those occurrences reach the boolean skeleton.
Term prep_rhs(const Term& t, const std::set<std::string>& xs, int fuel) {
  if (fuel <= 0)
    throw std::logic_error("guard_system: unfolding fuel exhausted");
  switch (t->kind) {
    case Kind::And:
      return conj(prep_rhs(t->lhs, xs, fuel), prep_rhs(t->rhs, xs, fuel));
    case Kind::Or:
      return disj(prep_rhs(t->lhs, xs, fuel), prep_rhs(t->rhs, xs, fuel));
    case Kind::Mu:
    case Kind::Nu:
      if (!is_guarded_for(t, xs)) return prep_rhs(unfold(t), xs, fuel - 1);
      return t;
    default:
      return t;
  }
}

Term drop_loop_disjuncts(const Term& t, const std::string& x) {
  std::vector<Term> kept;
  for (auto& leaves : skeleton_groups(t, true)) {
    bool has_x = false;
    for (const auto& l : leaves)
      if (l->kind == Kind::Var && l->name == x) has_x = true;
    if (!has_x) kept.push_back(conj_of(leaves));
  }
  return disj_of(kept);
}

// Replace unguarded occurrences only; guarded ones are left untouched.
Term subst_unguarded(const Term& t, const std::map<std::string, Term>& repl) {
  switch (t->kind) {
    case Kind::Var: {
      auto it = repl.find(t->name);
      return it == repl.end() ? t : it->second;
    }
    case Kind::And:
      return conj(subst_unguarded(t->lhs, repl), subst_unguarded(t->rhs, repl));
    case Kind::Or:
      return disj(subst_unguarded(t->lhs, repl), subst_unguarded(t->rhs, repl));
    case Kind::Neg:
      return neg(subst_unguarded(t->lhs, repl));
    default:
      // Modal operators guard; binder subterms hold no unguarded system
      // variables after preparation.
      return t;
  }
}

}  // namespace

std::vector<std::pair<System, GuardStage>> guard_system_stages(const System& s) {
  s.validate();
  const auto xs = s.bound_set();
  std::vector<std::pair<System, GuardStage>> stages;
  System cur = s;
  for (auto& [x, rhs] : cur.equations) rhs = prep_rhs(guard(rhs), xs, 64);
  stages.emplace_back(cur, GuardStage::Initial);

  const int n = int(s.bound.size());
  const int max_steps = 10 * n * n + 20;
  for (int step = 0; step <= max_steps; ++step) {
    // Loop elimination round: keeps the approximant chains unchanged.
    System next = cur;
    bool changed = false;
    for (const auto& x : next.bound) {
      Term& rhs = next.equations.at(x);
      std::set<std::string> self{x};
      if (!is_guarded_for(rhs, self)) {
        rhs = simplify_lattice(drop_loop_disjuncts(rhs, x));
        changed = true;
      }
    }
    if (changed) {
      cur = next;
      stages.emplace_back(cur, GuardStage::LoopElimination);
    }

    // A full substitution pass, one pair at a time in place, so every
    // epsilon cycle keeps shortening; each single substitution is a stage.
    bool substituted = false;
    for (const auto& x : cur.bound) {
      for (const auto& x2 : cur.bound) {
        if (x2 == x) continue;
        Term& rhs = cur.equations.at(x);
        std::set<std::string> one{x2};
        if (is_guarded_for(rhs, one)) continue;
        rhs = simplify_lattice(
            subst_unguarded(rhs, {{x2, cur.equations.at(x2)}}));
        stages.emplace_back(cur, GuardStage::Substitution);
        substituted = true;
      }
    }
    if (!substituted) {
      bool all_guarded = true;
      for (const auto& x : cur.bound)
        if (!is_guarded_for(cur.equations.at(x), xs)) all_guarded = false;
      if (all_guarded) return stages;
    }
  }
  throw std::logic_error("guard_system: did not converge");
}

System guard_system(const System& s) { return guard_system_stages(s).back().first; }

// ---------------------------------------------------------------------------
// Unraveling to a simple system.

namespace {

struct Hoister {
  const System* src;
  std::set<std::string> xs;
  std::set<std::string> used;
  std::vector<std::pair<std::string, Term>> fresh;  // new equations, in order
  std::string top_var;

  std::string fresh_name(const std::string& base) {
    for (int i = 0;; ++i) {
      std::string cand = base + std::to_string(i);
      if (!used.count(cand)) {
        used.insert(cand);
        return cand;
      }
    }
  }

  std::string top() {
    if (top_var.empty()) {
      top_var = fresh_name("wt");
      fresh.emplace_back(top_var, mualg::top());
    }
    return top_var;
  }

  bool distributive_over_x(const Term& t) const {
    switch (t->kind) {
      case Kind::Var:
        return xs.count(t->name) > 0;
      case Kind::And:
      case Kind::Or:
        return distributive_over_x(t->lhs) && distributive_over_x(t->rhs);
      default:
        return false;
    }
  }

  // An arrow operand may stay when it is already a distributive term over
  // the bound variables; anything else moves into a fresh bound variable.
  Term operand(const Term& raw, const std::string& eqvar) {
    Term body = hoist(raw, eqvar);
    if (distributive_over_x(body)) return body;
    std::string w = fresh_name("w_" + eqvar + "_");
    fresh.emplace_back(w, body);
    xs.insert(w);
    return var(w);
  }

  // Hoist modal bodies bottom-up, preserving arrow groupings; bare
  // modalities get the arrow encoding.
  Term hoist(const Term& t, const std::string& eqvar) {
    std::string act;
    std::vector<Term> ops;
    if ((t->kind == Kind::And || t->kind == Kind::Box) &&
        match_arrow(t, &act, &ops)) {
      std::vector<Term> kept;
      for (const auto& op : ops) kept.push_back(operand(op, eqvar));
      return arrow(act, kept);
    }
    switch (t->kind) {
      case Kind::And:
        return conj(hoist(t->lhs, eqvar), hoist(t->rhs, eqvar));
      case Kind::Or:
        return disj(hoist(t->lhs, eqvar), hoist(t->rhs, eqvar));
      case Kind::Dia:
        return arrow(t->name, {operand(t->lhs, eqvar), var(top())});
      case Kind::Box:
        return disj(arrow(t->name, {operand(t->lhs, eqvar)}),
                    arrow(t->name, {}));
      default:
        return t;
    }
  }
};

}  // namespace

UnravelResult unravel_to_simple(const System& s) {
  s.validate();
  const auto xs = s.bound_set();
  for (const auto& x : s.bound)
    if (!is_guarded_for(s.equations.at(x), xs))
      throw std::invalid_argument("unravel_to_simple: system not guarded");

  Hoister h;
  h.src = &s;
  h.xs = xs;
  h.used = xs;
  for (const auto& y : s.params) h.used.insert(y);
  for (const auto& x : s.bound) {
    for (const auto& g : generators_of(s.equations.at(x))) h.used.insert(g);
    for (const auto& v : free_vars(s.equations.at(x))) h.used.insert(v);
  }

  System out;
  out.params = s.params;
  out.bound = s.bound;
  for (const auto& x : s.bound) out.equations[x] = h.hoist(s.equations.at(x), x);
  for (const auto& [w, rhs] : h.fresh) {
    out.bound.push_back(w);
    out.equations[w] = rhs;
  }

  // Hoisted bodies may mention original bound variables unguarded; one
  // substitution round against the (guarded) main equations settles them.
  std::map<std::string, Term> guarded_rhs;
  for (const auto& x : s.bound) guarded_rhs[x] = out.equations.at(x);
  for (const auto& [w, _] : h.fresh) {
    Term& rhs = out.equations.at(w);
    std::map<std::string, Term> repl;
    for (const auto& x : s.bound) {
      std::set<std::string> one{x};
      if (!is_guarded_for(rhs, one)) repl[x] = guarded_rhs.at(x);
    }
    if (!repl.empty()) rhs = subst_unguarded(rhs, repl);
  }

  UnravelResult r;
  r.system = std::move(out);
  for (const auto& x : s.bound) r.witness[x] = x;
  return r;
}

// ---------------------------------------------------------------------------

bool cofinal_check(const System& F, const System& G, const KripkeModel& m,
                   const Env& yenv, int depth,
                   const std::map<std::string, std::string>& varmap) {
  auto chain = [&](const System& s, int len) {
    std::vector<std::vector<Elem>> out;
    std::vector<Elem> cur(s.bound.size(), 0);
    out.push_back(cur);
    for (int k = 0; k < len; ++k) {
      cur = system_step(s, m, yenv, cur);
      out.push_back(cur);
    }
    return out;
  };
  auto fc = chain(F, 2 * depth);
  auto gc = chain(G, 2 * depth);

  std::map<std::string, int> gidx;
  for (std::size_t i = 0; i < G.bound.size(); ++i) gidx[G.bound[i]] = int(i);
  std::vector<int> proj(F.bound.size());
  for (std::size_t i = 0; i < F.bound.size(); ++i) {
    std::string target = F.bound[i];
    auto vit = varmap.find(target);
    if (vit != varmap.end()) target = vit->second;
    auto git = gidx.find(target);
    if (git == gidx.end())
      throw std::invalid_argument("cofinal_check: no image for " + F.bound[i]);
    proj[i] = git->second;
  }
  auto project = [&](const std::vector<Elem>& gv) {
    std::vector<Elem> out(F.bound.size());
    for (std::size_t i = 0; i < proj.size(); ++i) out[i] = gv[proj[i]];
    return out;
  };

  for (int k = 0; k <= depth; ++k) {
    bool fwd = false, bwd = false;
    for (int k2 = 0; k2 <= 2 * depth && !fwd; ++k2)
      if (vec_leq(fc[k], project(gc[k2]))) fwd = true;
    for (int k2 = 0; k2 <= 2 * depth && !bwd; ++k2)
      if (vec_leq(project(gc[k]), fc[k2])) bwd = true;
    if (!fwd || !bwd) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Powerset translation.

namespace {

// The three-way conjunction of two arrows over the same action, in subset
// masks: both empty stays empty, one empty kills the disjunct, otherwise the
// cross meets against the joined other side.
bool merge_arrow_ops(const ArrowOps& d1, const ArrowOps& d2, ArrowOps* out) {
  if (d1.empty() && d2.empty()) {
    out->clear();
    return true;
  }
  if (d1.empty() || d2.empty()) return false;  // bottom disjunct
  XBody u1, u2;
  for (const auto& b : d1) u1.insert(b.begin(), b.end());
  for (const auto& b : d2) u2.insert(b.begin(), b.end());
  ArrowOps d3;
  for (const auto& b : d1) {
    XBody nb;
    for (auto m1 : b)
      for (auto m2 : u2) nb.insert(m1 | m2);
    d3.insert(nb);
  }
  for (const auto& b : d2) {
    XBody nb;
    for (auto m2 : b)
      for (auto m1 : u1) nb.insert(m1 | m2);
    d3.insert(nb);
  }
  *out = std::move(d3);
  return true;
}

struct MergedDisjunct {
  std::vector<Term> params;
  std::map<std::string, ArrowOps> arrows;  // at most one arrow per action
};

// Collapse a normalized disjunct's per-action arrow lists; empty optional
// when the disjunct is bottom.
bool collapse(const NormDisjunct& d, MergedDisjunct* out) {
  out->params = d.params;
  out->arrows.clear();
  for (const auto& [act, list] : d.arrows) {
    ArrowOps acc = list.front();
    for (std::size_t i = 1; i < list.size(); ++i) {
      ArrowOps next;
      if (!merge_arrow_ops(acc, list[i], &next)) return false;
      acc = std::move(next);
    }
    out->arrows[act] = std::move(acc);
  }
  return true;
}

// Meet of two collapsed disjuncts.
bool meet_disjuncts(const MergedDisjunct& a, const MergedDisjunct& b,
                    MergedDisjunct* out) {
  *out = a;
  out->params.insert(out->params.end(), b.params.begin(), b.params.end());
  for (const auto& [act, ops] : b.arrows) {
    auto it = out->arrows.find(act);
    if (it == out->arrows.end()) {
      out->arrows[act] = ops;
    } else {
      ArrowOps merged;
      if (!merge_arrow_ops(it->second, ops, &merged)) return false;
      it->second = std::move(merged);
    }
  }
  return true;
}

std::vector<MergedDisjunct> meet_forms(const std::vector<MergedDisjunct>& a,
                                       const std::vector<MergedDisjunct>& b) {
  std::vector<MergedDisjunct> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      MergedDisjunct m;
      if (meet_disjuncts(x, y, &m)) out.push_back(std::move(m));
    }
  return out;
}

}  // namespace

PowersetTranslation powerset_translate(const System& s) {
  s.validate();
  auto cls = classify_system(s);
  if (!cls.simple)
    throw std::invalid_argument("powerset_translate: system not simple");

  const auto xs = s.bound_set();
  const auto xindex = bound_index(s);
  const int n = int(s.bound.size());
  if (n > 10)
    throw std::invalid_argument("powerset_translate: too many bound variables");
  const std::uint64_t full = (std::uint64_t(1) << n) - 1;

  PowersetTranslation pt;
  pt.source = s;
  // Subset variables in mask order; names carry the member list.
  std::vector<std::string> wname(full + 1);
  for (std::uint64_t mask = 1; mask <= full; ++mask) {
    std::string nm = "w" + std::to_string(mask);
    std::vector<std::string> members;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1) {
        nm += "_" + s.bound[i];
        members.push_back(s.bound[i]);
      }
    wname[mask] = nm;
    pt.subset_vars.push_back(nm);
    pt.subset_members.push_back(members);
  }

  // Normalized and collapsed forms of each component.
  std::vector<std::vector<MergedDisjunct>> comp(n);
  for (int i = 0; i < n; ++i) {
    std::vector<NormDisjunct> nf;
    if (!normalize_simple(s.equations.at(s.bound[i]), xs, xindex, &nf))
      throw std::invalid_argument("powerset_translate: normalization failed");
    for (const auto& d : nf) {
      MergedDisjunct md;
      if (collapse(d, &md)) comp[i].push_back(std::move(md));
    }
  }

  auto body_term = [&](const XBody& b) {
    std::vector<Term> parts;
    for (auto mask : b) parts.push_back(var(wname[mask]));
    return disj_of(parts);
  };

  pt.target.params = s.params;
  for (std::uint64_t mask = 1; mask <= full; ++mask) {
    std::vector<MergedDisjunct> acc;
    bool first = true;
    for (int i = 0; i < n; ++i) {
      if (!((mask >> i) & 1)) continue;
      if (first) {
        acc = comp[i];
        first = false;
      } else {
        acc = meet_forms(acc, comp[i]);
      }
    }
    std::vector<Term> disjuncts;
    for (const auto& d : acc) {
      std::vector<Term> parts = d.params;
      for (const auto& [act, ops] : d.arrows) {
        std::vector<Term> arrow_ops;
        for (const auto& b : ops) arrow_ops.push_back(body_term(b));
        parts.push_back(arrow(act, arrow_ops));
      }
      disjuncts.push_back(conj_of(parts));
    }
    pt.target.bound.push_back(wname[mask]);
    pt.target.equations[wname[mask]] = disj_of(disjuncts);
  }
  pt.target.validate();
  return pt;
}

std::vector<Elem> PowersetTranslation::embed(const std::vector<Elem>& xvec) const {
  const int n = int(source.bound.size());
  std::vector<Elem> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
    Elem v = ~Elem(0);
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1) v &= xvec[i];
    out.push_back(v);
  }
  return out;
}

std::vector<Elem> PowersetTranslation::project(const std::vector<Elem>& wvec) const {
  const int n = int(source.bound.size());
  std::vector<Elem> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = wvec[(std::uint64_t(1) << i) - 1];
  return out;
}

// ---------------------------------------------------------------------------
// Sigma1 compilation.

namespace {

struct CompileCtx {
  System sys;
  std::map<std::string, Term> lits;
  std::set<std::string> used;
  std::string top_var;
  int counter = 0;

  std::string fresh(const std::string& base) {
    for (;;) {
      std::string cand = base + std::to_string(counter++);
      if (!used.count(cand)) {
        used.insert(cand);
        return cand;
      }
    }
  }

  std::string add_eq(Term rhs) {
    std::string v = fresh("v");
    sys.bound.push_back(v);
    sys.equations[v] = std::move(rhs);
    return v;
  }

  std::string top() {
    if (top_var.empty()) top_var = add_eq(mualg::top());
    return top_var;
  }

  std::string literal_param(const Literal& l) {
    std::string name = (l.negated ? "y_not_" : "y_") + l.atom;
    if (!lits.count(name)) {
      lits[name] = l.to_term();
      used.insert(name);
    }
    return name;
  }
};

Term rename_binders(const Term& t, std::set<std::string>& used, int& counter) {
  switch (t->kind) {
    case Kind::Gen:
    case Kind::Var:
    case Kind::Top:
    case Kind::Bot:
      return t;
    case Kind::And:
      return conj(rename_binders(t->lhs, used, counter),
                  rename_binders(t->rhs, used, counter));
    case Kind::Or:
      return disj(rename_binders(t->lhs, used, counter),
                  rename_binders(t->rhs, used, counter));
    case Kind::Neg:
      return neg(rename_binders(t->lhs, used, counter));
    case Kind::Dia:
      return dia(t->name, rename_binders(t->lhs, used, counter));
    case Kind::Box:
      return box(t->name, rename_binders(t->lhs, used, counter));
    case Kind::Mu:
    case Kind::Nu: {
      std::string fresh;
      do {
        fresh = "b" + std::to_string(counter++);
      } while (used.count(fresh));
      used.insert(fresh);
      Term body = substitute(t->lhs, {{t->name, var(fresh)}});
      return std::make_shared<const TermNode>(
          t->kind, fresh, rename_binders(body, used, counter), nullptr);
    }
  }
  assert(false);
  return t;
}

std::string compile_rec(const Term& t, CompileCtx& ctx) {
  switch (t->kind) {
    case Kind::Var:
      return ctx.add_eq(var(t->name));
    case Kind::Gen:
      return ctx.add_eq(var(ctx.literal_param({t->name, false, false})));
    case Kind::Neg: {
      if (t->lhs->kind != Kind::Gen)
        throw std::invalid_argument("compile_sigma1: negation not on a generator");
      return ctx.add_eq(var(ctx.literal_param({t->lhs->name, true, false})));
    }
    case Kind::Top:
      return ctx.add_eq(top());
    case Kind::Bot:
      return ctx.add_eq(bot());
    case Kind::And: {
      std::string a = compile_rec(t->lhs, ctx);
      std::string b = compile_rec(t->rhs, ctx);
      return ctx.add_eq(conj(var(a), var(b)));
    }
    case Kind::Or: {
      std::string a = compile_rec(t->lhs, ctx);
      std::string b = compile_rec(t->rhs, ctx);
      return ctx.add_eq(disj(var(a), var(b)));
    }
    case Kind::Dia: {
      std::string a = compile_rec(t->lhs, ctx);
      return ctx.add_eq(arrow(t->name, {var(a), var(ctx.top())}));
    }
    case Kind::Box: {
      std::string a = compile_rec(t->lhs, ctx);
      std::string va = ctx.add_eq(arrow(t->name, {var(a)}));
      std::string vb = ctx.add_eq(arrow(t->name, {}));
      return ctx.add_eq(disj(var(va), var(vb)));
    }
    case Kind::Mu: {
      std::string a = compile_rec(t->lhs, ctx);
      ctx.sys.bound.push_back(t->name);
      ctx.sys.equations[t->name] = var(a);
      return t->name;
    }
    case Kind::Nu:
      throw std::invalid_argument("compile_sigma1: greatest fixed point");
  }
  assert(false);
  return "";
}

}  // namespace

CompiledSigma1 compile_sigma1(const Term& t) {
  if (classify(t) != Fragment::Sigma1)
    throw std::invalid_argument("compile_sigma1: input not sigma1");
  CompileCtx ctx;
  ctx.used = free_vars(t);
  for (const auto& g : generators_of(t)) ctx.used.insert(g);
  int bc = 0;
  Term renamed = rename_binders(t, ctx.used, bc);

  CompiledSigma1 out;
  out.designated = compile_rec(renamed, ctx);
  out.system = std::move(ctx.sys);
  out.literal_bindings = std::move(ctx.lits);
  // Parameters: literal routes plus the input's genuinely free variables.
  for (const auto& [y, lit] : out.literal_bindings) out.system.params.push_back(y);
  auto bs = out.system.bound_set();
  for (const auto& v : free_vars(renamed))
    if (!bs.count(v)) out.system.params.push_back(v);
  out.system.validate();
  return out;
}

Env CompiledSigma1::make_env(const KripkeModel& m, const Env& outer) const {
  Env env = outer;
  for (const auto& [y, lit] : literal_bindings) env[y] = eval(m, lit);
  return env;
}

// ---------------------------------------------------------------------------
// Regular harness.

std::pair<RegularHarnessTrace, HarnessVerdicts> regular_harness(
    const Term& f, const Term& g, const KripkeModel& m, int depth, int width,
    const Env& env, const std::string& xname, const std::string& yname) {
  for (const auto& v : {xname, yname})
    if (!positive_in(f, v) || !positive_in(g, v))
      throw std::invalid_argument("regular_harness: maps not positive in " + v);
  if (width <= 0) width = std::max(1, m.n);
  RegularHarnessTrace tr;
  tr.depth = depth;
  tr.width = width;

  auto F = [&](Elem a, Elem b) {
    Env e = env;
    e[xname] = a;
    e[yname] = b;
    return eval(m, f, e);
  };
  auto G = [&](Elem a, Elem b) {
    Env e = env;
    e[xname] = a;
    e[yname] = b;
    return eval(m, g, e);
  };
  auto g_iter = [&](Elem a, int k) {  // g_a^k(bot)
    Elem cur = 0;
    for (int i = 0; i < k; ++i) cur = G(a, cur);
    return cur;
  };
  auto mu_y_g = [&](Elem a) {
    Elem cur = 0;
    for (;;) {
      Elem next = G(a, cur);
      if (next == cur) return cur;
      cur = next;
    }
  };

  tr.f_seq = {0};
  tr.g_seq = {0};
  tr.h_seq = {0};
  tr.i_seq = {0};
  for (int n = 0; n < depth; ++n) {
    tr.f_seq.push_back(F(tr.f_seq[n], tr.g_seq[n]));
    tr.g_seq.push_back(G(tr.f_seq[n], tr.g_seq[n]));
    Elem i_next = mu_y_g(tr.h_seq[n]);
    tr.i_seq.push_back(i_next);
    tr.h_seq.push_back(F(tr.h_seq[n], i_next));
  }

  // Word-indexed values per level, deduplicated: transitions depend on l
  // only, so distinct (l, m) pairs capture all words of each length.
  tr.level_pairs.push_back({{0, 0}});
  tr.level_join_l = {0};
  tr.level_join_m = {0};
  for (int n = 0; n < depth; ++n) {
    std::set<std::pair<Elem, Elem>> next;
    std::set<Elem> ls;
    for (const auto& [l, mm] : tr.level_pairs[n]) ls.insert(l);
    for (Elem l : ls)
      for (int k = 0; k <= width; ++k) {
        Elem mk = g_iter(l, k);
        next.insert({F(l, mk), mk});
      }
    std::vector<std::pair<Elem, Elem>> lv(next.begin(), next.end());
    Elem jl = 0, jm = 0;
    for (const auto& [l, mm] : lv) {
      jl |= l;
      jm |= mm;
    }
    tr.level_pairs.push_back(std::move(lv));
    tr.level_join_l.push_back(jl);
    tr.level_join_m.push_back(jm);
  }

  HarnessVerdicts v;
  v.chain_dominated = true;
  for (int n = 0; n <= depth; ++n)
    if ((tr.f_seq[n] & ~tr.h_seq[n]) || (tr.g_seq[n] & ~tr.i_seq[n]))
      v.chain_dominated = false;

  v.level_joins_match = true;
  for (int n = 0; n <= depth; ++n)
    if (tr.level_join_l[n] != tr.h_seq[n] || tr.level_join_m[n] != tr.i_seq[n])
      v.level_joins_match = false;

  // Stabilized joint chain dominates every word-indexed pair.
  Elem fs = 0, gs = 0;
  for (;;) {
    Elem fn = F(fs, gs), gn = G(fs, gs);
    if (fn == fs && gn == gs) break;
    fs = fn;
    gs = gn;
  }
  v.pairs_bounded = true;
  for (const auto& level : tr.level_pairs)
    for (const auto& [l, mm] : level)
      if ((l & ~fs) || (mm & ~gs)) v.pairs_bounded = false;

  return {tr, v};
}

}  // namespace mualg
