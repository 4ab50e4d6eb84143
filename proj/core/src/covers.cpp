#include "mualg/covers.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>
#include <stdexcept>

namespace mualg {

namespace adj {

namespace {
AdjointPtr node(Adjoint a) { return std::make_shared<const Adjoint>(std::move(a)); }
}  // namespace

AdjointPtr identity() {
  Adjoint a;
  a.op = Adjoint::Op::Identity;
  return node(std::move(a));
}

AdjointPtr proj(int index, int arity) {
  if (index < 0 || index >= arity)
    throw std::invalid_argument("adjoint: projection index out of range");
  Adjoint a;
  a.op = Adjoint::Op::Proj;
  a.arity = arity;
  a.index = index;
  return node(std::move(a));
}

AdjointPtr pair_of(const std::vector<AdjointPtr>& parts) {
  if (parts.empty()) throw std::invalid_argument("adjoint: empty pairing");
  Adjoint a;
  a.op = Adjoint::Op::Pair;
  a.arity = parts[0]->arity;
  a.coarity = 0;
  for (const auto& p : parts) {
    if (p->arity != a.arity)
      throw std::invalid_argument("adjoint: pairing over mismatched arities");
    a.coarity += p->coarity;
  }
  a.parts = parts;
  return node(std::move(a));
}

AdjointPtr compose(const AdjointPtr& outer, const AdjointPtr& inner) {
  if (inner->coarity != outer->arity)
    throw std::invalid_argument("adjoint: composition dimension mismatch");
  Adjoint a;
  a.op = Adjoint::Op::Compose;
  a.arity = inner->arity;
  a.coarity = outer->coarity;
  a.parts = {outer, inner};
  return node(std::move(a));
}

AdjointPtr join(int k) {
  if (k < 0) throw std::invalid_argument("adjoint: negative join arity");
  Adjoint a;
  a.op = Adjoint::Op::Join;
  a.arity = k;
  return node(std::move(a));
}

AdjointPtr constant(const Term& k, int arity) {
  Adjoint a;
  a.op = Adjoint::Op::Const;
  a.arity = arity;
  a.constant = k;
  return node(std::move(a));
}

AdjointPtr const_meet(const Term& k) {
  Adjoint a;
  a.op = Adjoint::Op::ConstMeet;
  a.constant = k;
  return node(std::move(a));
}

AdjointPtr dia(const std::string& action) {
  Adjoint a;
  a.op = Adjoint::Op::Dia;
  a.action = action;
  return node(std::move(a));
}

AdjointPtr spcon_map(const SpconSpec& spec) {
  spec.validate();
  Adjoint a;
  a.op = Adjoint::Op::Spcon;
  a.spec = spec;
  a.arity = int(spec.coordinates().size());
  return node(std::move(a));
}

AdjointPtr mu(const AdjointPtr& inner, const std::vector<int>& bound_coords) {
  if (bound_coords.empty())
    throw std::invalid_argument("adjoint: mu over no coordinates");
  std::set<int> b(bound_coords.begin(), bound_coords.end());
  if (int(b.size()) != int(bound_coords.size()))
    throw std::invalid_argument("adjoint: repeated mu coordinate");
  for (int i : bound_coords)
    if (i < 0 || i >= inner->arity)
      throw std::invalid_argument("adjoint: mu coordinate out of range");
  if (inner->coarity != int(bound_coords.size()))
    throw std::invalid_argument("adjoint: mu needs coarity = |bound block|");
  Adjoint a;
  a.op = Adjoint::Op::Mu;
  a.arity = inner->arity - int(bound_coords.size());
  a.coarity = int(bound_coords.size());
  a.parts = {inner};
  a.bound_coords = bound_coords;
  return node(std::move(a));
}

std::string describe(const AdjointPtr& d) {
  switch (d->op) {
    case Adjoint::Op::Identity: return "id";
    case Adjoint::Op::Proj:
      return "proj" + std::to_string(d->index) + "/" + std::to_string(d->arity);
    case Adjoint::Op::Pair: {
      std::string s = "<";
      for (std::size_t i = 0; i < d->parts.size(); ++i)
        s += (i ? "," : "") + describe(d->parts[i]);
      return s + ">";
    }
    case Adjoint::Op::Compose:
      return describe(d->parts[0]) + "." + describe(d->parts[1]);
    case Adjoint::Op::Join: return "join" + std::to_string(d->arity);
    case Adjoint::Op::Const: return "const";
    case Adjoint::Op::ConstMeet: return "cmeet";
    case Adjoint::Op::Dia: return "dia(" + d->action + ")";
    case Adjoint::Op::Spcon: return "spcon";
    case Adjoint::Op::Mu: return "mu." + describe(d->parts[0]);
  }
  return "?";
}

}  // namespace adj

// ---------------------------------------------------------------------------
// Term-level pieces.

bool syntactic_leq_approx(const Term& a_in, const Term& b_in) {
  Term a = canonical(simplify_lattice(a_in));
  Term b = canonical(simplify_lattice(b_in));
  std::function<bool(const Term&, const Term&)> rec = [&](const Term& x,
                                                          const Term& y) {
    if (x->kind == Kind::Bot || y->kind == Kind::Top) return true;
    if (structural_equal(x, y)) return true;
    // x <= y1 \/ y2 when x fits under either side.
    if (y->kind == Kind::Or && (rec(x, y->lhs) || rec(x, y->rhs))) return true;
    // x1 /\ x2 <= y when either side fits.
    if (x->kind == Kind::And && (rec(x->lhs, y) || rec(x->rhs, y))) return true;
    // Componentwise: joins on the left, meets on the right.
    if (x->kind == Kind::Or) return rec(x->lhs, y) && rec(x->rhs, y);
    if (y->kind == Kind::And) return rec(x, y->lhs) && rec(x, y->rhs);
    if ((x->kind == Kind::Dia && y->kind == Kind::Dia) ||
        (x->kind == Kind::Box && y->kind == Kind::Box))
      if (x->name == y->name) return rec(x->lhs, y->lhs);
    return false;
  };
  return rec(a, b);
}

Term dia_right_adjoint(const std::string& action,
                       const std::vector<Clause>& clauses) {
  std::vector<Term> parts;
  for (const auto& c : clauses) {
    if (c.syntactically_top()) {
      parts.push_back(top());
      continue;
    }
    auto it = c.dia_part.find(action);
    parts.push_back(it == c.dia_part.end() ? bot() : it->second);
  }
  return simplify_lattice(conj_of(parts));
}

std::vector<std::vector<Term>> spcon_cover(const SpconSpec& spec,
                                           const Clause& b) {
  spec.validate();
  const auto coords = spec.coordinates();
  auto top_vec = [&] { return std::vector<Term>(coords.size(), top()); };

  bool lambda_inconsistent = false;
  for (const auto& l : spec.literals) {
    Literal flip = l;
    flip.negated = !flip.negated;
    if (std::count(spec.literals.begin(), spec.literals.end(), flip))
      lambda_inconsistent = true;
  }
  bool lambda_meets_gamma = false;
  for (const auto& l : spec.literals)
    if (b.literals.count(l)) lambda_meets_gamma = true;
  if (b.syntactically_top() || lambda_inconsistent || lambda_meets_gamma)
    return {top_vec()};

  std::map<std::string, std::pair<std::size_t, std::size_t>> block_span;
  std::size_t off = 0;
  for (const auto& [act, xs] : spec.blocks) {
    block_span[act] = {off, xs.size()};
    off += xs.size();
  }

  std::vector<std::vector<Term>> out;
  for (const auto& [act, xs] : spec.blocks) {
    auto dit = b.dia_part.find(act);
    Term d_sigma = dit == b.dia_part.end() ? bot() : dit->second;
    auto [start, len] = block_span[act];
    // Single-slot vectors: d_sigma at one coordinate of the block.
    for (std::size_t i = 0; i < len; ++i) {
      auto v = top_vec();
      v[start + i] = d_sigma;
      out.push_back(std::move(v));
    }
    // Whole-block vectors: d_sigma \/ e across the block, per box body.
    auto bit = b.box_part.find(act);
    if (bit != b.box_part.end()) {
      for (const auto& e : bit->second) {
        auto v = top_vec();
        Term de = simplify_lattice(disj(d_sigma, e));
        for (std::size_t i = 0; i < len; ++i) v[start + i] = de;
        out.push_back(std::move(v));
      }
    }
  }
  return out;
}

KleeneChain dia_radj_chain(const Term& b, const std::string& action, int budget) {
  KleeneChain out;
  out.fl_bound = fl_closure(b).size();
  TermSet seen;
  Term cur = canonical(simplify_lattice(b));
  for (int i = 0; i <= budget; ++i) {
    if (!seen.insert(cur)) {
      out.stabilized = true;
      out.steps = std::size_t(i);
      return out;
    }
    out.chain.push_back(cur);
    cur = canonical(dia_right_adjoint(action, modal_cnf(cur)));
  }
  out.steps = out.chain.size();
  return out;
}

// ---------------------------------------------------------------------------
// Backend policies.

namespace {

struct LatticePolicy {
  const KripkeModel* m;
  using E = Elem;
  E top_e() const { return m->universe(); }
  E bot_e() const { return 0; }
  E meet(E a, E b) const { return a & b; }
  E join(E a, E b) const { return a | b; }
  bool leq(E a, E b) const { return (a & ~b) == 0; }
  bool eq(E a, E b) const { return a == b; }
  E canon(E a) const { return a; }
  E heyting(E k, E x) const { return m->complement(k) | x; }
  E dia_apply(const std::string& act, E a) const { return m->eval_dia(act, a); }
  E dia_radj(const std::string& act, E a) const { return m->dia_radj(act, a); }
  E const_val(const Term& k) const { return eval(*m, k); }
  E spcon_apply(const SpconSpec& spec, const std::vector<E>& in) const {
    Env env;
    auto coords = spec.coordinates();
    for (std::size_t i = 0; i < coords.size(); ++i) env[coords[i]] = in[i];
    return eval(*m, spcon(spec), env);
  }
  std::optional<std::vector<std::vector<E>>> spcon_covers(const SpconSpec&,
                                                          E) const {
    // The clause-shaped covering sets presuppose the free algebra; there is
    // no exact rule on an arbitrary finite model.
    return std::nullopt;
  }
  std::optional<E> mu_apply_symbolic(const Adjoint&, const std::vector<E>&) const {
    return std::nullopt;  // lattice side iterates instead
  }
};

struct SyntacticPolicy {
  using E = Term;
  E top_e() const { return top(); }
  E bot_e() const { return bot(); }
  E meet(E a, E b) const { return simplify_lattice(conj(a, b)); }
  E join(E a, E b) const { return simplify_lattice(disj(a, b)); }
  bool leq(E a, E b) const { return syntactic_leq_approx(a, b); }
  bool eq(E a, E b) const {
    return structural_equal(canon(a), canon(b));
  }
  E canon(E a) const { return canonical(simplify_lattice(a)); }
  E heyting(E k, E x) const {
    return simplify_lattice(disj(nnf(neg(k)), x));
  }
  E dia_apply(const std::string& act, E a) const {
    return simplify_lattice(dia(act, a));
  }
  E dia_radj(const std::string& act, E a) const {
    return dia_right_adjoint(act, modal_cnf(a));
  }
  E const_val(const Term& k) const { return k; }
  E spcon_apply(const SpconSpec& spec, const std::vector<E>& in) const {
    std::map<std::string, Term> binding;
    auto coords = spec.coordinates();
    for (std::size_t i = 0; i < coords.size(); ++i) binding[coords[i]] = in[i];
    return simplify_lattice(substitute(spcon(spec), binding));
  }
  std::optional<std::vector<std::vector<E>>> spcon_covers(const SpconSpec& spec,
                                                          E target) const {
    // Meet-generated targets: a cover of the clause meet is a componentwise
    // meet of per-clause covers.
    auto clauses = modal_cnf(target);
    if (clauses.empty()) {
      return std::vector<std::vector<E>>{
          std::vector<E>(spec.coordinates().size(), top())};
    }
    std::vector<std::vector<std::vector<Term>>> per_clause;
    for (const auto& c : clauses) per_clause.push_back(spcon_cover(spec, c));
    std::vector<std::vector<E>> acc = per_clause[0];
    for (std::size_t i = 1; i < per_clause.size(); ++i) {
      std::vector<std::vector<E>> next;
      for (const auto& a : acc)
        for (const auto& b : per_clause[i]) {
          std::vector<E> v(a.size());
          for (std::size_t j = 0; j < a.size(); ++j) v[j] = meet(a[j], b[j]);
          next.push_back(std::move(v));
        }
      acc = std::move(next);
    }
    return acc;
  }
  std::optional<E> mu_apply_symbolic(const Adjoint& d,
                                     const std::vector<E>& params) const;
};

// ---------------------------------------------------------------------------
// Generic engine.

template <typename P>
struct Engine {
  P pol;
  int budget;
  using E = typename P::E;
  using Vec = std::vector<E>;

  Vec apply(const AdjointPtr& d, const Vec& in) const {
    if (int(in.size()) != d->arity)
      throw std::invalid_argument("adjoint apply: arity mismatch");
    switch (d->op) {
      case Adjoint::Op::Identity:
        return {in[0]};
      case Adjoint::Op::Proj:
        return {in[d->index]};
      case Adjoint::Op::Join: {
        E acc = pol.bot_e();
        for (const auto& x : in) acc = pol.join(acc, x);
        return {acc};
      }
      case Adjoint::Op::Const:
        return {pol.const_val(d->constant)};
      case Adjoint::Op::ConstMeet:
        return {pol.meet(pol.const_val(d->constant), in[0])};
      case Adjoint::Op::Dia:
        return {pol.dia_apply(d->action, in[0])};
      case Adjoint::Op::Pair: {
        Vec out;
        for (const auto& p : d->parts) {
          Vec sub = apply(p, in);
          out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
      }
      case Adjoint::Op::Compose:
        return apply(d->parts[0], apply(d->parts[1], in));
      case Adjoint::Op::Spcon:
        return {pol.spcon_apply(d->spec, in)};
      case Adjoint::Op::Mu:
        return mu_apply(d, in);
    }
    assert(false);
    return {};
  }

  Vec mu_apply(const AdjointPtr& d, const Vec& params) const {
    if (auto sym = pol.mu_apply_symbolic(*d, params)) return {*sym};
    const AdjointPtr& inner = d->parts[0];
    Vec cur(d->bound_coords.size(), pol.bot_e());
    for (int i = 0; i <= budget; ++i) {
      Vec full = assemble(d, cur, params);
      Vec next = apply(inner, full);
      bool same = true;
      for (std::size_t j = 0; j < cur.size(); ++j)
        if (!pol.eq(cur[j], next[j])) same = false;
      if (same) return cur;
      cur = std::move(next);
    }
    throw std::runtime_error("mu apply: no stabilization within budget");
  }

  // Interleave the bound block and the parameters into the inner map's
  // input space.
  Vec assemble(const AdjointPtr& d, const Vec& bound_vals,
               const Vec& params) const {
    const AdjointPtr& inner = d->parts[0];
    Vec full(inner->arity);
    std::vector<bool> is_bound(inner->arity, false);
    for (std::size_t j = 0; j < d->bound_coords.size(); ++j) {
      full[d->bound_coords[j]] = bound_vals[j];
      is_bound[d->bound_coords[j]] = true;
    }
    std::size_t pi = 0;
    for (int j = 0; j < inner->arity; ++j)
      if (!is_bound[j]) full[j] = params[pi++];
    return full;
  }

  std::vector<Vec> prune(std::vector<Vec> vs) const {
    // Canonicalize, deduplicate, then keep the maximal ones under the
    // backend order.
    for (auto& v : vs)
      for (auto& x : v) x = pol.canon(x);
    std::vector<Vec> dedup;
    for (auto& v : vs) {
      bool dup = false;
      for (const auto& u : dedup) {
        bool same = true;
        for (std::size_t j = 0; j < v.size(); ++j)
          if (!pol.eq(v[j], u[j])) same = false;
        if (same) dup = true;
      }
      if (!dup) dedup.push_back(v);
    }
    auto vleq = [&](const Vec& a, const Vec& b) {
      for (std::size_t j = 0; j < a.size(); ++j)
        if (!pol.leq(a[j], b[j])) return false;
      return true;
    };
    std::vector<Vec> out;
    for (std::size_t i = 0; i < dedup.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < dedup.size() && !dominated; ++j)
        if (i != j && vleq(dedup[i], dedup[j]) && !vleq(dedup[j], dedup[i]))
          dominated = true;
      if (!dominated) out.push_back(dedup[i]);
    }
    return out;
  }

  std::vector<Vec> cover(const AdjointPtr& d, const Vec& target) const {
    if (int(target.size()) != d->coarity)
      throw std::invalid_argument("cover: target dimension mismatch");
    switch (d->op) {
      case Adjoint::Op::Identity:
        return {{target[0]}};
      case Adjoint::Op::Proj: {
        Vec v(d->arity, pol.top_e());
        v[d->index] = target[0];
        return {v};
      }
      case Adjoint::Op::Join:
        return {Vec(d->arity, target[0])};  // the diagonal
      case Adjoint::Op::Const:
        if (pol.leq(pol.const_val(d->constant), target[0]))
          return {Vec(d->arity, pol.top_e())};
        return {};
      case Adjoint::Op::ConstMeet:
        return {{pol.heyting(pol.const_val(d->constant), target[0])}};
      case Adjoint::Op::Dia:
        return {{pol.dia_radj(d->action, target[0])}};
      case Adjoint::Op::Pair: {
        // Componentwise meets of the parts' covers.
        std::vector<Vec> acc{Vec(d->arity, pol.top_e())};
        std::size_t off = 0;
        for (const auto& p : d->parts) {
          Vec sub(target.begin() + off, target.begin() + off + p->coarity);
          off += p->coarity;
          auto cs = cover(p, sub);
          std::vector<Vec> next;
          for (const auto& a : acc)
            for (const auto& c : cs) {
              Vec v(d->arity);
              for (int j = 0; j < d->arity; ++j) v[j] = pol.meet(a[j], c[j]);
              next.push_back(std::move(v));
            }
          acc = std::move(next);
        }
        return prune(std::move(acc));
      }
      case Adjoint::Op::Compose: {
        std::vector<Vec> out;
        for (const auto& c : cover(d->parts[0], target)) {
          auto cs = cover(d->parts[1], c);
          out.insert(out.end(), cs.begin(), cs.end());
        }
        return prune(std::move(out));
      }
      case Adjoint::Op::Spcon: {
        auto cs = pol.spcon_covers(d->spec, target[0]);
        if (!cs)
          throw std::invalid_argument(
              "cover: no special-conjunction rule on this backend");
        return prune(std::move(*cs));
      }
      case Adjoint::Op::Mu:
        return mu_cover(d, target);
    }
    assert(false);
    return {};
  }

  CoverGraphT<E> graph(const AdjointPtr& inner, const std::vector<int>& bound,
                       const Vec& root, int vbudget) const {
    CoverGraphT<E> g;
    Vec croot = root;
    for (auto& x : croot) x = pol.canon(x);
    g.vertices.push_back(croot);
    std::vector<std::size_t> work{0};
    auto find_vertex = [&](const Vec& v) -> int {
      for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        bool same = true;
        for (std::size_t j = 0; j < v.size(); ++j)
          if (!pol.eq(g.vertices[i][j], v[j])) same = false;
        if (same) return int(i);
      }
      return -1;
    };
    std::vector<bool> is_bound(inner->arity, false);
    for (int b : bound) is_bound[b] = true;
    while (!work.empty()) {
      std::size_t cur = work.back();
      work.pop_back();
      for (const auto& c : cover(inner, g.vertices[cur])) {
        Vec dst, label;
        for (int j = 0; j < inner->arity; ++j)
          (is_bound[j] ? dst : label).push_back(pol.canon(c[j]));
        int idx = find_vertex(dst);
        if (idx < 0) {
          if (int(g.vertices.size()) >= vbudget) {
            g.closed = false;
            return g;
          }
          g.vertices.push_back(dst);
          idx = int(g.vertices.size()) - 1;
          work.push_back(std::size_t(idx));
        }
        g.edges.push_back({int(cur), label, idx});
      }
    }
    g.closed = true;
    return g;
  }

  std::vector<Vec> mu_cover(const AdjointPtr& d, const Vec& target) const {
    const AdjointPtr& inner = d->parts[0];
    auto g = graph(inner, d->bound_coords, target, budget);
    if (!g.closed)
      throw std::runtime_error("mu_cover: cover graph not closed within budget");
    // Adjacency.
    std::vector<std::vector<std::pair<int, int>>> adj(g.vertices.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      adj[g.edges[e].src].push_back({g.edges[e].dst, int(e)});
    const int label_dim = d->arity;

    std::vector<Vec> meets;
    long pan_count = 0;
    auto label_meet = [&](const Vec& a, std::size_t e) {
      Vec out = a;
      for (int j = 0; j < label_dim; ++j)
        out[j] = pol.meet(out[j], g.edges[e].label[j]);
      return out;
    };
    // Simple cycles from a vertex, meets accumulated.
    std::function<void(int, int, Vec, std::vector<bool>&)> cycles =
        [&](int origin, int at, Vec acc, std::vector<bool>& on_cycle) {
          for (const auto& [nxt, e] : adj[at]) {
            Vec acc2 = label_meet(acc, std::size_t(e));
            if (nxt == origin) {
              meets.push_back(acc2);
              if (++pan_count > 200000)
                throw std::runtime_error("mu_cover: pan budget exhausted");
              continue;
            }
            if (on_cycle[nxt]) continue;
            on_cycle[nxt] = true;
            cycles(origin, nxt, std::move(acc2), on_cycle);
            on_cycle[nxt] = false;
          }
        };
    // Simple paths from the root; a cycle may hang off every path end.
    std::vector<bool> on_path(g.vertices.size(), false);
    std::function<void(int, Vec)> paths = [&](int at, Vec acc) {
      std::vector<bool> on_cycle(g.vertices.size(), false);
      cycles(at, at, acc, on_cycle);
      for (const auto& [nxt, e] : adj[at]) {
        if (on_path[nxt]) continue;
        on_path[nxt] = true;
        paths(nxt, label_meet(acc, std::size_t(e)));
        on_path[nxt] = false;
      }
    };
    on_path[0] = true;
    paths(0, Vec(label_dim, pol.top_e()));
    return prune(std::move(meets));
  }

  ReachResult<E> reach(const std::vector<AdjointPtr>& schemes,
                       const std::vector<E>& seeds, int rbudget) const {
    ReachResult<E> out;
    std::vector<E> states;
    auto add = [&](const E& x) {
      E c = pol.canon(x);
      for (const auto& s : states)
        if (pol.eq(s, c)) return false;
      states.push_back(c);
      return true;
    };
    for (const auto& s : seeds) add(s);
    bool grew = true;
    out.closed = true;
    while (grew) {
      grew = false;
      for (const auto& f : schemes) {
        // All coarity-tuples over the current states.
        std::vector<std::size_t> idx(f->coarity, 0);
        for (;;) {
          Vec v;
          for (int j = 0; j < f->coarity; ++j) v.push_back(states[idx[j]]);
          for (const auto& c : cover(f, v))
            for (const auto& x : c)
              if (add(x)) {
                grew = true;
                if (int(states.size()) > rbudget) {
                  out.closed = false;
                  out.states = states;
                  return out;
                }
              }
          int j = 0;
          for (; j < f->coarity; ++j) {
            if (++idx[j] < states.size()) break;
            idx[j] = 0;
          }
          if (j == f->coarity || f->coarity == 0) break;
        }
        if (f->coarity == 0) break;
      }
    }
    out.states = states;
    return out;
  }
};

std::optional<Term> SyntacticPolicy::mu_apply_symbolic(
    const Adjoint& d, const std::vector<Term>& params) const {
  if (d.bound_coords.size() != 1 || d.parts[0]->coarity != 1)
    return std::nullopt;
  const AdjointPtr& inner = d.parts[0];
  // Apply the inner map to fresh variables, then bind.
  std::vector<Term> vars_in;
  std::vector<std::string> names;
  for (int j = 0; j < inner->arity; ++j) {
    names.push_back("c" + std::to_string(j) + "_");
    vars_in.push_back(var(names.back()));
  }
  Engine<SyntacticPolicy> eng{*this, 64};
  Term body = eng.apply(inner, vars_in)[0];
  const int b = d.bound_coords[0];
  std::map<std::string, Term> binding;
  std::size_t pi = 0;
  for (int j = 0; j < inner->arity; ++j) {
    if (j == b) continue;
    binding[names[j]] = params[pi++];
  }
  return simplify_lattice(mu(names[b], substitute(body, binding)));
}

}  // namespace

// ---------------------------------------------------------------------------

LatticeCovers::LatticeCovers(const KripkeModel& m, int budget)
    : model_(&m), budget_(budget) {}

namespace {
Engine<LatticePolicy> lat_engine(const LatticeCovers& lc) {
  return Engine<LatticePolicy>{LatticePolicy{&lc.model()}, lc.budget()};
}
}  // namespace

std::vector<Elem> LatticeCovers::apply(const AdjointPtr& d,
                                       const std::vector<Elem>& in) const {
  return lat_engine(*this).apply(d, in);
}

std::vector<std::vector<Elem>> LatticeCovers::cover(
    const AdjointPtr& d, const std::vector<Elem>& target) const {
  return lat_engine(*this).cover(d, target);
}

CoverGraphT<Elem> LatticeCovers::cover_graph(const AdjointPtr& inner,
                                             const std::vector<int>& bound,
                                             const std::vector<Elem>& root,
                                             int budget) const {
  return lat_engine(*this).graph(inner, bound, root, budget);
}

std::vector<std::vector<Elem>> LatticeCovers::mu_cover(
    const AdjointPtr& mu_d, const std::vector<Elem>& target) const {
  if (mu_d->op != Adjoint::Op::Mu)
    throw std::invalid_argument("mu_cover: not a fixed-point descriptor");
  return lat_engine(*this).mu_cover(mu_d, target);
}

ReachResult<Elem> LatticeCovers::automaton_reach(
    const std::vector<AdjointPtr>& schemes, const std::vector<Elem>& seeds,
    int budget) const {
  return lat_engine(*this).reach(schemes, seeds, budget);
}

SupResult<Elem> LatticeCovers::constructive_sup(const AdjointPtr& mu_d,
                                                const std::vector<Elem>& params,
                                                int budget) const {
  if (mu_d->op != Adjoint::Op::Mu)
    throw std::invalid_argument("constructive_sup: not a fixed-point descriptor");
  auto eng = lat_engine(*this);
  SupResult<Elem> out;
  std::vector<Elem> cur(mu_d->bound_coords.size(), 0);
  out.entries.push_back(cur);
  for (;;) {
    auto next = eng.apply(mu_d->parts[0], eng.assemble(mu_d, cur, params));
    out.entries.push_back(next);
    if (next == cur) break;
    cur = next;
  }
  out.stab_index = out.entries.size() - 2;
  auto g = eng.graph(mu_d->parts[0], mu_d->bound_coords, cur, budget);
  if (!g.closed)
    throw std::runtime_error(
        "constructive_sup: finite type not established within budget");
  out.graph_vertices = int(g.vertices.size());
  // Pigeonhole instance: whenever the approximant prefix of the length of
  // the target's closed cover graph sits below a target, so does the value.
  // Exhaustive over scalar targets on small carriers.
  out.pigeonhole_ok = true;
  if (mu_d->bound_coords.size() == 1 && model_->n <= 8) {
    for (Elem l = 0; l <= model_->universe(); ++l) {
      auto gl = eng.graph(mu_d->parts[0], mu_d->bound_coords, {l}, budget);
      if (!gl.closed) {
        out.pigeonhole_ok = false;
        break;
      }
      std::vector<Elem> probe(1, 0);
      bool prefix_below = (probe[0] & ~l) == 0;
      for (std::size_t k = 0; k < gl.vertices.size() && prefix_below; ++k) {
        probe = eng.apply(mu_d->parts[0], eng.assemble(mu_d, probe, params));
        if (probe[0] & ~l) prefix_below = false;
      }
      if (prefix_below && (cur[0] & ~l)) out.pigeonhole_ok = false;
    }
  }
  return out;
}

SyntacticCovers::SyntacticCovers(int budget) : budget_(budget) {}

namespace {
Engine<SyntacticPolicy> syn_engine(int budget) {
  return Engine<SyntacticPolicy>{SyntacticPolicy{}, budget};
}
}  // namespace

std::vector<Term> SyntacticCovers::apply(const AdjointPtr& d,
                                         const std::vector<Term>& in) const {
  return syn_engine(budget_).apply(d, in);
}

std::vector<std::vector<Term>> SyntacticCovers::cover(
    const AdjointPtr& d, const std::vector<Term>& target) const {
  return syn_engine(budget_).cover(d, target);
}

CoverGraphT<Term> SyntacticCovers::cover_graph(const AdjointPtr& inner,
                                               const std::vector<int>& bound,
                                               const std::vector<Term>& root,
                                               int budget) const {
  return syn_engine(budget_).graph(inner, bound, root, budget);
}

std::vector<std::vector<Term>> SyntacticCovers::mu_cover(
    const AdjointPtr& mu_d, const std::vector<Term>& target) const {
  if (mu_d->op != Adjoint::Op::Mu)
    throw std::invalid_argument("mu_cover: not a fixed-point descriptor");
  return syn_engine(budget_).mu_cover(mu_d, target);
}

ReachResult<Term> SyntacticCovers::automaton_reach(
    const std::vector<AdjointPtr>& schemes, const std::vector<Term>& seeds,
    int budget) const {
  return syn_engine(budget_).reach(schemes, seeds, budget);
}

}  // namespace mualg
