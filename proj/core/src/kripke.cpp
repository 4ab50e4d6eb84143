#include "mualg/kripke.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <stdexcept>

namespace mualg {

Elem KripkeModel::eval_dia(const std::string& action, Elem z) const {
  auto it = succ.find(action);
  if (it == succ.end())
    throw std::invalid_argument("unknown action: " + action);
  Elem out = 0;
  for (int s = 0; s < n; ++s)
    if (it->second[s] & z) out |= Elem(1) << s;
  return out;
}

Elem KripkeModel::eval_box(const std::string& action, Elem z) const {
  auto it = succ.find(action);
  if (it == succ.end())
    throw std::invalid_argument("unknown action: " + action);
  Elem out = 0;
  for (int s = 0; s < n; ++s)
    if ((it->second[s] & ~z) == 0) out |= Elem(1) << s;
  return out;
}

Elem KripkeModel::dia_radj(const std::string& action, Elem m) const {
  auto it = succ.find(action);
  if (it == succ.end())
    throw std::invalid_argument("unknown action: " + action);
  // <a>z <= m  iff  z avoids every successor of a state outside m.
  Elem blocked = 0;
  for (int s = 0; s < n; ++s)
    if (!((m >> s) & 1)) blocked |= it->second[s];
  return universe() & ~blocked;
}

void KripkeModel::add_edge(const std::string& action, int from, int to) {
  succ[action][from] |= Elem(1) << to;
}

KripkeModel KripkeModel::make(
    int n, const std::vector<std::string>& actions,
    const std::vector<std::pair<std::string, std::vector<std::pair<int, int>>>>& edges,
    const std::map<std::string, std::vector<int>>& valuation) {
  KripkeModel m;
  m.n = n;
  for (int i = 0; i < n; ++i) m.state_names.push_back("s" + std::to_string(i));
  m.actions = actions;
  for (const auto& a : actions) m.succ[a] = std::vector<Elem>(n, 0);
  for (const auto& [a, es] : edges)
    for (auto [f, t] : es) m.add_edge(a, f, t);
  for (const auto& [g, states] : valuation) {
    Elem z = 0;
    for (int s : states) z |= Elem(1) << s;
    m.val[g] = z;
  }
  return m;
}

namespace {

Elem eval_rec(const KripkeModel& m, const Term& t, Env& env) {
  switch (t->kind) {
    case Kind::Gen: {
      auto it = m.val.find(t->name);
      return it == m.val.end() ? 0 : it->second;
    }
    case Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end())
        throw std::invalid_argument("unbound variable: " + t->name);
      return it->second;
    }
    case Kind::Top:
      return m.universe();
    case Kind::Bot:
      return 0;
    case Kind::And:
      return eval_rec(m, t->lhs, env) & eval_rec(m, t->rhs, env);
    case Kind::Or:
      return eval_rec(m, t->lhs, env) | eval_rec(m, t->rhs, env);
    case Kind::Neg:
      return m.complement(eval_rec(m, t->lhs, env));
    case Kind::Dia:
      return m.eval_dia(t->name, eval_rec(m, t->lhs, env));
    case Kind::Box:
      return m.eval_box(t->name, eval_rec(m, t->lhs, env));
    case Kind::Mu:
    case Kind::Nu: {
      Elem cur = t->kind == Kind::Mu ? 0 : m.universe();
      auto saved = env.find(t->name);
      Elem old = 0;
      bool had = false;
      if (saved != env.end()) {
        had = true;
        old = saved->second;
      }
      // A monotone body stabilizes within the chain height of the powerset.
      for (int step = 0;; ++step) {
        if (step > m.n + 2)
          throw std::invalid_argument(
              "fixed point did not stabilize; body not positive in " + t->name);
        env[t->name] = cur;
        Elem next = eval_rec(m, t->lhs, env);
        if (next == cur) break;
        cur = next;
      }
      if (had)
        env[t->name] = old;
      else
        env.erase(t->name);
      return cur;
    }
  }
  assert(false);
  return 0;
}

}  // namespace

Elem eval(const KripkeModel& m, const Term& t, const Env& env) {
  Env e = env;
  return eval_rec(m, t, e);
}

namespace {

ApproximantTrace iterate_from(const KripkeModel& m, const Term& body,
                              const std::string& v, const Env& env, Elem start) {
  if (!positive_in(body, v))
    throw std::invalid_argument("approximants need a body positive in " + v);
  ApproximantTrace tr;
  Elem cur = start;
  tr.entries.push_back(cur);
  for (;;) {
    Env e = env;
    e[v] = cur;
    Elem next = eval(m, body, e);
    tr.entries.push_back(next);
    if (next == cur) break;
    cur = next;
  }
  tr.stab_index = tr.entries.size() - 2;
  return tr;
}

}  // namespace

ApproximantTrace lfp_iterate(const KripkeModel& m, const Term& body,
                             const std::string& v, const Env& env) {
  return iterate_from(m, body, v, env, 0);
}

ApproximantTrace gfp_iterate(const KripkeModel& m, const Term& body,
                             const std::string& v, const Env& env) {
  return iterate_from(m, body, v, env, m.universe());
}

std::vector<Elem> atoms(const KripkeModel& m) {
  std::vector<Elem> out;
  for (int s = 0; s < m.n; ++s) out.push_back(Elem(1) << s);
  return out;
}

Character char_hom(const KripkeModel& m, Elem y) {
  (void)m;
  if (y == 0)
    throw std::invalid_argument("char_hom: no prime filter above bottom");
  Character c;
  c.atom_state = __builtin_ctzll(y);  // least atom, for determinism
  return c;
}

TwoProductAlgebra::TwoProductAlgebra(
    const KripkeModel& m, const std::map<std::string, std::vector<Elem>>& ys)
    : model_(&m) {
  for (const auto& [act, elems] : ys) {
    std::vector<Character> cs;
    for (Elem y : elems) {
      if (y == 0)
        throw std::invalid_argument("product_with_two: bottom witness for " + act);
      cs.push_back(char_hom(m, y));
    }
    chars_[act] = cs;
  }
}

bool TwoProductAlgebra::chi(const std::string& action, Elem z) const {
  auto it = chars_.find(action);
  if (it == chars_.end()) return false;  // action outside Sigma
  for (const auto& c : it->second)
    if (c(z)) return true;
  return false;
}

ProductElem TwoProductAlgebra::meet(ProductElem a, ProductElem b) const {
  return {a.first & b.first, a.second && b.second};
}
ProductElem TwoProductAlgebra::join(ProductElem a, ProductElem b) const {
  return {a.first | b.first, a.second || b.second};
}
ProductElem TwoProductAlgebra::negate(ProductElem a) const {
  return {model_->complement(a.first), !a.second};
}
ProductElem TwoProductAlgebra::dia(const std::string& action, ProductElem a) const {
  return {model_->eval_dia(action, a.first), chi(action, a.first)};
}
ProductElem TwoProductAlgebra::box(const std::string& action, ProductElem a) const {
  return negate(dia(action, negate(a)));
}

namespace {

ProductElem product_eval_rec(const TwoProductAlgebra& alg, const Term& t,
                             std::map<std::string, ProductElem>& env,
                             const std::map<std::string, bool>& gen_bit) {
  switch (t->kind) {
    case Kind::Gen: {
      const auto& m = alg.base();
      auto vit = m.val.find(t->name);
      Elem z = vit == m.val.end() ? 0 : vit->second;
      auto bit = gen_bit.find(t->name);
      return {z, bit != gen_bit.end() && bit->second};
    }
    case Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end())
        throw std::invalid_argument("unbound variable: " + t->name);
      return it->second;
    }
    case Kind::Top:
      return alg.top_elem();
    case Kind::Bot:
      return alg.bot_elem();
    case Kind::And:
      return alg.meet(product_eval_rec(alg, t->lhs, env, gen_bit),
                      product_eval_rec(alg, t->rhs, env, gen_bit));
    case Kind::Or:
      return alg.join(product_eval_rec(alg, t->lhs, env, gen_bit),
                      product_eval_rec(alg, t->rhs, env, gen_bit));
    case Kind::Neg:
      return alg.negate(product_eval_rec(alg, t->lhs, env, gen_bit));
    case Kind::Dia:
      return alg.dia(t->name, product_eval_rec(alg, t->lhs, env, gen_bit));
    case Kind::Box:
      return alg.box(t->name, product_eval_rec(alg, t->lhs, env, gen_bit));
    case Kind::Mu:
    case Kind::Nu: {
      ProductElem cur = t->kind == Kind::Mu ? alg.bot_elem() : alg.top_elem();
      auto saved = env.find(t->name);
      ProductElem old;
      bool had = false;
      if (saved != env.end()) {
        had = true;
        old = saved->second;
      }
      for (int step = 0;; ++step) {
        if (step > alg.base().n + 3)
          throw std::invalid_argument(
              "fixed point did not stabilize; body not positive in " + t->name);
        env[t->name] = cur;
        ProductElem next = product_eval_rec(alg, t->lhs, env, gen_bit);
        if (next == cur) break;
        cur = next;
      }
      if (had)
        env[t->name] = old;
      else
        env.erase(t->name);
      return cur;
    }
  }
  assert(false);
  return {};
}

}  // namespace

ProductElem TwoProductAlgebra::eval(
    const Term& t, const std::map<std::string, ProductElem>& env,
    const std::map<std::string, bool>& gen_bit) const {
  std::map<std::string, ProductElem> e = env;
  return product_eval_rec(*this, t, e, gen_bit);
}

TwoProductAlgebra product_with_two(
    const KripkeModel& m, const std::map<std::string, std::vector<Elem>>& ys) {
  return TwoProductAlgebra(m, ys);
}

WhitmanReport whitman_check(const std::vector<Literal>& lambda,
                            const std::map<std::string, std::vector<Term>>& ys,
                            const KripkeModel& m) {
  WhitmanReport rep;
  std::set<Literal> lits(lambda.begin(), lambda.end());
  for (const auto& l : lits) {
    Literal flip = l;
    flip.negated = !flip.negated;
    if (lits.count(flip)) {
      rep.kind = WhitmanReport::Kind::LiteralClash;
      rep.clash_atom = l.atom;
      return rep;
    }
  }
  std::map<std::string, std::vector<Elem>> witnesses;
  for (const auto& [act, terms] : ys) {
    for (const auto& y : terms) {
      Elem z = eval(m, y);
      if (z == 0) {
        rep.kind = WhitmanReport::Kind::BottomWitness;
        rep.witness_action = act;
        rep.witness_term = y;
        return rep;
      }
      witnesses[act].push_back(z);
    }
  }
  TwoProductAlgebra alg(m, witnesses);
  // Literal-determined second coordinates: (p, T) when p in Lambda,
  // (p, F) when ~p in Lambda, (p, F) otherwise.
  std::map<std::string, bool> gen_bit;
  for (const auto& l : lambda)
    if (!l.negated) gen_bit[l.atom] = true;
  std::vector<Term> parts;
  for (const auto& l : lambda) parts.push_back(l.to_term());
  for (const auto& [act, terms] : ys) {
    std::vector<Term> ts(terms.begin(), terms.end());
    parts.push_back(box(act, disj_of(ts)));
    for (const auto& y : terms) parts.push_back(dia(act, y));
  }
  ProductElem v = alg.eval(conj_of(parts), {}, gen_bit);
  rep.kind = WhitmanReport::Kind::Certificate;
  rep.second_coordinate = v.second;
  rep.first_coordinate = v.first;
  return rep;
}

// ---------------------------------------------------------------------------

long enumerate_models(int states, const std::vector<std::string>& actions,
                      const std::vector<std::string>& generators,
                      const std::function<bool(const KripkeModel&)>& fn) {
  const int pairs = states * states;
  long visited = 0;
  // Relation choice per action: a bitstring over state pairs; valuation per
  // generator: a bitstring over states.
  std::vector<std::uint64_t> rel(actions.size(), 0);
  std::vector<std::uint64_t> valv(generators.size(), 0);
  const std::uint64_t rel_max = pairs >= 64 ? 0 : (std::uint64_t(1) << pairs);
  const std::uint64_t val_max = std::uint64_t(1) << states;
  if (pairs >= 64) throw std::invalid_argument("enumerate_models: too many states");

  std::function<bool(std::size_t)> loop_val = [&](std::size_t gi) -> bool {
    if (gi == generators.size()) {
      KripkeModel m;
      m.n = states;
      for (int i = 0; i < states; ++i)
        m.state_names.push_back("s" + std::to_string(i));
      m.actions = actions;
      for (std::size_t ai = 0; ai < actions.size(); ++ai) {
        auto& sv = m.succ[actions[ai]];
        sv.assign(states, 0);
        for (int f = 0; f < states; ++f)
          for (int t = 0; t < states; ++t)
            if ((rel[ai] >> (f * states + t)) & 1) sv[f] |= Elem(1) << t;
      }
      for (std::size_t gi2 = 0; gi2 < generators.size(); ++gi2)
        m.val[generators[gi2]] = valv[gi2];
      ++visited;
      return fn(m);
    }
    for (valv[gi] = 0; valv[gi] < val_max; ++valv[gi])
      if (!loop_val(gi + 1)) return false;
    return true;
  };
  std::function<bool(std::size_t)> loop_rel = [&](std::size_t ai) -> bool {
    if (ai == actions.size()) return loop_val(0);
    for (rel[ai] = 0; rel[ai] < rel_max; ++rel[ai])
      if (!loop_rel(ai + 1)) return false;
    return true;
  };
  loop_rel(0);
  return visited;
}

KripkeModel random_model(std::uint64_t seed, const ModelBounds& bounds) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nstates(bounds.min_states, bounds.max_states);
  KripkeModel m;
  m.n = nstates(rng);
  for (int i = 0; i < m.n; ++i) m.state_names.push_back("s" + std::to_string(i));
  for (int a = 0; a < bounds.num_actions; ++a)
    m.actions.push_back(std::string(1, char('a' + a)));
  std::uniform_int_distribution<int> coin(0, 1);
  // Edge density drawn per action keeps sparse and dense frames in the mix.
  std::uniform_int_distribution<int> density(1, 3);
  for (const auto& a : m.actions) {
    auto& sv = m.succ[a];
    sv.assign(m.n, 0);
    int d = density(rng);
    std::uniform_int_distribution<int> edge(0, 3);
    for (int f = 0; f < m.n; ++f)
      for (int t = 0; t < m.n; ++t)
        if (edge(rng) < d) sv[f] |= Elem(1) << t;
  }
  for (int g = 0; g < bounds.num_generators; ++g) {
    Elem z = 0;
    for (int s = 0; s < m.n; ++s)
      if (coin(rng)) z |= Elem(1) << s;
    m.val[std::string(1, char('p' + g))] = z;
  }
  return m;
}

namespace {

// Substitute fresh generators for free variables so refutation can pick
// arbitrary values for them.
Term close_with_generators(const Term& t) {
  std::map<std::string, Term> binding;
  for (const auto& v : free_vars(t)) binding[v] = gen("v_" + v);
  return substitute(t, binding);
}

}  // namespace

LeqVerdict check_leq(const Term& lhs_in, const Term& rhs_in,
                     const SamplerConfig& cfg) {
  LeqVerdict verdict;
  Term lhs = close_with_generators(lhs_in);
  Term rhs = close_with_generators(rhs_in);

  std::vector<std::string> actions = cfg.actions;
  std::vector<std::string> generators = cfg.generators;
  if (actions.empty()) {
    auto sa = actions_of(lhs);
    auto sb = actions_of(rhs);
    sa.insert(sb.begin(), sb.end());
    actions.assign(sa.begin(), sa.end());
    if (actions.empty()) actions.push_back("a");
  }
  if (generators.empty()) {
    auto sa = generators_of(lhs);
    auto sb = generators_of(rhs);
    sa.insert(sb.begin(), sb.end());
    generators.assign(sa.begin(), sa.end());
  }

  auto test = [&](const KripkeModel& m) -> bool {
    ++verdict.samples;
    Elem a = eval(m, lhs);
    Elem b = eval(m, rhs);
    if ((a & ~b) != 0) {
      verdict.refuted = true;
      verdict.counter_model = m;
      verdict.counter_state = __builtin_ctzll(a & ~b);
      return false;
    }
    return true;
  };

  // Exhaustive phase, budget-limited.
  for (int s = 0; s <= cfg.exhaustive_max_states && !verdict.refuted; ++s) {
    double count = 1;
    for (std::size_t i = 0; i < actions.size(); ++i)
      count *= double(std::uint64_t(1) << std::min(62, s * s));
    for (std::size_t i = 0; i < generators.size(); ++i)
      count *= double(std::uint64_t(1) << s);
    if (count > double(cfg.exhaustive_budget)) break;
    enumerate_models(s, actions, generators, test);
  }
  // Random phase; relations are re-keyed onto the requested action names.
  ModelBounds rb;
  rb.min_states = 1;
  rb.max_states = cfg.random_max_states;
  rb.num_actions = int(actions.size());
  rb.num_generators = 0;
  for (int i = 0; i < cfg.random_models && !verdict.refuted; ++i) {
    KripkeModel gen = random_model(cfg.seed * 0x9e3779b97f4a7c15ULL + i, rb);
    KripkeModel m;
    m.n = gen.n;
    m.state_names = gen.state_names;
    m.actions = actions;
    for (std::size_t a = 0; a < actions.size(); ++a)
      m.succ[actions[a]] = gen.succ.at(gen.actions[a]);
    std::mt19937_64 rng(cfg.seed ^ (0xc2b2ae3d27d4eb4fULL * (i + 1)));
    for (const auto& g : generators) {
      Elem z = 0;
      for (int s = 0; s < m.n; ++s)
        if (rng() & 1) z |= Elem(1) << s;
      m.val[g] = z;
    }
    if (!test(m)) break;
  }
  return verdict;
}

// ---------------------------------------------------------------------------

bool vec_leq(const std::vector<Elem>& a, const std::vector<Elem>& b) {
  assert(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

std::vector<std::vector<Elem>> prune_maximal(std::vector<std::vector<Elem>> vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  std::vector<std::vector<Elem>> out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < vs.size() && !dominated; ++j)
      if (i != j && vec_leq(vs[i], vs[j]) && vs[i] != vs[j]) dominated = true;
    if (!dominated) out.push_back(vs[i]);
  }
  return out;
}

std::vector<std::vector<Elem>> semantic_cover_oracle(
    const std::function<std::vector<Elem>(const std::vector<Elem>&)>& f,
    int arity, const KripkeModel& m, const std::vector<Elem>& target) {
  if (m.n > 12)
    throw std::invalid_argument("semantic_cover_oracle: carrier too large");
  const std::uint64_t card = std::uint64_t(1) << m.n;
  double total = 1;
  for (int i = 0; i < arity; ++i) total *= double(card);
  if (total > 1u << 24)
    throw std::invalid_argument("semantic_cover_oracle: carrier too large");

  std::vector<std::vector<Elem>> sat;
  std::vector<Elem> x(arity, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == arity) {
      if (vec_leq(f(x), target)) sat.push_back(x);
      return;
    }
    for (Elem v = 0; v < card; ++v) {
      x[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return prune_maximal(std::move(sat));
}

std::vector<std::vector<Elem>> semantic_cover_oracle(
    const std::function<Elem(const std::vector<Elem>&)>& f, int arity,
    const KripkeModel& m, Elem target) {
  auto wrap = [&](const std::vector<Elem>& x) {
    return std::vector<Elem>{f(x)};
  };
  return semantic_cover_oracle(wrap, arity, m, std::vector<Elem>{target});
}

}  // namespace mualg
