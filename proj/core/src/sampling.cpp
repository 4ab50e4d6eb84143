#include "mualg/sampling.hpp"

#include <algorithm>
#include <functional>

namespace mualg {

namespace {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  std::uniform_int_distribution<std::size_t> d(0, xs.size() - 1);
  return xs[d(rng)];
}

int roll(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(rng);
}

Term random_term_rec(Rng& rng, const TermGenConfig& cfg, int depth,
                     std::vector<std::string>& scope, int binder_count) {
  const bool leaf = depth <= 0 || roll(rng, 0, 9) == 0;
  if (leaf) {
    int choice = roll(rng, 0, 9);
    if (choice < 2 && !scope.empty()) return var(pick(rng, scope));
    if (choice < 3) return top();
    if (choice < 4) return bot();
    if (choice < 7 || cfg.generators.empty())
      return cfg.generators.empty() ? top() : gen(pick(rng, cfg.generators));
    return neg(gen(pick(rng, cfg.generators)));
  }
  int choice = roll(rng, 0, cfg.allow_binders ? 11 : 9);
  switch (choice) {
    case 0:
    case 1:
    case 2:
      return conj(random_term_rec(rng, cfg, depth - 1, scope, binder_count),
                  random_term_rec(rng, cfg, depth - 1, scope, binder_count));
    case 3:
    case 4:
    case 5:
      return disj(random_term_rec(rng, cfg, depth - 1, scope, binder_count),
                  random_term_rec(rng, cfg, depth - 1, scope, binder_count));
    case 6:
    case 7:
      return dia(pick(rng, cfg.actions),
                 random_term_rec(rng, cfg, depth - 1, scope, binder_count));
    case 8:
    case 9:
      return box(pick(rng, cfg.actions),
                 random_term_rec(rng, cfg, depth - 1, scope, binder_count));
    default: {
      std::string v = "z" + std::to_string(binder_count);
      scope.push_back(v);
      Term body =
          random_term_rec(rng, cfg, depth - 1, scope, binder_count + 1);
      scope.pop_back();
      const bool least = cfg.sigma1_only || roll(rng, 0, 1) == 0;
      return least ? mu(v, body) : nu(v, body);
    }
  }
}

}  // namespace

Term random_term(Rng& rng, const TermGenConfig& cfg) {
  std::vector<std::string> scope = cfg.variables;
  return random_term_rec(rng, cfg, cfg.max_depth, scope, 0);
}

Term random_sigma1_term(Rng& rng, TermGenConfig cfg) {
  cfg.sigma1_only = true;
  return random_term(rng, cfg);
}

System random_system(Rng& rng, const SystemGenConfig& cfg) {
  System s;
  for (int i = 0; i < cfg.num_bound; ++i) s.bound.push_back("x" + std::to_string(i));
  s.params = cfg.params;
  TermGenConfig tc;
  tc.max_depth = cfg.term_depth;
  tc.actions = cfg.actions;
  tc.generators = cfg.generators;
  tc.variables = s.bound;
  tc.variables.insert(tc.variables.end(), cfg.params.begin(), cfg.params.end());
  tc.allow_binders = false;
  for (const auto& x : s.bound) s.equations[x] = random_term(rng, tc);
  s.validate();
  return s;
}

System random_simple_system(Rng& rng, const SystemGenConfig& cfg,
                            bool disjunctive) {
  System s;
  for (int i = 0; i < cfg.num_bound; ++i) s.bound.push_back("x" + std::to_string(i));
  s.params = cfg.params;
  auto random_body = [&]() -> Term {
    // A DNF over the bound variables; disjunctive restricts to joins.
    int joins = roll(rng, 1, 2);
    std::vector<Term> parts;
    for (int j = 0; j < joins; ++j) {
      if (disjunctive) {
        parts.push_back(var(pick(rng, s.bound)));
      } else {
        int meets = roll(rng, 1, 2);
        std::vector<Term> ms;
        for (int k = 0; k < meets; ++k) ms.push_back(var(pick(rng, s.bound)));
        parts.push_back(conj_of(ms));
      }
    }
    return disj_of(parts);
  };
  for (const auto& x : s.bound) {
    int blobs = roll(rng, 1, 2);
    std::vector<Term> disjuncts;
    for (int b = 0; b < blobs; ++b) {
      std::vector<Term> parts;
      if (roll(rng, 0, 1) && !cfg.generators.empty()) {
        Term lit = gen(pick(rng, cfg.generators));
        parts.push_back(roll(rng, 0, 1) ? lit : neg(lit));
      }
      std::vector<std::string> acts = cfg.actions;
      std::shuffle(acts.begin(), acts.end(), rng);
      int arrows = roll(rng, parts.empty() ? 1 : 0, int(acts.size()));
      for (int a = 0; a < arrows; ++a) {
        int ops = roll(rng, 0, 2);
        std::vector<Term> bodies;
        for (int o = 0; o < ops; ++o) bodies.push_back(random_body());
        parts.push_back(arrow(acts[a], bodies));
      }
      disjuncts.push_back(conj_of(parts));
    }
    s.equations[x] = disj_of(disjuncts);
  }
  s.validate();
  return s;
}

Clause random_clause(Rng& rng, const std::vector<std::string>& actions,
                     const std::vector<std::string>& generators) {
  Clause c;
  int lits = roll(rng, 0, 2);
  for (int i = 0; i < lits; ++i)
    c.literals.insert({pick(rng, generators), roll(rng, 0, 1) == 1, false});
  TermGenConfig tc;
  tc.max_depth = 2;
  tc.actions = actions;
  tc.generators = generators;
  tc.allow_binders = false;
  for (const auto& a : actions) {
    if (roll(rng, 0, 1)) c.dia_part[a] = random_term(rng, tc);
    int boxes = roll(rng, 0, 2);
    for (int i = 0; i < boxes; ++i)
      c.box_part[a].push_back(random_term(rng, tc));
    if (c.box_part.count(a) && c.box_part[a].empty()) c.box_part.erase(a);
  }
  return c;
}

SpconSpec random_spcon_spec(Rng& rng, const std::vector<std::string>& actions,
                            const std::vector<std::string>& generators) {
  SpconSpec s;
  int lits = roll(rng, 0, 2);
  for (int i = 0; i < lits; ++i)
    s.literals.push_back({pick(rng, generators), roll(rng, 0, 1) == 1, false});
  int vc = 0;
  for (const auto& a : actions) {
    if (roll(rng, 0, 2) == 0) continue;
    std::vector<std::string> xs;
    int k = roll(rng, 1, 2);
    for (int i = 0; i < k; ++i) xs.push_back("u" + std::to_string(vc++));
    s.blocks.push_back({a, xs});
  }
  if (s.blocks.empty() && !actions.empty())
    s.blocks.push_back({actions[0], {"u" + std::to_string(vc++)}});
  return s;
}

FinitePoset random_poset(Rng& rng, int max_elems) {
  int n = roll(rng, 1, max_elems);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (roll(rng, 0, 2) == 0) pairs.push_back({names[i], names[j]});
  return FinitePoset::from_pairs(names, pairs);
}

std::vector<FinitePoset> posets_up_to_iso(int n) {
  std::vector<FinitePoset> reps;
  if (n == 0) {
    reps.push_back(FinitePoset::from_pairs({}, {}));
    return reps;
  }
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) slots.push_back({i, j});
  std::vector<int> choice(slots.size(), 0);  // 0: none, 1: i<j, 2: j<i
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == slots.size()) {
      std::vector<std::pair<std::string, std::string>> pairs;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (choice[i] == 1) pairs.push_back({names[slots[i].first], names[slots[i].second]});
        if (choice[i] == 2) pairs.push_back({names[slots[i].second], names[slots[i].first]});
      }
      FinitePoset p;
      try {
        p = FinitePoset::from_pairs(names, pairs);
      } catch (const std::invalid_argument&) {
        return;  // transitive closure broke antisymmetry
      }
      // The closure may add comparabilities; keep only relations that are
      // already transitive to avoid duplicates from distinct edge sets.
      for (std::size_t i = 0; i < slots.size(); ++i) {
        bool related = p.leq(slots[i].first, slots[i].second) ||
                       p.leq(slots[i].second, slots[i].first);
        if ((choice[i] == 0) == related) return;
      }
      for (const auto& r : reps)
        if (poset_isomorphic(r, p)) return;
      reps.push_back(p);
      return;
    }
    for (int c = 0; c < 3; ++c) {
      choice[k] = c;
      rec(k + 1);
    }
  };
  rec(0);
  return reps;
}

std::vector<Term> enumerate_fragment_terms(Fragment frag, int max_depth) {
  // Signature fixed at one generator and one action; grows fast enough.
  std::vector<std::vector<Term>> by_depth(max_depth + 1);
  by_depth[0] = {top(), bot(), gen("p"), neg(gen("p"))};
  TermSet seen;
  std::vector<Term> all = by_depth[0];
  for (const auto& t : all) seen.insert(t);
  for (int d = 1; d <= max_depth; ++d) {
    std::vector<Term> fresh;
    auto add = [&](const Term& t) {
      if (seen.insert(t)) fresh.push_back(t);
    };
    const auto& prev = by_depth[d - 1];
    for (const auto& a : prev) {
      add(dia("a", a));
      add(box("a", a));
      if (frag == Fragment::Sigma1) {
        Term body = substitute(a, {});  // closed terms; binder over x below
        add(mu("x", disj(var("x"), a)));
        add(mu("x", disj(a, dia("a", var("x")))));
      } else {
        add(nu("x", conj(var("x"), a)));
        add(nu("x", conj(a, box("a", var("x")))));
      }
    }
    for (const auto& a : prev)
      for (const auto& b : prev) {
        add(conj(a, b));
        add(disj(a, b));
        if (int(fresh.size()) > 400) break;
      }
    by_depth[d] = fresh;
    all.insert(all.end(), fresh.begin(), fresh.end());
  }
  return all;
}

}  // namespace mualg
