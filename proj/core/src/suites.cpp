#include "mualg/suites.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mualg/completion.hpp"
#include "mualg/counterexample.hpp"
#include "mualg/covers.hpp"
#include "mualg/kripke.hpp"
#include "mualg/sampling.hpp"
#include "mualg/systems.hpp"
#include "mualg/term.hpp"
#include "mualg/textio.hpp"

namespace mualg {

namespace {

constexpr int kDefaultBudget = 4096;

struct Suite {
  SuiteReport rep;
  void check(const std::string& name, bool ok, const std::string& detail = "") {
    rep.checks.push_back({name, ok, detail});
  }
};

KripkeModel fixed_model(int which) {
  // A small battery of documented frames reused across suites.
  switch (which % 4) {
    case 0:
      return KripkeModel::make(2, {"a"}, {{"a", {{0, 1}, {1, 1}}}},
                               {{"p", {1}}, {"q", {0}}});
    case 1:
      return KripkeModel::make(3, {"a"}, {{"a", {{0, 1}, {1, 2}, {2, 0}}}},
                               {{"p", {0, 2}}, {"q", {1}}});
    case 2:
      return KripkeModel::make(4, {"a"},
                               {{"a", {{0, 1}, {1, 2}, {2, 3}, {3, 3}, {0, 0}}}},
                               {{"p", {2, 3}}, {"q", {0, 1}}});
    default:
      return KripkeModel::make(3, {"a", "b"},
                               {{"a", {{0, 1}, {1, 1}}}, {"b", {{1, 2}, {2, 0}}}},
                               {{"p", {1, 2}}, {"q", {0}}});
  }
}

// ---------------------------------------------------------------------------
// 1. Elimination against joint iteration.

// Monotone maps on the product of two k-chains, as tables.
void enumerate_monotone_tables(int k, std::vector<std::vector<int>>* out) {
  std::vector<int> t(k * k, 0);
  std::function<void(int)> rec = [&](int pos) {
    if (pos == k * k) {
      out->push_back(t);
      return;
    }
    int x = pos / k, y = pos % k;
    int lo = 0;
    if (x > 0) lo = std::max(lo, t[(x - 1) * k + y]);
    if (y > 0) lo = std::max(lo, t[x * k + y - 1]);
    for (int v = lo; v < k; ++v) {
      t[pos] = v;
      rec(pos + 1);
    }
  };
  rec(0);
}

std::pair<int, int> table_simultaneous(const std::vector<int>& f,
                                       const std::vector<int>& g, int k) {
  int x = 0, y = 0;
  for (;;) {
    int nx = f[x * k + y], ny = g[x * k + y];
    if (nx == x && ny == y) return {x, y};
    x = nx;
    y = ny;
  }
}

std::pair<int, int> table_bekic(const std::vector<int>& f,
                                const std::vector<int>& g, int k) {
  auto inner = [&](int x) {  // least y with g(x, y) = y, from below
    int y = 0;
    for (;;) {
      int ny = g[x * k + y];
      if (ny == y) return y;
      y = ny;
    }
  };
  int x = 0;
  for (;;) {
    int nx = f[x * k + inner(x)];
    if (nx == x) break;
    x = nx;
  }
  return {x, inner(x)};
}

void suite_bekic(Suite& s, std::uint64_t seed, long) {
  Rng rng(seed);
  bool random_ok = true;
  std::string fail_detail;
  for (int i = 0; i < 1000 && random_ok; ++i) {
    SystemGenConfig sc;
    sc.num_bound = 1 + int(rng() % 3);
    sc.term_depth = 4;
    System sys = random_system(rng, sc);
    ModelBounds mb;
    mb.max_states = 6;
    KripkeModel m = random_model(rng(), mb);
    Solution a = bekic_solve(sys, m);
    Solution b = simultaneous_solve(sys, m).first;
    if (a != b) {
      random_ok = false;
      fail_detail = "sample " + std::to_string(i);
    }
  }
  s.check("random systems x models, elimination = joint iteration (1000)",
          random_ok, fail_detail);

  for (int k : {2, 3}) {
    std::vector<std::vector<int>> tables;
    enumerate_monotone_tables(k, &tables);
    bool ok = true;
    long count = 0;
    for (const auto& f : tables)
      for (const auto& g : tables) {
        ++count;
        if (table_simultaneous(f, g, k) != table_bekic(f, g, k)) ok = false;
      }
    s.check("exhaustive monotone pairs on the " + std::to_string(k) + "-chain",
            ok, std::to_string(count) + " pairs");
  }
}

// ---------------------------------------------------------------------------
// 2. Sigma1 fixed points are constructive.

void suite_sigma1_constructive(Suite& s, std::uint64_t seed, long) {
  Rng rng(seed);
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 500 && ok; ++i) {
    TermGenConfig tc;
    tc.max_depth = 3;
    tc.variables = {"x"};
    Term body = random_sigma1_term(rng, tc);
    ModelBounds mb;
    mb.max_states = 5;
    KripkeModel m = random_model(rng(), mb);

    auto tr = lfp_iterate(m, body, "x");
    Elem joined = 0;
    for (Elem e : tr.entries) joined |= e;

    // Park-least: enumerate every prefixed point and take the minimum,
    // which must itself be a member of the enumeration.
    Elem least = m.universe();
    bool found = false, least_is_member = false;
    for (Elem z = 0; z <= m.universe(); ++z) {
      Env env{{"x", z}};
      if ((eval(m, body, env) & ~z) == 0) {
        least &= z;
        found = true;
      }
    }
    {
      Env env{{"x", least}};
      least_is_member = (eval(m, body, env) & ~least) == 0;
    }
    if (!found || !least_is_member || least != tr.value() ||
        joined != tr.value() || tr.stab_index > std::size_t(m.n) + 1) {
      ok = false;
      detail = "sample " + std::to_string(i);
    }
  }
  s.check("least prefixed point = join of approximants (500)", ok, detail);
}

// ---------------------------------------------------------------------------
// 3. Guarding.

void suite_guarding(Suite& s, std::uint64_t seed, long) {
  Rng rng(seed);
  bool eval_ok = true, guarded_ok = true;
  std::string detail;
  for (int i = 0; i < 500 && eval_ok; ++i) {
    TermGenConfig tc;
    tc.max_depth = 4;
    Term t = random_term(rng, tc);
    Term gt = guard(t);
    if (!is_guarded(gt)) guarded_ok = false;
    ModelBounds mb;
    mb.max_states = 5;
    KripkeModel m = random_model(rng(), mb);
    if (eval(m, t) != eval(m, gt)) {
      eval_ok = false;
      detail = "sample " + std::to_string(i);
    }
  }
  s.check("term guarding preserves evaluation (500)", eval_ok, detail);
  s.check("guard output is guarded", guarded_ok);

  // Stage sandwich on systems: loop elimination keeps the chains, each
  // substitution round is within a factor two.
  bool sandwich_ok = true;
  const int depth = 20;
  for (int i = 0; i < 60 && sandwich_ok; ++i) {
    SystemGenConfig sc;
    sc.num_bound = 1 + int(rng() % 3);
    sc.term_depth = 3;
    System sys = random_system(rng, sc);
    ModelBounds mb;
    mb.max_states = 4;
    KripkeModel m = random_model(rng(), mb);
    auto stages = guard_system_stages(sys);
    auto chain = [&](const System& q) {
      std::vector<std::vector<Elem>> out;
      std::vector<Elem> cur(q.bound.size(), 0);
      out.push_back(cur);
      for (int k = 0; k < 2 * depth; ++k) {
        cur = system_step(q, m, {}, cur);
        out.push_back(cur);
      }
      return out;
    };
    for (std::size_t j = 1; j < stages.size() && sandwich_ok; ++j) {
      auto prev = chain(stages[j - 1].first);
      auto cur = chain(stages[j].first);
      for (int n = 0; n <= depth && sandwich_ok; ++n) {
        if (stages[j].second == GuardStage::LoopElimination) {
          if (prev[n] != cur[n]) sandwich_ok = false;
        } else {
          if (!vec_leq(prev[n], cur[n]) || !vec_leq(cur[n], prev[2 * n]))
            sandwich_ok = false;
        }
      }
    }
    // End to end: same least solution, and the result is guarded.
    auto ga = simultaneous_solve(sys, m).first;
    auto gb = simultaneous_solve(stages.back().first, m).first;
    if (ga != gb) sandwich_ok = false;
    if (!classify_system(stages.back().first).guarded) sandwich_ok = false;
  }
  s.check("system guarding: equal chains / two-step sandwich per stage, n <= 20",
          sandwich_ok);
}

// ---------------------------------------------------------------------------
// 4. Powerset translation.

void suite_powerset(Suite& s, std::uint64_t seed, long) {
  Rng rng(seed);
  bool comm_ok = true, split_ok = true, class_ok = true;
  std::string detail;
  for (int i = 0; i < 200 && comm_ok && split_ok; ++i) {
    SystemGenConfig sc;
    sc.num_bound = 1 + int(rng() % 2);
    System sys = random_simple_system(rng, sc);
    PowersetTranslation pt;
    try {
      pt = powerset_translate(sys);
    } catch (const std::invalid_argument&) {
      continue;  // generator occasionally builds a degenerate shape
    }
    if (!classify_system(pt.target).disjunctive_simple) class_ok = false;
    ModelBounds mb;
    mb.max_states = 4;
    KripkeModel m = random_model(rng(), mb);
    const int n = int(sys.bound.size());
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<Elem> xv(n);
      for (auto& z : xv) z = rng() & m.universe();
      auto w = pt.embed(xv);
      if (pt.project(w) != xv) split_ok = false;
      Env env;
      for (std::size_t j = 0; j < pt.subset_vars.size(); ++j)
        env[pt.subset_vars[j]] = w[j] & m.universe();
      Env xenv;
      for (int j = 0; j < n; ++j) xenv[sys.bound[j]] = xv[j];
      for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
        Elem lhs = m.universe();
        for (int j = 0; j < n; ++j)
          if ((mask >> j) & 1) lhs &= eval(m, sys.equations.at(sys.bound[j]), xenv);
        Elem rhs = eval(m, pt.target.equations.at(pt.subset_vars[mask - 1]), env);
        if (lhs != rhs) {
          comm_ok = false;
          detail = "sample " + std::to_string(i);
        }
      }
    }
  }
  s.check("component meets match the translated system (200)", comm_ok, detail);
  s.check("projection splits the embedding", split_ok);
  s.check("translated systems are disjunctive-simple", class_ok);
}

// ---------------------------------------------------------------------------
// 5. Arrow conjunction case identities.

void suite_arrow_conj(Suite& s, std::uint64_t seed, long) {
  Term g1 = gen("g1"), g2 = gen("g2"), g3 = gen("g3");
  struct Case {
    std::string name;
    Term lhs, rhs;
  };
  std::vector<Case> cases;
  cases.push_back({"both empty", conj(arrow("a", {}), arrow("a", {})),
                   arrow("a", {})});
  cases.push_back({"one empty", conj(arrow("a", {}), arrow("a", {g1})), bot()});
  cases.push_back({"cross meet (singletons)",
                   conj(arrow("a", {g1}), arrow("a", {g2})),
                   arrow("a", {conj(g1, g2)})});
  cases.push_back(
      {"cross meet (two against one)",
       conj(arrow("a", {g1, g2}), arrow("a", {g3})),
       arrow("a", {conj(g1, g3), conj(g2, g3), conj(disj(g1, g2), g3)})});

  for (const auto& c : cases) {
    bool ok = true;
    long samples = 0;
    for (int st = 0; st <= 3 && ok; ++st) {
      samples += enumerate_models(
          st, {"a"}, {"g1", "g2", "g3"}, [&](const KripkeModel& m) {
            if (eval(m, c.lhs) != eval(m, c.rhs)) {
              ok = false;
              return false;
            }
            return true;
          });
    }
    Rng rng(seed);
    for (int i = 0; i < 200 && ok; ++i) {
      ModelBounds mb;
      mb.max_states = 7;
      mb.num_generators = 3;
      KripkeModel m = random_model(rng(), mb);
      m.val["g1"] = rng() & m.universe();
      m.val["g2"] = rng() & m.universe();
      m.val["g3"] = rng() & m.universe();
      ++samples;
      if (eval(m, c.lhs) != eval(m, c.rhs)) ok = false;
    }
    s.check("arrow conjunction: " + c.name, ok,
            std::to_string(samples) + " models");
  }
}

// ---------------------------------------------------------------------------
// 6. The reflexive-transitive diamond.

void suite_kleene(Suite& s, std::uint64_t seed, long) {
  Term star = mu("y", disj(gen("p"), dia("a", var("y"))));
  bool ok = true;
  long samples = 0;
  auto test = [&](const KripkeModel& m) {
    Elem direct = eval(m, star);
    Elem acc = 0, pow = m.val.count("p") ? m.val.at("p") : 0;
    for (int n = 0; n <= m.n + 1; ++n) {
      acc |= pow;
      pow = m.eval_dia("a", pow);
    }
    ++samples;
    if (direct != acc) {
      ok = false;
      return false;
    }
    return true;
  };
  for (int st = 0; st <= 3 && ok; ++st)
    enumerate_models(st, {"a"}, {"p"}, test);
  Rng rng(seed);
  for (int i = 0; i < 200 && ok; ++i) {
    ModelBounds mb;
    mb.max_states = 8;
    KripkeModel m = random_model(rng(), mb);
    test(m);
  }
  s.check("iterated diamond matches the union of powers", ok,
          std::to_string(samples) + " models");

  // The iteration values are meets of closure members together with the
  // lattice units, so the unit slots extend the closure-size bound by two.
  bool chain_ok = true;
  std::string detail;
  for (int i = 0; i < 100 && chain_ok; ++i) {
    Clause c = random_clause(rng, {"a"}, {"p", "q"});
    Term b = c.to_term();
    auto kc = dia_radj_chain(b, "a", 1 << 12);
    if (!kc.stabilized || kc.steps > kc.fl_bound + 2) {
      chain_ok = false;
      detail = "sample " + std::to_string(i) + " steps=" +
               std::to_string(kc.steps) + " bound=" + std::to_string(kc.fl_bound);
    }
  }
  s.check("right-adjoint iteration settles within the closure size (100)",
          chain_ok, detail);
}

// ---------------------------------------------------------------------------
// 7 & 8. Cover calculus against the brute-force oracle.

std::vector<AdjointPtr> calculus_catalog() {
  using namespace adj;
  Term p = gen("p"), q = gen("q");
  std::vector<AdjointPtr> cat;
  cat.push_back(identity());
  cat.push_back(proj(0, 2));
  cat.push_back(proj(1, 2));
  cat.push_back(join(2));
  cat.push_back(join(3));
  cat.push_back(constant(p, 1));
  cat.push_back(const_meet(p));
  cat.push_back(dia("a"));
  cat.push_back(compose(dia("a"), dia("a")));
  cat.push_back(compose(dia("a"), join(2)));
  cat.push_back(compose(const_meet(q), dia("a")));
  cat.push_back(pair_of({proj(1, 2), compose(dia("a"), proj(0, 2))}));
  cat.push_back(compose(join(2), pair_of({proj(1, 2), compose(dia("a"), proj(0, 2))})));
  cat.push_back(compose(join(2), pair_of({constant(p, 1), dia("a")})));
  cat.push_back(pair_of({const_meet(p), identity()}));
  return cat;
}

bool lower_sets_equal(const LatticeCovers& lc,
                      const std::vector<std::vector<Elem>>& a,
                      const std::vector<std::vector<Elem>>& b) {
  auto below_some = [&](const std::vector<Elem>& v,
                        const std::vector<std::vector<Elem>>& set) {
    for (const auto& u : set)
      if (vec_leq(v, u)) return true;
    return false;
  };
  (void)lc;
  for (const auto& v : a)
    if (!below_some(v, b)) return false;
  for (const auto& v : b)
    if (!below_some(v, a)) return false;
  return true;
}

void suite_covers(Suite& s, std::uint64_t seed, long budget) {
  auto cat = calculus_catalog();
  bool exact_ok = true;
  std::string detail;
  long combos = 0;

  std::vector<KripkeModel> models;
  models.push_back(fixed_model(0));
  models.push_back(fixed_model(2));
  enumerate_models(2, {"a"}, {"p", "q"}, [&](const KripkeModel& m) {
    if (models.size() < 34) models.push_back(m);
    return models.size() < 34;
  });

  for (const auto& m : models) {
    LatticeCovers lc(m, int(budget));
    for (const auto& d : cat) {
      if (!exact_ok) break;
      auto fn = [&](const std::vector<Elem>& x) { return lc.apply(d, x); };
      // All targets over the carrier, per output coordinate count.
      std::vector<Elem> target(d->coarity, 0);
      std::function<void(int)> walk = [&](int i) {
        if (!exact_ok) return;
        if (i == d->coarity) {
          ++combos;
          auto mine = lc.cover(d, target);
          auto oracle = semantic_cover_oracle(fn, d->arity, m, target);
          if (!lower_sets_equal(lc, mine, oracle)) {
            exact_ok = false;
            detail = adj::describe(d);
          }
          return;
        }
        for (Elem z = 0; z <= m.universe(); ++z) {
          target[i] = z;
          walk(i + 1);
        }
      };
      walk(0);
    }
  }
  s.check("calculus covers equal the oracle on small carriers", exact_ok,
          detail.empty() ? std::to_string(combos) + " descriptor/target pairs"
                         : detail);

  // Syntactic side: soundness by refutation.
  SyntacticCovers sc{int(budget)};
  Rng rng(seed);
  bool sound_ok = true;
  std::vector<Term> targets = {
      disj(neg(gen("p")), dia("a", gen("q"))),
      conj(gen("p"), box("a", gen("q"))),
      disj(gen("p"), gen("q")),
      box("a", disj(gen("p"), gen("q"))),
      dia("a", conj(gen("p"), neg(gen("q")))),
  };
  SamplerConfig scfg;
  scfg.exhaustive_max_states = 2;
  scfg.random_models = 200;
  for (const auto& d : cat) {
    if (d->coarity != 1) continue;
    for (const auto& b : targets) {
      scfg.seed = rng();
      std::vector<std::vector<Term>> cs;
      try {
        cs = sc.cover(d, {b});
      } catch (const std::invalid_argument&) {
        continue;
      }
      for (const auto& c : cs) {
        Term applied = sc.apply(d, c)[0];
        if (check_leq(applied, b, scfg).refuted) sound_ok = false;
      }
    }
  }
  s.check("syntactic covers unrefuted under the targets", sound_ok);
}

void suite_mu_covers(Suite& s, std::uint64_t, long budget) {
  using namespace adj;
  Term p = gen("p");
  std::vector<std::pair<std::string, AdjointPtr>> descriptors;
  // x |-> y.
  descriptors.push_back({"param only", mu(proj(1, 2), {0})});
  // x |-> x.
  descriptors.push_back({"bound only", mu(proj(0, 2), {0})});
  // x |-> y \/ <a>x.
  descriptors.push_back(
      {"join with step",
       mu(compose(join(2), pair_of({proj(1, 2), compose(dia("a"), proj(0, 2))})),
          {0})});
  // x |-> p \/ <a>x, no parameter.
  descriptors.push_back(
      {"closed star",
       mu(compose(join(2), pair_of({constant(p, 1), dia("a")})), {0})});
  // x |-> (p /\ y) \/ <a>x.
  descriptors.push_back(
      {"guarded blend",
       mu(compose(join(2), pair_of({compose(const_meet(p), proj(1, 2)),
                                    compose(dia("a"), proj(0, 2))})),
          {0})});

  std::vector<KripkeModel> models;
  models.push_back(fixed_model(0));
  models.push_back(fixed_model(1));
  models.push_back(fixed_model(2));
  enumerate_models(2, {"a"}, {"p"}, [&](const KripkeModel& m) {
    if (models.size() < 20) models.push_back(m);
    return models.size() < 20;
  });

  bool ok = true;
  std::string detail;
  long combos = 0;
  for (const auto& m : models) {
    LatticeCovers lc(m, int(budget));
    for (const auto& [name, d] : descriptors) {
      auto fn = [&](const std::vector<Elem>& params) { return lc.apply(d, params); };
      for (Elem l = 0; l <= m.universe() && ok; ++l) {
        ++combos;
        auto mine = lc.mu_cover(d, {l});
        auto oracle = semantic_cover_oracle(fn, d->arity, m, {l});
        if (!lower_sets_equal(lc, mine, oracle)) {
          ok = false;
          detail = name + " at target " + std::to_string(l);
        }
      }
      if (!ok) break;
    }
    if (!ok) break;
  }
  s.check("pan covers of fixed points equal the oracle", ok,
          detail.empty() ? std::to_string(combos) + " cases" : detail);
}

// ---------------------------------------------------------------------------
// 9. Special-conjunction covers.

void suite_spcon_covers(Suite& s, std::uint64_t seed, long) {
  Rng rng(seed);
  bool shape_ok = true, sound_ok = true;
  std::string detail;
  for (int i = 0; i < 100 && shape_ok && sound_ok; ++i) {
    SpconSpec spec = random_spcon_spec(rng, {"a", "b"}, {"p", "q"});
    Clause c = random_clause(rng, {"a", "b"}, {"p", "q"});
    auto covers = spcon_cover(spec, c);
    const auto coords = spec.coordinates();

    // Structural expectation recomputed from the statement.
    bool lam_bad = false;
    for (const auto& l : spec.literals) {
      Literal f = l;
      f.negated = !f.negated;
      if (std::count(spec.literals.begin(), spec.literals.end(), f)) lam_bad = true;
      if (c.literals.count(l)) lam_bad = true;
    }
    std::vector<std::vector<Term>> expect;
    if (c.syntactically_top() || lam_bad) {
      expect.push_back(std::vector<Term>(coords.size(), top()));
    } else {
      std::size_t off = 0;
      for (const auto& [act, xs] : spec.blocks) {
        Term d = c.dia_part.count(act) ? c.dia_part.at(act) : bot();
        for (std::size_t j = 0; j < xs.size(); ++j) {
          std::vector<Term> v(coords.size(), top());
          v[off + j] = d;
          expect.push_back(v);
        }
        if (c.box_part.count(act))
          for (const auto& e : c.box_part.at(act)) {
            std::vector<Term> v(coords.size(), top());
            for (std::size_t j = 0; j < xs.size(); ++j)
              v[off + j] = simplify_lattice(disj(d, e));
            expect.push_back(v);
          }
        off += xs.size();
      }
    }
    if (covers.size() != expect.size()) {
      shape_ok = false;
      detail = "size mismatch at sample " + std::to_string(i);
    } else {
      for (std::size_t k = 0; k < covers.size(); ++k)
        for (std::size_t j = 0; j < coords.size(); ++j)
          if (!alpha_equal(covers[k][j], expect[k][j])) shape_ok = false;
    }

    // Soundness by refutation on a shared sampler.
    SamplerConfig scfg;
    scfg.exhaustive_max_states = 1;
    scfg.random_models = 40;
    scfg.seed = rng();
    Term bt = c.to_term();
    for (const auto& v : covers) {
      std::map<std::string, Term> binding;
      for (std::size_t j = 0; j < coords.size(); ++j) binding[coords[j]] = v[j];
      Term lhs = substitute(spcon(spec), binding);
      if (check_leq(lhs, bt, scfg).refuted) {
        sound_ok = false;
        detail = "unsound cover at sample " + std::to_string(i);
      }
    }
  }
  s.check("cover vectors match the stated shapes (100)", shape_ok, detail);
  s.check("cover soundness unrefuted", sound_ok);
}

// ---------------------------------------------------------------------------
// 10. Product-with-two machinery.

void suite_whitman(Suite& s, std::uint64_t seed, long) {
  Rng rng(seed);
  bool axioms_ok = true, morph_ok = true, cert_ok = true;
  std::string detail;
  int certificates = 0;
  long term_evals = 0;
  for (int i = 0; certificates < 200 && i < 2000; ++i) {
    ModelBounds mb;
    mb.max_states = 4;
    mb.num_actions = 1 + int(rng() % 2);
    KripkeModel m = random_model(rng(), mb);

    std::vector<Literal> lambda;
    if (rng() % 2) lambda.push_back({"p", rng() % 2 == 0, false});
    if (rng() % 2) lambda.push_back({"q", rng() % 2 == 0, false});

    TermGenConfig tc;
    tc.max_depth = 2;
    tc.allow_binders = false;
    tc.actions = m.actions;
    std::map<std::string, std::vector<Term>> ys;
    for (const auto& act : m.actions) {
      int k = int(rng() % 3);
      for (int j = 0; j < k; ++j) {
        Term y = disj(random_term(rng, tc), gen("p"));
        ys[act].push_back(y);
      }
    }
    WhitmanReport rep = whitman_check(lambda, ys, m);
    if (rep.kind != WhitmanReport::Kind::Certificate) continue;
    ++certificates;
    if (!rep.second_coordinate) {
      cert_ok = false;
      detail = "certificate sample " + std::to_string(i);
    }

    // Rebuild the product to probe the algebra laws.
    std::map<std::string, std::vector<Elem>> witnesses;
    for (const auto& [act, terms] : ys)
      for (const auto& y : terms) witnesses[act].push_back(eval(m, y));
    TwoProductAlgebra alg(m, witnesses);
    for (const auto& act : m.actions) {
      if (alg.dia(act, alg.bot_elem()) == alg.bot_elem()) {
      } else {
        axioms_ok = false;
      }
      // Join preservation over all carrier pairs.
      for (Elem z1 = 0; z1 <= m.universe() && axioms_ok; ++z1)
        for (int w1 = 0; w1 < 2 && axioms_ok; ++w1)
          for (Elem z2 = 0; z2 <= m.universe(); ++z2)
            for (int w2 = 0; w2 < 2; ++w2) {
              ProductElem a{z1, w1 == 1}, b{z2, w2 == 1};
              auto lhsv = alg.dia(act, alg.join(a, b));
              auto rhsv = alg.join(alg.dia(act, a), alg.dia(act, b));
              if (!(lhsv == rhsv)) {
                axioms_ok = false;
                detail = "join preservation, sample " + std::to_string(i);
              }
            }
    }
    // First projection is a morphism on random evaluations.
    std::map<std::string, bool> gen_bit;
    for (const auto& l : lambda)
      if (!l.negated) gen_bit[l.atom] = true;
    TermGenConfig pc;
    pc.max_depth = 3;
    pc.actions = m.actions;
    for (int j = 0; j < 5; ++j) {
      Term t = random_term(rng, pc);
      ++term_evals;
      if (alg.eval(t, {}, gen_bit).first != eval(m, t)) {
        morph_ok = false;
        detail = "projection sample " + std::to_string(i);
      }
    }
  }
  s.check("modal axioms hold on the product (200 cases)", axioms_ok, detail);
  s.check("first projection is a morphism (" + std::to_string(term_evals) +
              " evaluations)",
          morph_ok);
  s.check("certificate second coordinate is true", cert_ok);
}

// ---------------------------------------------------------------------------
// 11. Regular harness.

void suite_harness(Suite& s, std::uint64_t seed, long) {
  Rng rng(seed);
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 100 && ok; ++i) {
    TermGenConfig tc;
    tc.max_depth = 3;
    tc.allow_binders = false;
    tc.variables = {"x", "y"};
    Term f = random_term(rng, tc);
    Term g = random_term(rng, tc);
    ModelBounds mb;
    mb.max_states = 4;
    KripkeModel m = random_model(rng(), mb);
    auto [tr, v] = regular_harness(f, g, m, 10);
    if (!v.all()) {
      ok = false;
      detail = "sample " + std::to_string(i);
    }
  }
  s.check("interleaving verdicts hold (100 triples, depth 10)", ok, detail);
}

// ---------------------------------------------------------------------------
// 12. Counterexample.

void suite_counterexample(Suite& s, std::uint64_t, long) {
  auto rep = wrongconf_verify(100);
  s.check("f-step relation certified to 100", rep.f_step_ok);
  s.check("descending chain certified to 100", rep.chain_decreasing);
  s.check("fixed point escapes the chain head", rep.mu_not_below_phi0);
  auto r0 = replay_lower_bound(QuotSeq::bottom());
  s.check("bottom candidate: closure holds, no contradiction",
          r0.is_lower_bound && r0.f_image_is_lower_bound && !r0.contradiction);
  auto r1 = replay_lower_bound(QuotSeq::mu());
  s.check("fixed-point candidate: contradiction flagged", r1.contradiction);
}

// ---------------------------------------------------------------------------
// 13. Completion.

std::vector<std::vector<int>> sample_join_preserving(Rng& rng,
                                                     const FinitePoset& lat,
                                                     int want) {
  std::vector<std::vector<int>> out;
  const int n = lat.size();
  std::vector<int> id(n);
  for (int i = 0; i < n; ++i) id[i] = i;
  out.push_back(id);
  int bot = -1;
  for (int i = 0; i < n; ++i) {
    bool least = true;
    for (int j = 0; j < n; ++j)
      if (!lat.leq(i, j)) least = false;
    if (least) bot = i;
  }
  out.push_back(std::vector<int>(n, bot));  // constant bottom preserves joins... of nothing
  out.back()[bot] = bot;
  // Random candidates filtered by the law.
  for (int tries = 0; tries < 200 && int(out.size()) < want; ++tries) {
    std::vector<int> f(n);
    for (int i = 0; i < n; ++i) f[i] = int(rng() % n);
    // Monotone repair: close upward.
    for (bool changed = true; changed;) {
      changed = false;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (lat.leq(a, b) && !lat.leq(f[a], f[b])) {
            // join f[b] with f[a]
            for (int c = 0; c < n; ++c)
              if (lat.leq(f[a], c) && lat.leq(f[b], c)) {
                bool least = true;
                for (int d = 0; d < n; ++d)
                  if (lat.leq(f[a], d) && lat.leq(f[b], d) && !lat.leq(c, d))
                    least = false;
                if (least) {
                  f[b] = c;
                  changed = true;
                  break;
                }
              }
          }
    }
    if (join_preserving(lat, f)) out.push_back(f);
  }
  return out;
}

void check_completion_of(Suite&, const FinitePoset& p, bool& laws_ok,
                         bool& adj_ok, Rng& rng) {
  CutLattice c = dm_completion(p);
  const int n = p.size();
  // Order embedding.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (p.leq(a, b) != c.leq(c.iota(a), c.iota(b))) laws_ok = false;
  // Meets and joins of every cut pair exist (operations are total and
  // associative on a finite carrier); density both ways.
  for (int a = 0; a < c.size(); ++a) {
    int join_acc = c.bottom, meet_acc = c.top;
    for (int x = 0; x < n; ++x) {
      if (c.leq(c.iota(x), a)) join_acc = c.join(join_acc, c.iota(x));
      if (c.leq(a, c.iota(x))) meet_acc = c.meet(meet_acc, c.iota(x));
    }
    if (join_acc != a || meet_acc != a) laws_ok = false;
  }
  // The remaining checks re-run the machinery on the completion itself,
  // which needs the 64-element poset representation.
  if (c.size() > 64) return;

  // Idempotence: completing the completion adds nothing.
  CutLattice c2 = dm_completion(c.as_poset());
  if (c2.size() != c.size()) laws_ok = false;
  if (c.size() <= 8 && !poset_isomorphic(c.as_poset(), c2.as_poset()))
    laws_ok = false;

  // Adjoint extension laws on the completed lattice.
  FinitePoset lat = c.as_poset();
  CutLattice cl = dm_completion(lat);
  for (const auto& f : sample_join_preserving(rng, lat, 4)) {
    ExtendedAdjoint ext;
    try {
      ext = extend_left_adjoint(lat, f, cl);
    } catch (const std::invalid_argument&) {
      continue;
    }
    for (int x = 0; x < lat.size(); ++x)
      if (ext.f_ext[cl.iota(x)] != cl.iota(f[x])) adj_ok = false;
    for (int a = 0; a < cl.size(); ++a)
      for (int b = 0; b < cl.size(); ++b) {
        bool left = cl.leq(ext.f_ext[a], b);
        bool right = cl.leq(a, ext.g_ext[b]);
        if (left != right) adj_ok = false;
      }
  }
}

void suite_completion(Suite& s, std::uint64_t seed, long) {
  Rng rng(seed);
  bool laws_ok = true, adj_ok = true;
  long posets = 0;
  for (int n = 0; n <= 5; ++n)
    for (const auto& p : posets_up_to_iso(n)) {
      ++posets;
      check_completion_of(s, p, laws_ok, adj_ok, rng);
    }
  for (int i = 0; i < 200; ++i) {
    FinitePoset p = random_poset(rng, 8);
    ++posets;
    check_completion_of(s, p, laws_ok, adj_ok, rng);
  }
  s.check("completion laws over " + std::to_string(posets) + " posets", laws_ok);
  s.check("adjoint extension and adjunction laws", adj_ok);

  // Fixed-point preservation for polynomial steps on model powersets.
  bool pres_ok = true;
  for (int which = 0; which < 2 && pres_ok; ++which) {
    KripkeModel m = fixed_model(which);
    CompletedModalAlgebra c = complete_modal_structure(m);
    TermGenConfig tc;
    tc.max_depth = 3;
    tc.variables = {"x"};
    tc.allow_binders = false;
    for (int i = 0; i < 40 && pres_ok; ++i) {
      Term body = random_term(rng, tc);
      auto rep = preservation_check(m, c, body, "x");
      if (rep.verdict != PreservationVerdict::Preserved) pres_ok = false;
    }
  }
  s.check("approximant chains preserved through the embedding", pres_ok);

  // Desk instance: small-depth least- and greatest-fixed-point terms agree
  // through the embedding.
  bool desk_ok = true;
  long desk_terms = 0;
  for (int which = 0; which < 2 && desk_ok; ++which) {
    KripkeModel m = fixed_model(which);
    CompletedModalAlgebra c = complete_modal_structure(m);
    for (Fragment fr : {Fragment::Sigma1, Fragment::Pi1}) {
      for (const auto& t : enumerate_fragment_terms(fr, 3)) {
        ++desk_terms;
        if (c.eval(t) != c.iota(eval(m, t))) {
          desk_ok = false;
          break;
        }
      }
      if (!desk_ok) break;
    }
  }
  s.check("small-depth fixed-point terms preserved (" +
              std::to_string(desk_terms) + " terms)",
          desk_ok);
}

// ---------------------------------------------------------------------------
// 14. Sigma1 compilation.

void suite_sigma1_compile(Suite& s, std::uint64_t seed, long) {
  Rng rng(seed);
  bool ok = true, elem_ok = true;
  std::string detail;
  for (int i = 0; i < 300 && ok; ++i) {
    TermGenConfig tc;
    tc.max_depth = 3;
    Term t = random_sigma1_term(rng, tc);
    CompiledSigma1 comp;
    try {
      comp = compile_sigma1(t);
    } catch (const std::invalid_argument&) {
      // Generator occasionally emits terms outside the fragment via
      // variable reuse; they do not count toward the 300.
      --i;
      continue;
    }
    if (!classify_system(comp.system).elementary) elem_ok = false;
    ModelBounds mb;
    mb.max_states = 5;
    KripkeModel m = random_model(rng(), mb);
    Env env = comp.make_env(m);
    Solution sol = bekic_solve(comp.system, m, env);
    if (sol.at(comp.designated) != eval(m, t)) {
      ok = false;
      detail = "sample " + std::to_string(i);
    }
  }
  s.check("designated coordinate equals direct evaluation (300)", ok, detail);
  s.check("compiled systems are elementary", elem_ok);
}

using SuiteFn = void (*)(Suite&, std::uint64_t, long);

struct Entry {
  const char* name;
  SuiteFn fn;
};

const Entry kSuites[] = {
    {"bekic", suite_bekic},
    {"sigma1-constructive", suite_sigma1_constructive},
    {"guarding", suite_guarding},
    {"powerset", suite_powerset},
    {"arrow-conj", suite_arrow_conj},
    {"kleene-star", suite_kleene},
    {"covers", suite_covers},
    {"mu-covers", suite_mu_covers},
    {"spcon-covers", suite_spcon_covers},
    {"whitman", suite_whitman},
    {"harness", suite_harness},
    {"counterexample", suite_counterexample},
    {"completion", suite_completion},
    {"sigma1-compile", suite_sigma1_compile},
};

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& e : kSuites) out.push_back(e.name);
  return out;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed, long budget) {
  if (budget <= 0) budget = kDefaultBudget;
  Suite s;
  s.rep.suite = name;
  s.rep.seed = seed;
  s.rep.budget = budget;
  if (name == "all") {
    for (const auto& e : kSuites) {
      SuiteReport sub = run_suite(e.name, seed, budget);
      for (auto& c : sub.checks) {
        c.name = std::string(e.name) + ": " + c.name;
        s.rep.checks.push_back(c);
      }
    }
    return s.rep;
  }
  for (const auto& e : kSuites)
    if (name == e.name) {
      e.fn(s, seed, budget);
      return s.rep;
    }
  throw std::invalid_argument("unknown suite: " + name);
}

std::string format_report(const SuiteReport& r) {
  std::ostringstream os;
  os << "suite " << r.suite << " seed=" << r.seed << " budget=" << r.budget
     << "\n";
  int passed = 0;
  for (const auto& c : r.checks) {
    os << "check " << c.name << ": " << (c.pass ? "PASS" : "FAIL");
    if (!c.detail.empty()) os << " [" << c.detail << "]";
    os << "\n";
    if (c.pass) ++passed;
  }
  os << "result: " << (r.pass() ? "PASS" : "FAIL") << " (" << passed << "/"
     << r.checks.size() << ")\n";
  return os.str();
}

}  // namespace mualg
