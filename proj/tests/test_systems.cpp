#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mualg/sampling.hpp"
#include "mualg/systems.hpp"
#include "mualg/textio.hpp"

using namespace mualg;

namespace {

KripkeModel m1() {
  return KripkeModel::make(2, {"a"}, {{"a", {{0, 1}, {1, 1}}}}, {{"p", {1}}});
}

Elem bits(std::initializer_list<int> states) {
  Elem z = 0;
  for (int s : states) z |= Elem(1) << s;
  return z;
}

System sys1(const std::string& text) { return parse_system(text); }

}  // namespace

TEST_CASE("system validation") {
  System s;
  s.bound = {"x"};
  s.equations["x"] = neg(var("x"));
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.equations["x"] = var("x");
  s.params = {"x"};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("classification of systems") {
  System a = sys1("bound: x\nx := arrow a { x }\n");
  auto ca = classify_system(a);
  CHECK(ca.elementary);
  CHECK(ca.guarded);
  CHECK(ca.simple);
  CHECK(ca.disjunctive_simple);

  System b = sys1("bound: x xp\nx := p & arrow a { x | xp }\nxp := F\n");
  auto cb = classify_system(b);
  CHECK(!cb.elementary);
  CHECK(cb.simple);
  CHECK(cb.guarded);

  System c = sys1("bound: x\nx := x | p\n");
  auto cc = classify_system(c);
  CHECK(!cc.elementary);
  CHECK(!cc.guarded);
  CHECK(!cc.simple);
}

TEST_CASE("arrow recognition") {
  std::string act;
  std::vector<Term> ops;
  CHECK(match_arrow(arrow("a", {var("x"), var("y")}), &act, &ops));
  CHECK(act == "a");
  CHECK(ops.size() == 2);
  CHECK(match_arrow(arrow("a", {}), &act, &ops));
  CHECK(ops.empty());
  CHECK(!match_arrow(conj(gen("p"), arrow("a", {var("x")})), nullptr, nullptr));
  CHECK(!match_arrow(conj(box("a", var("x")), dia("a", var("y"))), nullptr, nullptr));
}

TEST_CASE("elimination matches joint iteration on the examples") {
  KripkeModel m = m1();
  System a = sys1("bound: x\nx := p | <a> x\n");
  CHECK(bekic_solve(a, m).at("x") == bits({0, 1}));
  CHECK(simultaneous_solve(a, m).first.at("x") == bits({0, 1}));

  System b = sys1("bound: x yp\nx := yp\nyp := x\n");
  auto sol = bekic_solve(b, m);
  CHECK(sol.at("x") == 0);
  CHECK(sol.at("yp") == 0);

  System c = sys1("bound: x\nfree: y\nx := <a> y\n");
  CHECK(bekic_solve(c, m, {{"y", bits({1})}}).at("x") == bits({0, 1}));
}

TEST_CASE("joint iteration trace shapes") {
  KripkeModel m = m1();
  System a = sys1("bound: x\nx := F\n");
  auto [sol, tr] = simultaneous_solve(a, m);
  CHECK(sol.at("x") == 0);
  CHECK(tr.entries.size() == 2);

  System e;
  auto [sole, tre] = simultaneous_solve(e, m);
  CHECK(sole.empty());

  // The elimination examples again, through the joint route.
  System b = sys1("bound: x yp\nx := yp\nyp := x\n");
  auto solb = simultaneous_solve(b, m).first;
  CHECK(solb.at("x") == 0);
  CHECK(solb.at("yp") == 0);
  System c = sys1("bound: x\nfree: y\nx := <a> y\n");
  CHECK(simultaneous_solve(c, m, {{"y", bits({1})}}).first.at("x") ==
        bits({0, 1}));
}

TEST_CASE("elimination equals joint iteration on random systems") {
  Rng rng(2024);
  for (int i = 0; i < 120; ++i) {
    SystemGenConfig sc;
    sc.num_bound = 1 + int(rng() % 3);
    System s = random_system(rng, sc);
    ModelBounds mb;
    mb.max_states = 5;
    KripkeModel m = random_model(rng(), mb);
    CHECK(bekic_solve(s, m) == simultaneous_solve(s, m).first);
  }
}

TEST_CASE("guarding a system") {
  System a = sys1("bound: x\nx := x | p\n");
  System ga = guard_system(a);
  CHECK(alpha_equal(ga.equations.at("x"), gen("p")));

  System b = sys1("bound: x yp\nx := yp\nyp := <a> x | p\n");
  System gb = guard_system(b);
  CHECK(alpha_equal(gb.equations.at("x"), disj(dia("a", var("x")), gen("p"))));
  CHECK(alpha_equal(gb.equations.at("yp"), disj(dia("a", var("x")), gen("p"))));

  System c = sys1("bound: x\nx := <a> x\n");
  System gc = guard_system(c);
  CHECK(alpha_equal(gc.equations.at("x"), dia("a", var("x"))));
}

TEST_CASE("guard stages carry the sandwich") {
  System b = sys1("bound: x yp\nx := yp\nyp := <a> x | p\n");
  KripkeModel m = m1();
  auto stages = guard_system_stages(b);
  REQUIRE(stages.size() >= 2);
  auto chain = [&](const System& q, int len) {
    std::vector<std::vector<Elem>> out;
    std::vector<Elem> cur(q.bound.size(), 0);
    out.push_back(cur);
    for (int k = 0; k < len; ++k) {
      cur = system_step(q, m, {}, cur);
      out.push_back(cur);
    }
    return out;
  };
  for (std::size_t j = 1; j < stages.size(); ++j) {
    auto prev = chain(stages[j - 1].first, 40);
    auto cur = chain(stages[j].first, 40);
    for (int n = 0; n <= 20; ++n) {
      if (stages[j].second == GuardStage::LoopElimination) {
        CHECK(prev[n] == cur[n]);
      } else {
        CHECK(vec_leq(prev[n], cur[n]));
        CHECK(vec_leq(cur[n], prev[2 * n]));
      }
    }
  }
}

TEST_CASE("unraveling to a simple system") {
  System a = sys1("bound: x\nx := <a> <a> x\n");
  auto ra = unravel_to_simple(a);
  CHECK(classify_system(ra.system).simple);
  CHECK(ra.witness.at("x") == "x");
  KripkeModel m = m1();
  CHECK(cofinal_check(a, ra.system, m, {}, 20, ra.witness));

  System b = sys1("bound: x\nx := arrow a { x }\n");
  auto rb = unravel_to_simple(b);
  CHECK(alpha_equal(rb.system.equations.at("x"), arrow("a", {var("x")})));

  System c = sys1("bound: x\nx := p & <a> (x | p)\n");
  auto rc = unravel_to_simple(c);
  CHECK(classify_system(rc.system).simple);
  CHECK(cofinal_check(c, rc.system, m, {}, 20, rc.witness));
  CHECK(rc.system.bound.size() > 1);  // the body was hoisted

  System un = sys1("bound: x\nx := x | p\n");
  CHECK_THROWS_AS(unravel_to_simple(un), std::invalid_argument);
}

TEST_CASE("unravel determines on random guarded systems") {
  Rng rng(99);
  for (int i = 0; i < 40; ++i) {
    SystemGenConfig sc;
    sc.num_bound = 1 + int(rng() % 2);
    sc.term_depth = 3;
    System s = guard_system(random_system(rng, sc));
    auto r = unravel_to_simple(s);
    CHECK(classify_system(r.system).simple);
    ModelBounds mb;
    mb.max_states = 4;
    KripkeModel m = random_model(rng(), mb);
    CHECK(cofinal_check(s, r.system, m, {}, 12, r.witness));
  }
}

TEST_CASE("cofinality checks") {
  KripkeModel m = m1();
  System f = sys1("bound: x\nx := p | <a> x\n");
  CHECK(cofinal_check(f, f, m, {}, 5));
  System lo = sys1("bound: x\nx := F\n");
  System hi = sys1("bound: x\nx := T\n");
  CHECK(!cofinal_check(lo, hi, m, {}, 1));
  // An unguarded loop against its guarded form.
  System loops = sys1("bound: x\nx := x | p | <a> x\n");
  CHECK(cofinal_check(loops, guard_system(loops), m, {}, 10));
}

TEST_CASE("meets of arrows collapse by the case split") {
  // One empty operand set against a nonempty one kills the component.
  System s = sys1("bound: x y\nx := arrow a { }\ny := arrow a { x }\n");
  auto pt = powerset_translate(s);
  // Subset {x, y} is the third variable (mask 3).
  CHECK(alpha_equal(pt.target.equations.at(pt.subset_vars[2]), bot()));
  // Both empty keeps the empty arrow.
  System s2 = sys1("bound: x y\nx := arrow a { }\ny := arrow a { }\n");
  auto pt2 = powerset_translate(s2);
  CHECK(alpha_equal(pt2.target.equations.at(pt2.subset_vars[2]), arrow("a", {})));
}

TEST_CASE("powerset translation on one variable is renaming") {
  System a = sys1("bound: x\nx := arrow a { x }\n");
  auto pt = powerset_translate(a);
  REQUIRE(pt.subset_vars.size() == 1);
  Term expected = arrow("a", {var(pt.subset_vars[0])});
  CHECK(alpha_equal(pt.target.equations.at(pt.subset_vars[0]), expected));
}

TEST_CASE("powerset translation commutes with meets") {
  Rng rng(404);
  for (int i = 0; i < 40; ++i) {
    SystemGenConfig sc;
    sc.num_bound = 2;
    System s = random_simple_system(rng, sc);
    PowersetTranslation pt;
    try {
      pt = powerset_translate(s);
    } catch (const std::invalid_argument&) {
      continue;
    }
    CHECK(classify_system(pt.target).disjunctive_simple);
    ModelBounds mb;
    mb.max_states = 4;
    KripkeModel m = random_model(rng(), mb);
    const int n = int(s.bound.size());
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<Elem> xv(n);
      for (auto& z : xv) z = rng() & m.universe();
      CHECK(pt.project(pt.embed(xv)) == xv);
      Env env, xenv;
      auto w = pt.embed(xv);
      for (std::size_t j = 0; j < pt.subset_vars.size(); ++j)
        env[pt.subset_vars[j]] = w[j] & m.universe();
      for (int j = 0; j < n; ++j) xenv[s.bound[j]] = xv[j];
      for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
        Elem lhs = m.universe();
        for (int j = 0; j < n; ++j)
          if ((mask >> j) & 1)
            lhs &= eval(m, s.equations.at(s.bound[j]), xenv);
        CHECK(lhs == eval(m, pt.target.equations.at(pt.subset_vars[mask - 1]), env));
      }
    }
    // Stage transfer: the embedding carries the approximant chains onto
    // each other.
    std::vector<Elem> fx(s.bound.size(), 0);
    std::vector<Elem> gw(pt.subset_vars.size(), 0);
    for (int k = 0; k < 10; ++k) {
      auto ew = pt.embed(fx);
      for (auto& z : ew) z &= m.universe();
      CHECK(ew == gw);
      fx = system_step(s, m, {}, fx);
      gw = system_step(pt.target, m, {}, gw);
    }
  }
  System notsimple = sys1("bound: x\nx := x | p\n");
  CHECK_THROWS_AS(powerset_translate(notsimple), std::invalid_argument);
}

TEST_CASE("sigma1 compilation shapes") {
  auto cp = compile_sigma1(gen("p"));
  CHECK(cp.system.bound.size() == 1);
  CHECK(cp.system.equations.at(cp.designated)->kind == Kind::Var);
  CHECK(classify_system(cp.system).elementary);
  REQUIRE(cp.literal_bindings.size() == 1);
  CHECK(alpha_equal(cp.literal_bindings.begin()->second, gen("p")));

  auto cd = compile_sigma1(dia("a", gen("q")));
  CHECK(classify_system(cd.system).elementary);
  CHECK(cd.system.bound.size() == 3);  // operand, the shared top, the arrow
  std::string act;
  std::vector<Term> ops;
  CHECK(match_arrow(cd.system.equations.at(cd.designated), &act, &ops));
  CHECK(ops.size() == 2);

  Term star = mu("y", disj(gen("p"), dia("a", var("y"))));
  auto cs = compile_sigma1(star);
  CHECK(classify_system(cs.system).elementary);
  // The binder variable heads the system with a variable equation.
  CHECK(cs.system.equations.at(cs.designated)->kind == Kind::Var);

  CHECK_THROWS_AS(compile_sigma1(nu("x", var("x"))), std::invalid_argument);
}

TEST_CASE("compiled systems evaluate to the source term") {
  Rng rng(777);
  for (int i = 0; i < 60; ++i) {
    TermGenConfig tc;
    tc.max_depth = 3;
    Term t = random_sigma1_term(rng, tc);
    CompiledSigma1 comp;
    try {
      comp = compile_sigma1(t);
    } catch (const std::invalid_argument&) {
      continue;
    }
    ModelBounds mb;
    mb.max_states = 4;
    KripkeModel m = random_model(rng(), mb);
    Env env = comp.make_env(m);
    CHECK(bekic_solve(comp.system, m, env).at(comp.designated) == eval(m, t));
  }
}

TEST_CASE("harness sequences on degenerate maps") {
  KripkeModel m = m1();
  auto [tr, v] = regular_harness(var("x"), var("y"), m, 6);
  for (Elem e : tr.f_seq) CHECK(e == 0);
  for (Elem e : tr.g_seq) CHECK(e == 0);
  for (Elem e : tr.h_seq) CHECK(e == 0);
  for (Elem e : tr.i_seq) CHECK(e == 0);
  CHECK(v.all());
  REQUIRE(!tr.level_pairs.empty());
  REQUIRE(tr.level_pairs[0].size() == 1);
  CHECK(tr.level_pairs[0][0] == std::pair<Elem, Elem>{0, 0});
}

TEST_CASE("harness verdicts on a guarded pair") {
  KripkeModel m = m1();
  Term f = disj(gen("p"), dia("a", var("y")));
  Term g = disj(gen("q"), dia("a", var("x")));
  KripkeModel mq = m;
  mq.val["q"] = Elem(1);
  auto [tr, v] = regular_harness(f, g, mq, 8);
  CHECK(v.chain_dominated);
  CHECK(v.level_joins_match);
  CHECK(v.pairs_bounded);
  // Monotone in each index.
  for (std::size_t n = 0; n + 1 < tr.f_seq.size(); ++n) {
    CHECK((tr.f_seq[n] & ~tr.f_seq[n + 1]) == 0);
    CHECK((tr.h_seq[n] & ~tr.h_seq[n + 1]) == 0);
  }
}

TEST_CASE("word-indexed values are monotone in the word") {
  KripkeModel m = m1();
  Term f = disj(gen("p"), dia("a", var("y")));
  Term g = disj(var("x"), dia("a", var("x")));
  // Explicit small enumeration: words over {0,1,2} of length <= 3,
  // componentwise order on equal lengths.
  auto F = [&](Elem a, Elem b) {
    return eval(m, f, {{"x", a}, {"y", b}});
  };
  auto G = [&](Elem a, Elem b) {
    return eval(m, g, {{"x", a}, {"y", b}});
  };
  auto g_iter = [&](Elem a, int k) {
    Elem cur = 0;
    for (int i = 0; i < k; ++i) cur = G(a, cur);
    return cur;
  };
  std::map<std::vector<int>, std::pair<Elem, Elem>> lw;
  lw[{}] = {0, 0};
  std::vector<std::vector<int>> level{{}};
  for (int n = 0; n < 3; ++n) {
    std::vector<std::vector<int>> next;
    for (const auto& w : level)
      for (int k = 0; k <= 2; ++k) {
        auto wk = w;
        wk.push_back(k);
        Elem l = lw[w].first;
        Elem mk = g_iter(l, k);
        lw[wk] = {F(l, mk), mk};
        next.push_back(wk);
      }
    for (const auto& w : next)
      for (const auto& u : next) {
        bool leq = true;
        for (std::size_t i = 0; i < w.size(); ++i)
          if (w[i] > u[i]) leq = false;
        if (leq) {
          CHECK((lw[w].first & ~lw[u].first) == 0);
          CHECK((lw[w].second & ~lw[u].second) == 0);
        }
      }
    level = next;
  }
}
