#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mualg/covers.hpp"
#include "mualg/sampling.hpp"
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

}  // namespace

TEST_CASE("primitive cover rules on a lattice") {
  KripkeModel m = m1();
  LatticeCovers lc(m);
  Elem t = bits({1});

  auto c1 = lc.cover(adj::identity(), {t});
  REQUIRE(c1.size() == 1);
  CHECK(c1[0] == std::vector<Elem>{t});

  auto c2 = lc.cover(adj::join(2), {t});
  REQUIRE(c2.size() == 1);
  CHECK(c2[0] == std::vector<Elem>{t, t});

  auto c3 = lc.cover(adj::constant(top(), 1), {t});
  CHECK(c3.empty());
  auto c4 = lc.cover(adj::constant(bot(), 1), {t});
  REQUIRE(c4.size() == 1);
  CHECK(c4[0] == std::vector<Elem>{m.universe()});

  // Soundness spot checks: applying a cover lands under the target.
  for (const auto& d :
       {adj::dia("a"), adj::const_meet(gen("p")),
        adj::compose(adj::dia("a"), adj::dia("a"))}) {
    for (Elem z = 0; z <= m.universe(); ++z)
      for (const auto& c : lc.cover(d, {z}))
        CHECK((lc.apply(d, c)[0] & ~z) == 0);
  }
}

TEST_CASE("arity discipline") {
  CHECK_THROWS_AS(adj::proj(2, 2), std::invalid_argument);
  // join has one output; it cannot feed a two-input map.
  CHECK_THROWS_AS(adj::compose(adj::join(2), adj::dia("a")), std::invalid_argument);
  auto ok = adj::compose(adj::dia("a"), adj::compose(adj::join(2), adj::pair_of({
                            adj::proj(0, 2), adj::proj(1, 2)})));
  CHECK(ok->arity == 2);
  CHECK_THROWS_AS(adj::mu(adj::join(2), {0, 1}), std::invalid_argument);
}

TEST_CASE("diamond right adjoint per clause") {
  Term b = disj(neg(gen("p")), disj(dia("a", gen("q")), box("a", gen("r"))));
  CHECK(alpha_equal(dia_right_adjoint("a", modal_cnf(b)), gen("q")));
  CHECK(alpha_equal(dia_right_adjoint("a", modal_cnf(top())), top()));
  CHECK(alpha_equal(dia_right_adjoint("a", modal_cnf(neg(gen("p")))), bot()));
}

TEST_CASE("counit holds by refutation") {
  Rng rng(5);
  SamplerConfig cfg;
  cfg.exhaustive_max_states = 2;
  cfg.random_models = 60;
  TermGenConfig tc;
  tc.max_depth = 2;
  tc.allow_binders = false;
  for (int i = 0; i < 25; ++i) {
    Term b = random_term(rng, tc);
    Term r = dia_right_adjoint("a", modal_cnf(b));
    cfg.seed = rng();
    CHECK(!check_leq(dia("a", r), b, cfg).refuted);
  }
}

TEST_CASE("special conjunction covers match the stated shape") {
  SpconSpec spec;
  spec.literals = {{"p", false, false}};
  spec.blocks = {{"a", {"x1", "x2"}}};

  Clause b;
  b.literals.insert({"q", true, false});
  b.dia_part["a"] = gen("d");
  b.box_part["a"] = {gen("e")};

  auto cs = spcon_cover(spec, b);
  REQUIRE(cs.size() == 3);
  CHECK(alpha_equal(cs[0][0], gen("d")));
  CHECK(alpha_equal(cs[0][1], top()));
  CHECK(alpha_equal(cs[1][0], top()));
  CHECK(alpha_equal(cs[1][1], gen("d")));
  CHECK(alpha_equal(cs[2][0], disj(gen("d"), gen("e"))));
  CHECK(alpha_equal(cs[2][1], disj(gen("d"), gen("e"))));

  // Literal meet under the clause's literal join: the whole-carrier cover.
  Clause b2;
  b2.literals.insert({"p", false, false});
  auto cs2 = spcon_cover(spec, b2);
  REQUIRE(cs2.size() == 1);
  CHECK(alpha_equal(cs2[0][0], top()));
  CHECK(alpha_equal(cs2[0][1], top()));
}

TEST_CASE("special conjunction cover soundness") {
  SpconSpec spec;
  spec.literals = {{"p", false, false}};
  spec.blocks = {{"a", {"x1", "x2"}}};
  Clause b;
  b.dia_part["a"] = gen("d");
  b.box_part["a"] = {gen("e")};
  Term bt = b.to_term();
  SamplerConfig cfg;
  cfg.exhaustive_max_states = 2;
  cfg.random_models = 200;
  cfg.seed = 99;
  for (const auto& c : spcon_cover(spec, b)) {
    Term lhs = substitute(spcon(spec), {{"x1", c[0]}, {"x2", c[1]}});
    CHECK(!check_leq(lhs, bt, cfg).refuted);
  }
}

TEST_CASE("cover graphs") {
  KripkeModel m = m1();
  LatticeCovers lc(m);
  Elem l = bits({1});

  // Identity in the bound coordinate: one vertex, a self edge.
  auto g1 = lc.cover_graph(adj::identity(), {0}, {l}, 64);
  CHECK(g1.closed);
  CHECK(g1.vertices.size() == 1);
  REQUIRE(g1.edges.size() == 1);
  CHECK(g1.edges[0].src == 0);
  CHECK(g1.edges[0].dst == 0);
  CHECK(g1.edges[0].label.empty());

  // Empty cover: a single vertex without edges.
  auto g2 = lc.cover_graph(adj::constant(top(), 1), {0}, {l}, 64);
  CHECK(g2.closed);
  CHECK(g2.vertices.size() == 1);
  CHECK(g2.edges.empty());

  // Join with a parameter: self loop labeled by the target.
  auto g3 = lc.cover_graph(adj::join(2), {0}, {l}, 64);
  CHECK(g3.closed);
  CHECK(g3.vertices.size() == 1);
  REQUIRE(g3.edges.size() == 1);
  CHECK(g3.edges[0].label == std::vector<Elem>{l});
}

TEST_CASE("fixed-point covers via pans") {
  KripkeModel m = m1();
  LatticeCovers lc(m);
  // mu x. y: the parameter alone.
  auto d1 = adj::mu(adj::proj(1, 2), {0});
  for (Elem l = 0; l <= m.universe(); ++l) {
    auto cs = lc.mu_cover(d1, {l});
    REQUIRE(cs.size() == 1);
    CHECK(cs[0] == std::vector<Elem>{l});
  }
  // mu x. x = bottom: everything covers.
  auto d2 = adj::mu(adj::proj(0, 2), {0});
  for (Elem l = 0; l <= m.universe(); ++l) {
    auto cs = lc.mu_cover(d2, {l});
    REQUIRE(cs.size() == 1);
    CHECK(cs[0] == std::vector<Elem>{m.universe()});
  }
  // mu x. y \/ <a>x against the enumeration oracle.
  auto step = adj::compose(
      adj::join(2),
      adj::pair_of({adj::proj(1, 2), adj::compose(adj::dia("a"), adj::proj(0, 2))}));
  auto d3 = adj::mu(step, {0});
  auto fn = [&](const std::vector<Elem>& params) { return lc.apply(d3, params); };
  for (Elem l = 0; l <= m.universe(); ++l) {
    auto mine = lc.mu_cover(d3, {l});
    auto oracle = semantic_cover_oracle(fn, 1, m, {l});
    REQUIRE(mine.size() == oracle.size());
    for (const auto& v : oracle) {
      bool found = false;
      for (const auto& u : mine)
        if (u == v) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("pruned fixed-point covers form an antichain") {
  KripkeModel m = KripkeModel::make(3, {"a"}, {{"a", {{0, 1}, {1, 2}, {2, 2}}}},
                                    {{"p", {2}}});
  LatticeCovers lc(m);
  auto step = adj::compose(
      adj::join(2),
      adj::pair_of({adj::proj(1, 2), adj::compose(adj::dia("a"), adj::proj(0, 2))}));
  auto d = adj::mu(step, {0});
  for (Elem l = 0; l <= m.universe(); ++l) {
    auto cs = lc.mu_cover(d, {l});
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t j = 0; j < cs.size(); ++j)
        if (i != j) CHECK(!vec_leq(cs[i], cs[j]));
  }
}

TEST_CASE("automaton reachability") {
  KripkeModel m = m1();
  LatticeCovers lc(m);
  Elem l = bits({1});
  auto r0 = lc.automaton_reach({}, {l}, 64);
  CHECK(r0.closed);
  CHECK(r0.states == std::vector<Elem>{l});

  auto r1 = lc.automaton_reach({adj::identity()}, {l}, 64);
  CHECK(r1.closed);
  CHECK(r1.states == std::vector<Elem>{l});

  // A diamond scheme adds right adjoints until the set closes.
  auto r2 = lc.automaton_reach({adj::dia("a")}, {l}, 64);
  CHECK(r2.closed);
  CHECK(r2.states.size() <= 4);
}

TEST_CASE("syntactic automaton stays inside the closure lattice") {
  SyntacticCovers sc;
  SpconSpec spec;
  spec.blocks = {{"a", {"x1"}}};
  Term seed_term = disj(neg(gen("p")), dia("a", gen("q")));
  auto r = sc.automaton_reach({adj::spcon_map(spec)}, {seed_term}, 64);
  CHECK(r.closed);
  // Every reached vertex is a meet of joins of closure members.
  TermSet fl = fl_closure(seed_term);
  std::function<bool(const Term&, bool)> in_d = [&](const Term& t,
                                                    bool join_ok) -> bool {
    if (t->kind == Kind::Top || t->kind == Kind::Bot) return true;
    if (fl.contains(t)) return true;
    if (t->kind == Kind::And) return in_d(t->lhs, true) && in_d(t->rhs, true);
    if (t->kind == Kind::Or && join_ok)
      return in_d(t->lhs, true) && in_d(t->rhs, true);
    return false;
  };
  for (const auto& v : r.states) CHECK(in_d(v, true));
}

TEST_CASE("constructive suprema on the lattice backend") {
  KripkeModel m = m1();
  LatticeCovers lc(m);
  // Constant map: the value lands at stage one.
  auto dc = adj::mu(adj::constant(gen("p"), 1), {0});
  auto rc = lc.constructive_sup(dc, {}, 64);
  CHECK(rc.entries.back() == std::vector<Elem>{bits({1})});
  CHECK(rc.stab_index == 1);
  CHECK(rc.pigeonhole_ok);

  // p \/ <a>x reaches the whole carrier within the graph bound.
  auto star = adj::mu(
      adj::compose(adj::join(2), adj::pair_of({adj::constant(gen("p"), 1),
                                               adj::dia("a")})),
      {0});
  auto rs = lc.constructive_sup(star, {}, 64);
  CHECK(rs.entries.back() == std::vector<Elem>{bits({0, 1})});
  CHECK(rs.stab_index + 1 <= 3);
  CHECK(rs.pigeonhole_ok);
  CHECK(eval(m, mu("y", disj(gen("p"), dia("a", var("y"))))) == bits({0, 1}));
}

TEST_CASE("right-adjoint chains stabilize inside the closure") {
  Term b = disj(neg(gen("p")), dia("a", gen("q")));
  auto kc = dia_radj_chain(b, "a", 1 << 10);
  CHECK(kc.stabilized);
  CHECK(kc.steps <= kc.fl_bound);
  REQUIRE(kc.chain.size() >= 2);
  CHECK(alpha_equal(kc.chain[1], gen("q")));
}

TEST_CASE("syntactic order approximation is conservative") {
  CHECK(syntactic_leq_approx(bot(), gen("p")));
  CHECK(syntactic_leq_approx(gen("p"), top()));
  CHECK(syntactic_leq_approx(gen("p"), disj(gen("p"), gen("q"))));
  CHECK(syntactic_leq_approx(conj(gen("p"), gen("q")), gen("p")));
  CHECK(!syntactic_leq_approx(gen("p"), gen("q")));
  // Never claims an order between incomparable generators.
  CHECK(!syntactic_leq_approx(top(), gen("p")));
}

TEST_CASE("syntactic fixed-point application builds a binder") {
  SyntacticCovers sc;
  auto star = adj::mu(
      adj::compose(adj::join(2), adj::pair_of({adj::proj(1, 2),
                                               adj::compose(adj::dia("a"),
                                                            adj::proj(0, 2))})),
      {0});
  Term t = sc.apply(star, {gen("p")})[0];
  CHECK(t->kind == Kind::Mu);
  KripkeModel m = m1();
  CHECK(eval(m, t) == eval(m, mu("y", disj(gen("p"), dia("a", var("y"))))));
}

TEST_CASE("descriptors are monotone and continuous on finite carriers") {
  KripkeModel m = m1();
  LatticeCovers lc(m);
  auto ds = {adj::dia("a"), adj::const_meet(gen("p")),
             adj::compose(adj::dia("a"), adj::dia("a"))};
  for (const auto& d : ds) {
    for (Elem a = 0; a <= m.universe(); ++a)
      for (Elem b = 0; b <= m.universe(); ++b) {
        if (a & ~b) continue;
        CHECK((lc.apply(d, {a})[0] & ~lc.apply(d, {b})[0]) == 0);
      }
    // A finite directed family has a maximum, so the image of its join is
    // the join of the images.
    for (Elem a = 0; a <= m.universe(); ++a)
      for (Elem b = 0; b <= m.universe(); ++b) {
        if (a & ~b) continue;  // {a, b} directed with join b
        Elem img = lc.apply(d, {a})[0] | lc.apply(d, {b})[0];
        CHECK(lc.apply(d, {b})[0] == img);
      }
  }
}

TEST_CASE("unit form derived from the counit") {
  Rng rng(77);
  SamplerConfig cfg;
  cfg.exhaustive_max_states = 2;
  cfg.random_models = 60;
  TermGenConfig tc;
  tc.max_depth = 2;
  tc.allow_binders = false;
  for (int i = 0; i < 15; ++i) {
    Term b = random_term(rng, tc);
    Term r = dia_right_adjoint("a", modal_cnf(b));
    // Anything syntactically under the right adjoint transposes.
    Term x = conj(r, random_term(rng, tc));
    cfg.seed = rng();
    CHECK(!check_leq(dia("a", x), b, cfg).refuted);
  }
}

TEST_CASE("lattice spcon covers are not claimed") {
  KripkeModel m = m1();
  LatticeCovers lc(m);
  SpconSpec spec;
  spec.blocks = {{"a", {"x1"}}};
  CHECK_THROWS_AS(lc.cover(adj::spcon_map(spec), {bits({1})}),
                  std::invalid_argument);
}
