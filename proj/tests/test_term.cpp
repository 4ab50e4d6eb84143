#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "mualg/kripke.hpp"
#include "mualg/sampling.hpp"
#include "mualg/term.hpp"
#include "mualg/textio.hpp"

using namespace mualg;

namespace {

KripkeModel m1() {
  return KripkeModel::make(2, {"a"}, {{"a", {{0, 1}, {1, 1}}}}, {{"p", {1}}});
}

// Equality of two closed terms on every model over the signature, up to the
// given state count.
bool eval_equal_small(const Term& a, const Term& b, int max_states = 3) {
  std::set<std::string> act_set = actions_of(a);
  for (const auto& x : actions_of(b)) act_set.insert(x);
  std::vector<std::string> acts(act_set.begin(), act_set.end());
  if (acts.empty()) acts.push_back("a");
  std::set<std::string> gs = generators_of(a);
  for (const auto& g : generators_of(b)) gs.insert(g);
  std::vector<std::string> gens(gs.begin(), gs.end());
  bool same = true;
  for (int s = 0; s <= max_states && same; ++s)
    enumerate_models(s, acts, gens, [&](const KripkeModel& m) {
      if (eval(m, a) != eval(m, b)) same = false;
      return same;
    });
  return same;
}

}  // namespace

TEST_CASE("nnf pushes negation to atoms") {
  Term t = neg(conj(gen("p"), dia("a", gen("q"))));
  Term expect = disj(neg(gen("p")), box("a", neg(gen("q"))));
  CHECK(alpha_equal(nnf(t), expect));
  CHECK(alpha_equal(nnf(gen("p")), gen("p")));
}

TEST_CASE("nnf dualizes binders") {
  Term t = neg(mu("x", disj(gen("p"), dia("a", var("x")))));
  Term expect = nu("x", conj(neg(gen("p")), box("a", var("x"))));
  CHECK(alpha_equal(nnf(t), expect));
  // Semantic agreement on every small model.
  CHECK(eval_equal_small(t, nnf(t)));
}

TEST_CASE("nnf preserves evaluation on random terms") {
  Rng rng(7);
  TermGenConfig cfg;
  for (int i = 0; i < 60; ++i) {
    Term t = random_term(rng, cfg);
    Term wrapped = neg(neg(t));
    ModelBounds mb;
    mb.max_states = 4;
    KripkeModel m = random_model(rng(), mb);
    CHECK(eval(m, nnf(wrapped)) == eval(m, t));
  }
}

TEST_CASE("substitution examples") {
  CHECK(alpha_equal(substitute(disj(var("x"), gen("p")), {{"x", dia("a", gen("q"))}}),
                    disj(dia("a", gen("q")), gen("p"))));
  // Capture avoidance forces the binder to rename.
  Term t = mu("x", disj(var("x"), var("y")));
  Term got = substitute(t, {{"y", var("x")}});
  CHECK(alpha_equal(got, mu("z", disj(var("z"), var("x")))));
  CHECK(free_vars(got) == std::set<std::string>{"x"});
  CHECK(alpha_equal(substitute(gen("p"), {{"x", gen("q")}}), gen("p")));
}

TEST_CASE("substitution respects free variables") {
  Rng rng(11);
  TermGenConfig cfg;
  cfg.variables = {"x", "y"};
  for (int i = 0; i < 50; ++i) {
    Term t = random_term(rng, cfg);
    Term img = random_term(rng, cfg);
    Term out = substitute(t, {{"x", img}});
    auto fv_t = free_vars(t);
    auto expect = fv_t;
    expect.erase("x");
    if (fv_t.count("x"))
      for (const auto& v : free_vars(img)) expect.insert(v);
    CHECK(free_vars(out) == expect);
  }
}

TEST_CASE("alpha-equal inputs substitute alpha-equally") {
  Term a = mu("x", disj(var("x"), var("y")));
  Term b = mu("w", disj(var("w"), var("y")));
  REQUIRE(alpha_equal(a, b));
  Term sa = substitute(a, {{"y", gen("p")}});
  Term sb = substitute(b, {{"y", gen("p")}});
  CHECK(alpha_equal(sa, sb));
}

TEST_CASE("classification") {
  CHECK(classify(mu("x", disj(gen("p"), dia("a", var("x"))))) == Fragment::Sigma1);
  CHECK(classify(nu("x", conj(gen("p"), box("a", var("x"))))) == Fragment::Pi1);
  // Meets of both classes compose.
  Term compt = conj(nu("y", conj(gen("p"), box("a", var("y")))),
                    mu("x", disj(gen("q"), dia("a", var("x")))));
  CHECK(classify(compt) == Fragment::CompSigma1Pi1);

  Term general =
      mu("x", disj(gen("p"), dia("a", nu("y", conj(var("x"), box("a", var("y")))))));
  // The inner greatest fixed point holds the outer bound variable, so no
  // cut is available anywhere; neither grammar parses it.
  CHECK(free_vars(nu("y", conj(var("x"), box("a", var("y"))))).count("x") == 1);
  CHECK(classify(general) == Fragment::General);
}

TEST_CASE("sigma1 subterms in fixed-point position stay sigma1") {
  Rng rng(5);
  TermGenConfig cfg;
  for (int i = 0; i < 60; ++i) {
    Term t = random_sigma1_term(rng, cfg);
    if (classify(t) != Fragment::Sigma1) continue;
    std::function<void(const Term&)> walk = [&](const Term& s) {
      if (s->kind == Kind::Mu) CHECK(classify(s) == Fragment::Sigma1);
      if (s->lhs) walk(s->lhs);
      if (s->rhs) walk(s->rhs);
    };
    walk(t);
  }
}

TEST_CASE("Fischer-Ladner closure examples") {
  CHECK(fl_closure(gen("p")).size() == 1);
  TermSet d = fl_closure(dia("a", gen("p")));
  CHECK(d.size() == 2);
  CHECK(d.contains(gen("p")));

  Term star = mu("x", disj(gen("p"), dia("a", var("x"))));
  TermSet fl = fl_closure(star);
  CHECK(fl.size() == 4);
  CHECK(fl.contains(star));
  CHECK(fl.contains(disj(gen("p"), dia("a", star))));
  CHECK(fl.contains(gen("p")));
  CHECK(fl.contains(dia("a", star)));
}

TEST_CASE("closure is closed under subterms and unfolding") {
  Rng rng(23);
  TermGenConfig cfg;
  cfg.max_depth = 3;
  for (int i = 0; i < 40; ++i) {
    Term t = random_term(rng, cfg);
    TermSet fl = fl_closure(t);
    for (const auto& s : fl.items()) {
      switch (s->kind) {
        case Kind::And:
        case Kind::Or:
          CHECK(fl.contains(s->lhs));
          CHECK(fl.contains(s->rhs));
          break;
        case Kind::Neg:
        case Kind::Dia:
        case Kind::Box:
          CHECK(fl.contains(s->lhs));
          break;
        case Kind::Mu:
        case Kind::Nu:
          CHECK(fl.contains(unfold(s)));
          break;
        default:
          break;
      }
    }
    // Linear bound in the term size.
    std::function<int(const Term&)> size = [&](const Term& s) {
      return 1 + (s->lhs ? size(s->lhs) : 0) + (s->rhs ? size(s->rhs) : 0);
    };
    CHECK(int(fl.size()) <= 2 * size(t));
  }
}

TEST_CASE("guardedness") {
  CHECK(is_guarded(mu("x", dia("a", var("x")))));
  CHECK(!is_guarded(mu("x", disj(var("x"), dia("a", var("x"))))));
  Term g = guard(mu("x", disj(var("x"), gen("p"))));
  CHECK(alpha_equal(g, mu("x", gen("p"))));
  CHECK(is_guarded(g));
}

TEST_CASE("guard preserves evaluation on small models") {
  Term t = mu("x", disj(var("x"), gen("p")));
  CHECK(eval_equal_small(t, guard(t), 2));
  // A nested unguarded occurrence must be unfolded out.
  Term nested = mu("y", mu("x", disj(var("y"), dia("a", var("x")))));
  Term g = guard(nested);
  CHECK(is_guarded(g));
  CHECK(eval_equal_small(nested, g, 2));
  // Greatest fixed points dually.
  Term nut = nu("x", conj(var("x"), gen("p")));
  Term gn = guard(nut);
  CHECK(is_guarded(gn));
  CHECK(eval_equal_small(nut, gn, 2));
}

TEST_CASE("unfold") {
  Term t = mu("x", dia("a", var("x")));
  CHECK(alpha_equal(unfold(t), dia("a", t)));
  Term star = mu("x", disj(gen("p"), dia("a", var("x"))));
  CHECK(alpha_equal(unfold(star), disj(gen("p"), dia("a", star))));
  CHECK_THROWS_AS(unfold(gen("p")), std::invalid_argument);
}

TEST_CASE("arrow terms") {
  CHECK(alpha_equal(arrow("a", {}), box("a", bot())));
  CHECK(alpha_equal(arrow("a", {var("x")}),
                    conj(box("a", var("x")), dia("a", var("x")))));
  SpconSpec s;
  s.literals = {{"p", false, false}};
  s.blocks = {{"a", {"x", "y"}}};
  Term sp = spcon(s);
  Term expect = conj(gen("p"), conj(conj(box("a", disj(var("x"), var("y"))),
                                         dia("a", var("x"))),
                                    dia("a", var("y"))));
  CHECK(alpha_equal(sp, expect));
  SpconSpec bad;
  bad.blocks = {{"a", {"x"}}, {"b", {"x"}}};
  CHECK_THROWS_AS(spcon(bad), std::invalid_argument);
}

TEST_CASE("modal cnf examples") {
  auto cs = modal_cnf(disj(neg(gen("p")), dia("a", gen("q"))));
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].literals.count({"p", true, false}) == 1);
  REQUIRE(cs[0].dia_part.count("a") == 1);
  CHECK(alpha_equal(cs[0].dia_part.at("a"), gen("q")));

  auto cs2 = modal_cnf(conj(gen("p"), box("a", gen("q"))));
  REQUIRE(cs2.size() == 2);
  bool has_lit = false, has_box = false;
  for (const auto& c : cs2) {
    if (c.literals.count({"p", false, false}) && c.box_part.empty()) has_lit = true;
    if (c.box_part.count("a") && c.literals.empty()) has_box = true;
  }
  CHECK(has_lit);
  CHECK(has_box);

  // One unfolding exposes the first modal level of a fixed point.
  Term star = mu("y", disj(gen("p"), dia("a", var("y"))));
  auto cs3 = modal_cnf(star);
  REQUIRE(cs3.size() == 1);
  CHECK(cs3[0].literals.count({"p", false, false}) == 1);
  REQUIRE(cs3[0].dia_part.count("a") == 1);
  CHECK(alpha_equal(cs3[0].dia_part.at("a"), star));
}

TEST_CASE("clause meet equals the source term") {
  Rng rng(31);
  TermGenConfig cfg;
  cfg.max_depth = 3;
  for (int i = 0; i < 40; ++i) {
    Term t = random_term(rng, cfg);
    std::vector<Term> parts;
    for (const auto& c : modal_cnf(t)) parts.push_back(c.to_term());
    Term meet = conj_of(parts);
    ModelBounds mb;
    mb.max_states = 4;
    KripkeModel m = random_model(rng(), mb);
    CHECK(eval(m, t) == eval(m, meet));
  }
}

TEST_CASE("clause truth detection is syntactic") {
  Clause c;
  c.literals.insert({"p", false, false});
  c.literals.insert({"p", true, false});
  CHECK(c.syntactically_top());
  Clause d;
  d.literals.insert({"p", false, false});
  CHECK(!d.syntactically_top());
}

TEST_CASE("well-formedness and positivity") {
  CHECK(positive_in(disj(gen("p"), var("x")), "x"));
  CHECK(!positive_in(neg(var("x")), "x"));
  std::string why;
  CHECK(!well_formed(mu("x", neg(var("x"))), &why));
  CHECK(why.find("x") != std::string::npos);
  CHECK(well_formed(mu("x", neg(neg(var("x"))))));
}

TEST_CASE("eval agreement between a term and its normal forms") {
  Rng rng(47);
  TermGenConfig cfg;
  cfg.max_depth = 4;
  KripkeModel m = m1();
  for (int i = 0; i < 50; ++i) {
    Term t = random_term(rng, cfg);
    Elem base = eval(m, t);
    CHECK(eval(m, nnf(t)) == base);
    CHECK(eval(m, guard(t)) == base);
  }
}
