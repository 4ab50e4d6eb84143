#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mualg/counterexample.hpp"

using namespace mualg;

TEST_CASE("successor on the chain with a point at infinity") {
  CHECK(OrdElem::nat(3).succ() == OrdElem::nat(4));
  CHECK(OrdElem::om().succ() == OrdElem::om());
  CHECK(OrdElem::nat(3).leq(OrdElem::om()));
  CHECK(!OrdElem::om().leq(OrdElem::nat(3)));
}

TEST_CASE("the finite approximant chain is strictly increasing below omega") {
  OrdElem cur = OrdElem::nat(0);
  for (int i = 0; i < 200; ++i) {
    OrdElem next = cur.succ();
    CHECK(cur.leq(next));
    CHECK(!(next == cur));
    CHECK(!next.omega);
    cur = next;
  }
}

TEST_CASE("pointwise step on representatives") {
  CHECK(quot_sim(quot_apply_f(QuotSeq::constant(OrdElem::om())),
                 QuotSeq::constant(OrdElem::om())));
  for (int n = 1; n <= 10; ++n)
    CHECK(quot_sim(quot_apply_f(QuotSeq::shifted(n)), QuotSeq::shifted(n - 1)));
  // Advancing the head chain: strictly above, not equivalent.
  QuotSeq adv = quot_apply_f(QuotSeq::shifted(0));
  CHECK(quot_leq(QuotSeq::shifted(0), adv));
  CHECK(!quot_sim(adv, QuotSeq::shifted(0)));
  for (std::uint64_t i = 0; i < 20; ++i)
    CHECK(adv.at(i) == OrdElem::nat(i + 1));
}

TEST_CASE("quotient order on tail classes") {
  CHECK(quot_leq(QuotSeq::shifted(2), QuotSeq::shifted(1)));
  CHECK(!quot_leq(QuotSeq::shifted(1), QuotSeq::shifted(2)));
  CHECK(!quot_leq(QuotSeq::mu(), QuotSeq::shifted(0)));
  CHECK(quot_leq(QuotSeq::shifted(0), QuotSeq::mu()));
  CHECK(quot_leq(QuotSeq::bottom(), QuotSeq::shifted(5)));
  CHECK(quot_leq(QuotSeq::bottom(), QuotSeq::constant(OrdElem::nat(7))));
  CHECK(quot_leq(QuotSeq::bottom(), QuotSeq::mu()));
}

TEST_CASE("order antisymmetry induces the equivalence") {
  std::vector<QuotSeq> reps{QuotSeq::bottom(), QuotSeq::mu(), QuotSeq::shifted(0),
                            QuotSeq::shifted(3), QuotSeq::constant(OrdElem::nat(2))};
  for (const auto& a : reps)
    for (const auto& b : reps) {
      bool both = quot_leq(a, b) && quot_leq(b, a);
      CHECK(both == quot_sim(a, b));
    }
}

TEST_CASE("finite overrides never disturb the class") {
  QuotSeq a = QuotSeq::shifted(2);
  QuotSeq b = QuotSeq::shifted(2);
  b.overrides[0] = OrdElem::nat(9);
  b.overrides[5] = OrdElem::om();
  CHECK(quot_sim(a, b));
  CHECK(quot_sim(quot_apply_f(a), quot_apply_f(b)));
  CHECK(quot_leq(a, b));
  CHECK(quot_leq(b, a));
}

TEST_CASE("representative step tracks every coordinate") {
  QuotSeq s = QuotSeq::shifted(3);
  QuotSeq fs = quot_apply_f(s);
  for (std::uint64_t i = 0; i < 12; ++i) CHECK(fs.at(i) == s.at(i).succ());
}

TEST_CASE("meets and joins on representatives") {
  QuotSeq m = quot_meet(QuotSeq::shifted(1), QuotSeq::shifted(4));
  CHECK(quot_sim(m, QuotSeq::shifted(4)));
  QuotSeq j = quot_join(QuotSeq::shifted(1), QuotSeq::shifted(4));
  CHECK(quot_sim(j, QuotSeq::shifted(1)));
  // Against constants: the meet truncates, the join absorbs.
  QuotSeq mc = quot_meet(QuotSeq::constant(OrdElem::nat(2)), QuotSeq::shifted(0));
  CHECK(quot_sim(mc, QuotSeq::constant(OrdElem::nat(2))));
  for (std::uint64_t i = 0; i < 2; ++i) CHECK(mc.at(i) == OrdElem::nat(i));
  QuotSeq jc = quot_join(QuotSeq::constant(OrdElem::nat(2)), QuotSeq::shifted(0));
  CHECK(quot_sim(jc, QuotSeq::shifted(0)));
  CHECK(quot_sim(quot_join(QuotSeq::mu(), QuotSeq::shifted(0)), QuotSeq::mu()));
}

TEST_CASE("blocking configuration certified") {
  auto rep = wrongconf_verify(100);
  CHECK(rep.f_step_ok);
  CHECK(rep.chain_decreasing);
  CHECK(rep.mu_not_below_phi0);
  CHECK(rep.all_ok());
  CHECK(rep.text.find("ok") != std::string::npos);
  CHECK(rep.text.find("VIOLATED") == std::string::npos);
}

TEST_CASE("lower-bound replays") {
  auto r0 = replay_lower_bound(QuotSeq::bottom());
  CHECK(r0.is_lower_bound);
  CHECK(r0.f_image_is_lower_bound);
  CHECK(!r0.mu_below_l);
  CHECK(!r0.contradiction);

  auto r1 = replay_lower_bound(QuotSeq::mu());
  CHECK(r1.mu_below_l);
  CHECK(r1.contradiction);
  CHECK(!r1.is_lower_bound);

  // Every constant below omega is a lower bound and stays one under f.
  auto r2 = replay_lower_bound(QuotSeq::constant(OrdElem::nat(41)));
  CHECK(r2.is_lower_bound);
  CHECK(r2.f_image_is_lower_bound);
  CHECK(!r2.contradiction);

  // A chain representative is never below the whole family.
  auto r3 = replay_lower_bound(QuotSeq::shifted(7));
  CHECK(!r3.is_lower_bound);
}

TEST_CASE("canonicalization drops tail-pattern overrides") {
  QuotSeq s = QuotSeq::shifted(2);
  s.overrides[5] = OrdElem::nat(3);  // equals the pattern at index 5
  s.overrides[0] = OrdElem::om();
  s.canonicalize();
  CHECK(s.overrides.size() == 1);
  CHECK(s.overrides.count(0) == 1);
}
