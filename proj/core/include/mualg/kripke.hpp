#ifndef MUALG_KRIPKE_HPP_
#define MUALG_KRIPKE_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mualg/term.hpp"

namespace mualg {

// Element of the powerset algebra of a finite Kripke frame: a state subset
// as a bitmask.  Models are capped at 64 states; the tooling stays far
// below that.
using Elem = std::uint64_t;

struct KripkeModel {
  int n = 0;                                       // state count
  std::vector<std::string> state_names;            // defaults s0, s1, ...
  std::vector<std::string> actions;                // declared alphabet
  std::map<std::string, std::vector<Elem>> succ;   // action -> succ mask per state
  std::map<std::string, Elem> val;                 // generator -> state subset

  Elem universe() const { return n == 64 ? ~Elem(0) : ((Elem(1) << n) - 1); }
  Elem complement(Elem z) const { return universe() & ~z; }
  bool has_action(const std::string& a) const { return succ.count(a) > 0; }

  Elem eval_dia(const std::string& action, Elem z) const;
  Elem eval_box(const std::string& action, Elem z) const;
  // Right adjoint of eval_dia: largest z with <a>z below the argument.
  Elem dia_radj(const std::string& action, Elem m) const;

  void add_edge(const std::string& action, int from, int to);
  static KripkeModel make(int n, const std::vector<std::string>& actions,
                          const std::vector<std::pair<std::string, std::vector<std::pair<int, int>>>>& edges,
                          const std::map<std::string, std::vector<int>>& valuation);
};

using Env = std::map<std::string, Elem>;

// Standard Kripke semantics; mu/nu by iteration to stabilization.
// Throws std::invalid_argument on unbound variables / unknown actions.
Elem eval(const KripkeModel& m, const Term& t, const Env& env = {});

struct ApproximantTrace {
  std::vector<Elem> entries;  // f^0(bot), f^1(bot), ..., with the repeat
  std::size_t stab_index = 0; // least i with entries[i] == entries[i+1]
  Elem value() const { return entries.empty() ? 0 : entries.back(); }
};

ApproximantTrace lfp_iterate(const KripkeModel& m, const Term& body,
                             const std::string& v, const Env& env = {});
ApproximantTrace gfp_iterate(const KripkeModel& m, const Term& body,
                             const std::string& v, const Env& env = {});

std::vector<Elem> atoms(const KripkeModel& m);

// Two-valued Boolean character picked from an atom below y.
struct Character {
  int atom_state = -1;
  bool operator()(Elem z) const { return (z >> atom_state) & 1; }
};
// Least atom below y; throws on y = bot.
Character char_hom(const KripkeModel& m, Elem y);

struct ProductElem {
  Elem first = 0;
  bool second = false;
  bool operator==(const ProductElem& o) const {
    return first == o.first && second == o.second;
  }
  bool operator<(const ProductElem& o) const {
    return first != o.first ? first < o.first : second < o.second;
  }
};

// The product algebra A x 2 with diamonds (z, w) |-> (<a>z, chi_a(z)); the
// characters are joins of atom characters below the supplied witnesses.
class TwoProductAlgebra {
 public:
  TwoProductAlgebra(const KripkeModel& m,
                    const std::map<std::string, std::vector<Elem>>& ys);

  const KripkeModel& base() const { return *model_; }
  bool chi(const std::string& action, Elem z) const;

  ProductElem top_elem() const { return {model_->universe(), true}; }
  ProductElem bot_elem() const { return {0, false}; }
  ProductElem meet(ProductElem a, ProductElem b) const;
  ProductElem join(ProductElem a, ProductElem b) const;
  ProductElem negate(ProductElem a) const;
  ProductElem dia(const std::string& action, ProductElem a) const;
  ProductElem box(const std::string& action, ProductElem a) const;

  // gen_bit assigns the second coordinate of each generator's image; absent
  // generators default to false.
  ProductElem eval(const Term& t, const std::map<std::string, ProductElem>& env,
                   const std::map<std::string, bool>& gen_bit) const;

 private:
  const KripkeModel* model_;
  std::map<std::string, std::vector<Character>> chars_;
};

TwoProductAlgebra product_with_two(const KripkeModel& m,
                                   const std::map<std::string, std::vector<Elem>>& ys);

struct WhitmanReport {
  enum class Kind { LiteralClash, BottomWitness, Certificate };
  Kind kind;
  std::string clash_atom;       // LiteralClash
  std::string witness_action;   // BottomWitness
  Term witness_term;            // BottomWitness
  bool second_coordinate = false;  // Certificate
  Elem first_coordinate = 0;       // Certificate
};

// Splits a joint inconsistency of a literal set and per-action diamond/box
// witnesses, or produces the A x 2 certificate showing none exists.
WhitmanReport whitman_check(const std::vector<Literal>& lambda,
                            const std::map<std::string, std::vector<Term>>& ys,
                            const KripkeModel& m);

// ---------------------------------------------------------------------------
// Bounded refutation of term inequalities.

struct SamplerConfig {
  int exhaustive_max_states = 3;
  long exhaustive_budget = 200000;  // cap on enumerated models
  int random_models = 200;
  int random_max_states = 8;
  std::uint64_t seed = 0;
  // When empty, inferred from the terms under test.
  std::vector<std::string> actions;
  std::vector<std::string> generators;
};

struct LeqVerdict {
  bool refuted = false;
  KripkeModel counter_model;  // valid when refuted
  int counter_state = -1;
  long samples = 0;
};

// Searches for a model and state witnessing lhs not<= rhs.  An unrefuted
// verdict is evidence at this bound only, never a proof.
LeqVerdict check_leq(const Term& lhs, const Term& rhs, const SamplerConfig& cfg);

// Exhaustive model enumeration helper shared by check_leq and the suites.
// Calls fn on every model with exactly `states` states over the given
// signature until fn returns false or the shape is exhausted; returns the
// number of models visited.
long enumerate_models(int states, const std::vector<std::string>& actions,
                      const std::vector<std::string>& generators,
                      const std::function<bool(const KripkeModel&)>& fn);

struct ModelBounds {
  int min_states = 1;
  int max_states = 8;
  int num_actions = 1;
  int num_generators = 2;
};

// Deterministic in the seed, bit-identical across runs.
KripkeModel random_model(std::uint64_t seed, const ModelBounds& bounds);

// ---------------------------------------------------------------------------
// Brute-force cover oracle on the powerset lattice.

// Maximal antichain of { x in L^arity | f(x) <= target } by full enumeration.
// Throws when the carrier exceeds 2^12 per coordinate.
std::vector<std::vector<Elem>> semantic_cover_oracle(
    const std::function<std::vector<Elem>(const std::vector<Elem>&)>& f,
    int arity, const KripkeModel& m, const std::vector<Elem>& target);

std::vector<std::vector<Elem>> semantic_cover_oracle(
    const std::function<Elem(const std::vector<Elem>&)>& f, int arity,
    const KripkeModel& m, Elem target);

// Antichain utilities over subset vectors (componentwise order).
bool vec_leq(const std::vector<Elem>& a, const std::vector<Elem>& b);
std::vector<std::vector<Elem>> prune_maximal(std::vector<std::vector<Elem>> vs);

}  // namespace mualg

#endif  // MUALG_KRIPKE_HPP_
