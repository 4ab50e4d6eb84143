#ifndef MUALG_SYSTEMS_HPP_
#define MUALG_SYSTEMS_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mualg/kripke.hpp"
#include "mualg/term.hpp"

namespace mualg {

// Equation system F : A^X x A^Y -> A^X with term right-hand sides.
struct System {
  std::vector<std::string> bound;      // X, ordered
  std::vector<std::string> params;     // Y, ordered
  std::map<std::string, Term> equations;

  // dom(equations) = X, X and Y disjoint, every right-hand side positive in
  // the X variables; throws std::invalid_argument otherwise.
  void validate() const;
  std::set<std::string> bound_set() const;
};

struct SystemClass {
  bool elementary = false;
  bool simple = false;
  bool disjunctive_simple = false;
  bool guarded = false;
};

SystemClass classify_system(const System& s);

// Recognize an arrow term over variables: [a](x1 \/ ... \/ xk) /\ <a>x1 /\
// ... /\ <a>xk (k = 0: [a]F).  Returns action and operand list.
bool match_arrow(const Term& t, std::string* action, std::vector<Term>* operands);

using Solution = std::map<std::string, Elem>;

// Least solution by one-variable-at-a-time elimination (last bound variable
// first): the eliminated variable's equation becomes a unary fixed point
// substituted into the remaining equations.
Solution bekic_solve(const System& s, const KripkeModel& m, const Env& yenv = {});

struct VectorTrace {
  std::vector<std::vector<Elem>> entries;
  std::size_t stab_index = 0;
};

// Joint iteration from the bottom vector; the oracle for bekic_solve.
std::pair<Solution, VectorTrace> simultaneous_solve(const System& s,
                                                    const KripkeModel& m,
                                                    const Env& yenv = {});

// One step of the system map at a given X-vector.
std::vector<Elem> system_step(const System& s, const KripkeModel& m,
                              const Env& yenv, const std::vector<Elem>& x);

enum class GuardStage { Initial, LoopElimination, Substitution };

// Alternates loop elimination and unguarded-occurrence substitution until
// every bound variable is guarded in every right-hand side.
System guard_system(const System& s);
// All intermediate systems with the rewrite kind that produced each;
// front() is the input.
std::vector<std::pair<System, GuardStage>> guard_system_stages(const System& s);

// Hoists every modal-operator body into a fresh bound variable, rewrites
// modalities to arrow form and re-guards; the witness maps original bound
// variables into the enlarged set (identically).
struct UnravelResult {
  System system;  // simple
  std::map<std::string, std::string> witness;
};
UnravelResult unravel_to_simple(const System& s);

// Chains {F^k(bot)} and {G^k(bot)} mutually cofinal up to the given depth,
// projected through varmap (F-variable -> G-variable; identity if empty).
bool cofinal_check(const System& F, const System& G, const KripkeModel& m,
                   const Env& yenv, int depth,
                   const std::map<std::string, std::string>& varmap = {});

// Translation of a simple system over X to a disjunctive-simple system over
// the nonempty subsets of X.
struct PowersetTranslation {
  System source;
  System target;
  // Index i corresponds to subset mask i+1 over source.bound order.
  std::vector<std::string> subset_vars;
  std::vector<std::vector<std::string>> subset_members;

  std::vector<Elem> embed(const std::vector<Elem>& xvec) const;    // i: meets
  std::vector<Elem> project(const std::vector<Elem>& wvec) const;  // pi: singletons
};
PowersetTranslation powerset_translate(const System& s);

// Compilation of a Sigma1 term to an elementary system; generators are
// routed through fresh parameters valued at themselves.
struct CompiledSigma1 {
  System system;
  std::string designated;
  std::map<std::string, Term> literal_bindings;  // parameter -> literal term

  Env make_env(const KripkeModel& m, const Env& outer = {}) const;
};
CompiledSigma1 compile_sigma1(const Term& t);

// Approximant bookkeeping of the two-function fixed-point interleaving:
// (f_n, g_n) jointly iterated, (h_n, i_n) via the inner fixed point, and the
// word-indexed values connecting them, collected per level.
struct RegularHarnessTrace {
  std::vector<Elem> f_seq, g_seq, h_seq, i_seq;
  std::vector<std::vector<std::pair<Elem, Elem>>> level_pairs;  // (l_w, m_w)
  std::vector<Elem> level_join_l, level_join_m;
  int depth = 0;
  int width = 0;
};

struct HarnessVerdicts {
  bool chain_dominated = false;   // (f_n, g_n) <= (h_n, i_n) for all n
  bool level_joins_match = false; // h_n = \/ l_w and i_n = \/ m_w per level
  bool pairs_bounded = false;     // every (l_w, m_w) below some (f_N, g_N)
  bool all() const { return chain_dominated && level_joins_match && pairs_bounded; }
};

// f and g are terms over the two variables xname/yname.  width <= 0 picks
// the state count of the model (the powerset chain height).
std::pair<RegularHarnessTrace, HarnessVerdicts> regular_harness(
    const Term& f, const Term& g, const KripkeModel& m, int depth,
    int width = -1, const Env& env = {}, const std::string& xname = "x",
    const std::string& yname = "y");

}  // namespace mualg

#endif  // MUALG_SYSTEMS_HPP_
