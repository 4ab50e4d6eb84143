#ifndef MUALG_COVERS_HPP_
#define MUALG_COVERS_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mualg/kripke.hpp"
#include "mualg/term.hpp"

namespace mualg {

// Composable description of a monotone map built from the cover-calculus
// primitives.  Maps have an input arity and an output dimension (coarity);
// scalar primitives have coarity 1.
struct Adjoint;
using AdjointPtr = std::shared_ptr<const Adjoint>;

struct Adjoint {
  enum class Op {
    Identity,   // L -> L
    Proj,       // L^n -> L, coordinate `index`
    Pair,       // <f_1,...,f_k>, shared input space
    Compose,    // parts[0] after parts[1]
    Join,       // L^k -> L
    Const,      // constant `constant`, any arity
    ConstMeet,  // x |-> k /\ x
    Dia,        // <action>
    Spcon,      // special conjunction, coordinates = spec.coordinates()
    Mu,         // parametrized least fixed point of parts[0] over bound_coords
  };
  Op op;
  int arity = 1;
  int coarity = 1;
  int index = 0;
  std::vector<AdjointPtr> parts;
  Term constant;
  std::string action;
  SpconSpec spec;
  std::vector<int> bound_coords;
};

namespace adj {
AdjointPtr identity();
AdjointPtr proj(int index, int arity);
AdjointPtr pair_of(const std::vector<AdjointPtr>& parts);
AdjointPtr compose(const AdjointPtr& outer, const AdjointPtr& inner);
AdjointPtr join(int k);
AdjointPtr constant(const Term& k, int arity);
AdjointPtr const_meet(const Term& k);
AdjointPtr dia(const std::string& action);
AdjointPtr spcon_map(const SpconSpec& spec);
AdjointPtr mu(const AdjointPtr& inner, const std::vector<int>& bound_coords);
std::string describe(const AdjointPtr& d);
}  // namespace adj

// ---------------------------------------------------------------------------
// Term-level adjoint machinery.

// Per-clause right adjoint of a diamond: T on syntactically-true clauses,
// the clause's diamond body otherwise (F when absent); meets across clauses.
Term dia_right_adjoint(const std::string& action,
                       const std::vector<Clause>& clauses);

// Covering vectors of a special conjunction against one clause, coordinates
// in spec.coordinates() order: the whole-block vectors c_{sigma,e} and the
// single-slot vectors c_{sigma,y}; {T,...,T} when the clause is true or the
// literal meet falls under the clause's literal join syntactically.
std::vector<std::vector<Term>> spcon_cover(const SpconSpec& spec, const Clause& b);

// Sound under-approximation of the free-algebra order used for pruning on
// the syntactic backend; never claims an order that could fail.
bool syntactic_leq_approx(const Term& a, const Term& b);

// Iterated diamond right adjoint b, r(b), r(r(b)), ... until a repeat.
struct KleeneChain {
  std::vector<Term> chain;   // canonical forms, first repeat excluded
  bool stabilized = false;
  std::size_t steps = 0;     // index at which the repeat occurred
  std::size_t fl_bound = 0;  // |FL closure| of the start term
};
KleeneChain dia_radj_chain(const Term& b, const std::string& action, int budget);

// ---------------------------------------------------------------------------
// Cover engines.

template <typename E>
struct CoverGraphT {
  struct Edge {
    int src;
    std::vector<E> label;  // parameter part of the cover
    int dst;
  };
  std::vector<std::vector<E>> vertices;  // bound-part vectors; root at 0
  std::vector<Edge> edges;
  bool closed = false;
};

template <typename E>
struct ReachResult {
  std::vector<E> states;
  bool closed = false;
};

template <typename E>
struct SupResult {
  std::vector<std::vector<E>> entries;  // approximants of the bound block
  std::size_t stab_index = 0;
  int graph_vertices = 0;  // cover graph rooted at the value
  // For every scalar target with a closed cover graph: the approximant
  // prefix of the graph's length below the target forces the value below it.
  bool pigeonhole_ok = false;
};

// Cover computation over the powerset algebra of a model: exact order,
// exact covers for the calculus primitives and for parametrized fixed
// points via pans of the cover graph.
class LatticeCovers {
 public:
  explicit LatticeCovers(const KripkeModel& m, int budget = 4096);

  const KripkeModel& model() const { return *model_; }
  int budget() const { return budget_; }

  std::vector<Elem> apply(const AdjointPtr& d, const std::vector<Elem>& in) const;
  std::vector<std::vector<Elem>> cover(const AdjointPtr& d,
                                       const std::vector<Elem>& target) const;
  CoverGraphT<Elem> cover_graph(const AdjointPtr& inner,
                                const std::vector<int>& bound_coords,
                                const std::vector<Elem>& root, int budget) const;
  std::vector<std::vector<Elem>> mu_cover(const AdjointPtr& mu_d,
                                          const std::vector<Elem>& target) const;
  ReachResult<Elem> automaton_reach(const std::vector<AdjointPtr>& schemes,
                                    const std::vector<Elem>& seeds,
                                    int budget) const;
  SupResult<Elem> constructive_sup(const AdjointPtr& mu_d,
                                   const std::vector<Elem>& params,
                                   int budget) const;

 private:
  const KripkeModel* model_;
  int budget_;
};

// Cover computation on terms: order decisions are the syntactic
// approximation, so produced sets are sound while pruning and completeness
// are approximate.
class SyntacticCovers {
 public:
  explicit SyntacticCovers(int budget = 256);

  std::vector<Term> apply(const AdjointPtr& d, const std::vector<Term>& in) const;
  std::vector<std::vector<Term>> cover(const AdjointPtr& d,
                                       const std::vector<Term>& target) const;
  CoverGraphT<Term> cover_graph(const AdjointPtr& inner,
                                const std::vector<int>& bound_coords,
                                const std::vector<Term>& root, int budget) const;
  std::vector<std::vector<Term>> mu_cover(const AdjointPtr& mu_d,
                                          const std::vector<Term>& target) const;
  ReachResult<Term> automaton_reach(const std::vector<AdjointPtr>& schemes,
                                    const std::vector<Term>& seeds,
                                    int budget) const;

 private:
  int budget_;
};

}  // namespace mualg

#endif  // MUALG_COVERS_HPP_
