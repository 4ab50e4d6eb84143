#ifndef MUALG_COMPLETION_HPP_
#define MUALG_COMPLETION_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mualg/kripke.hpp"

namespace mualg {

// Finite poset over at most 64 named elements; the order is kept as
// down-set bitmasks.
struct FinitePoset {
  std::vector<std::string> names;
  std::vector<std::uint64_t> below;  // below[i] = { j | j <= i }, including i

  int size() const { return int(names.size()); }
  bool leq(int a, int b) const { return (below[b] >> a) & 1; }
  void validate() const;  // reflexive, antisymmetric, transitive

  // Builds from cover-style pairs, closing transitively.
  static FinitePoset from_pairs(
      const std::vector<std::string>& names,
      const std::vector<std::pair<std::string, std::string>>& leq_pairs);
};

bool poset_is_lattice(const FinitePoset& p);

// Profile-hash comparison with exhaustive permutation fallback on small
// carriers.
bool poset_isomorphic(const FinitePoset& a, const FinitePoset& b);

// Dedekind-MacNeille completion: cuts represented by their lower sets.
struct CutLattice {
  FinitePoset base;
  std::vector<std::uint64_t> cuts;  // sorted lower-set masks
  int bottom = 0, top = 0;

  int size() const { return int(cuts.size()); }
  bool leq(int a, int b) const { return (cuts[a] & ~cuts[b]) == 0; }
  int meet(int a, int b) const;
  int join(int a, int b) const;
  int iota(int elem) const;              // index of the principal cut
  int index_of(std::uint64_t lower) const;  // -1 when not a cut
  // Largest base element of a cut, -1 when the cut has none (proper cuts of
  // non-lattices).
  int max_element(int cut) const;
  FinitePoset as_poset() const;
};

// Throws std::invalid_argument on poset axiom violations or oversize input.
CutLattice dm_completion(const FinitePoset& p, int max_elements = 4096);

// Extension of a join-preserving endo-map along the completion, with its
// right adjoint.
struct ExtendedAdjoint {
  std::vector<int> f_base;  // on base elements
  std::vector<int> f_ext;   // on cuts
  std::vector<int> g_ext;   // right adjoint on cuts
};

bool join_preserving(const FinitePoset& lattice, const std::vector<int>& f);

// Requires the base poset to be a lattice and f to preserve all joins;
// throws std::invalid_argument otherwise.
ExtendedAdjoint extend_left_adjoint(const FinitePoset& lattice,
                                    const std::vector<int>& f,
                                    const CutLattice& c);

// Modal structure on the completion of a model's powerset algebra: each
// diamond extended as a left adjoint, the embedding a modal-algebra
// morphism.
struct CompletedModalAlgebra {
  KripkeModel model;
  FinitePoset carrier;  // powerset as a poset; element index = subset mask
  CutLattice lat;
  std::map<std::string, ExtendedAdjoint> dia_ext;

  int iota(Elem z) const;
  int eval(const Term& t, const std::map<std::string, int>& env = {}) const;
};

CompletedModalAlgebra complete_modal_structure(const KripkeModel& m);

enum class PreservationVerdict { Preserved, HypothesisFailure, Failed };

struct PreservationReport {
  PreservationVerdict verdict;
  std::string detail;
  std::size_t stages = 0;
};

// Stage-by-stage check that the embedding carries the approximant chain of
// body (in the powerset algebra) onto the chain computed in the completion.
PreservationReport preservation_check(const KripkeModel& m,
                                      const CompletedModalAlgebra& c,
                                      const Term& body, const std::string& v,
                                      const Env& env = {});

// Raw form over explicit step tables: fL on base elements, fC on cuts.
// Reports HypothesisFailure when iota does not intertwine the two steps.
PreservationReport preservation_check_steps(const FinitePoset& lattice,
                                            const CutLattice& c,
                                            const std::vector<int>& fL,
                                            const std::vector<int>& fC);

}  // namespace mualg

#endif  // MUALG_COMPLETION_HPP_
