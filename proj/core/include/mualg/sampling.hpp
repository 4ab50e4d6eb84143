#ifndef MUALG_SAMPLING_HPP_
#define MUALG_SAMPLING_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "mualg/completion.hpp"
#include "mualg/kripke.hpp"
#include "mualg/systems.hpp"
#include "mualg/term.hpp"

namespace mualg {

using Rng = std::mt19937_64;

struct TermGenConfig {
  int max_depth = 4;
  std::vector<std::string> actions{"a"};
  std::vector<std::string> generators{"p", "q"};
  std::vector<std::string> variables{};  // free variables usable as leaves
  bool allow_binders = true;
  bool sigma1_only = false;  // no greatest fixed points
};

// Negation normal form by construction; binder-bound variables stay
// positive.
Term random_term(Rng& rng, const TermGenConfig& cfg);
Term random_sigma1_term(Rng& rng, TermGenConfig cfg);

struct SystemGenConfig {
  int num_bound = 2;
  int term_depth = 3;
  std::vector<std::string> actions{"a"};
  std::vector<std::string> generators{"p", "q"};
  std::vector<std::string> params{};
};

// Binder-free right-hand sides, positive in the bound variables.
System random_system(Rng& rng, const SystemGenConfig& cfg);
// Simple-class right-hand sides; disjunctive=true restricts arrow operands
// to joins of variables.
System random_simple_system(Rng& rng, const SystemGenConfig& cfg,
                            bool disjunctive = false);

Clause random_clause(Rng& rng, const std::vector<std::string>& actions,
                     const std::vector<std::string>& generators);
SpconSpec random_spcon_spec(Rng& rng, const std::vector<std::string>& actions,
                            const std::vector<std::string>& generators);

FinitePoset random_poset(Rng& rng, int max_elems);
// All posets on n labeled points, deduplicated up to isomorphism.
std::vector<FinitePoset> posets_up_to_iso(int n);

// Size-bounded closed term enumeration within a fragment (fixed signature:
// one generator p, one action a).
std::vector<Term> enumerate_fragment_terms(Fragment frag, int max_depth);

}  // namespace mualg

#endif  // MUALG_SAMPLING_HPP_
