#ifndef MUALG_TERM_HPP_
#define MUALG_TERM_HPP_

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace mualg {

// Terms of the modal mu-calculus over a finite action alphabet.
// Immutable trees; share freely across threads.
enum class Kind {
  Gen,   // generator (free constant symbol)
  Var,   // variable (bindable / system variable)
  Top,
  Bot,
  And,
  Or,
  Neg,
  Dia,   // <a> t
  Box,   // [a] t
  Mu,    // mu x . t
  Nu,    // nu x . t
};

class TermNode;
using Term = std::shared_ptr<const TermNode>;

class TermNode {
 public:
  Kind kind;
  std::string name;  // Gen/Var: identifier; Dia/Box: action; Mu/Nu: bound variable
  Term lhs;          // And/Or: left; Neg/Dia/Box/Mu/Nu: body
  Term rhs;          // And/Or: right

  TermNode(Kind k, std::string n, Term l, Term r)
      : kind(k), name(std::move(n)), lhs(std::move(l)), rhs(std::move(r)) {}
};

Term gen(std::string name);
Term var(std::string name);
Term top();
Term bot();
Term conj(Term a, Term b);
Term disj(Term a, Term b);
Term neg(Term a);
Term dia(std::string action, Term body);
Term box(std::string action, Term body);
Term mu(std::string v, Term body);
Term nu(std::string v, Term body);

// Empty meet is Top, empty join is Bot; folds left-associatively.
Term conj_of(const std::vector<Term>& ts);
Term disj_of(const std::vector<Term>& ts);

bool is_atom(const Term& t);  // Gen/Var/Top/Bot

int term_compare(const Term& a, const Term& b);  // structural total order
bool structural_equal(const Term& a, const Term& b);

// Canonical bound-variable renaming (positional); alpha-equivalent terms map
// to structurally equal ones.
Term canonical(const Term& t);
bool alpha_equal(const Term& a, const Term& b);

std::set<std::string> free_vars(const Term& t);
std::set<std::string> generators_of(const Term& t);
std::set<std::string> actions_of(const Term& t);

// v occurs under an even number of negations everywhere in t.
bool positive_in(const Term& t, const std::string& v);
// All mu/nu binders satisfy positivity for their own variable.
bool well_formed(const Term& t, std::string* why = nullptr);

struct TermLess {
  bool operator()(const Term& a, const Term& b) const {
    return term_compare(a, b) < 0;
  }
};

// Finite set of terms modulo alpha-equivalence.  Members are stored
// canonicalized, so iteration order is deterministic.
class TermSet {
 public:
  TermSet() = default;
  explicit TermSet(const std::vector<Term>& ts);

  bool insert(const Term& t);  // true if newly inserted
  bool contains(const Term& t) const;
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::set<Term, TermLess>& items() const { return items_; }

 private:
  std::set<Term, TermLess> items_;
};

// Capture-avoiding simultaneous substitution of terms for free variables.
Term substitute(const Term& t, const std::map<std::string, Term>& binding);

// Negation normal form: negations pushed onto generators (and free
// variables), binders dualized.  Linear in the size of the input.
Term nnf(const Term& t);

enum class Fragment { Sigma1, Pi1, CompSigma1Pi1, General };
// Smallest applicable fragment tag; expects nnf input.
Fragment classify(const Term& t);
const char* fragment_name(Fragment f);

// Fischer-Ladner closure: contains t, closed under immediate subterms and
// one-step unfolding of fixed-point members.
TermSet fl_closure(const Term& t);

// Every bound-variable occurrence sits under a modal operator inside its
// binder's scope.
bool is_guarded(const Term& t);
// Guardedness of the free variables `xs` within t (system right-hand sides).
bool is_guarded_for(const Term& t, const std::set<std::string>& xs);

// Semantics-preserving transformation to a guarded term; expects nnf.
Term guard(const Term& t);

// Distributive normal form of the boolean skeleton (leaves are the maximal
// non-lattice subterms).  disjunctive=true lists meets, false lists joins.
// Groups come back canonicalized with units collapsed, duplicates removed
// and supersets absorbed, so the blowup of nested distributions stays
// proportional to the distinct leaves.
std::vector<std::vector<Term>> skeleton_groups(const Term& t, bool disjunctive);

// Unit-absorbing structural simplification of the lattice connectives.
Term simplify_lattice(const Term& t);

// One-step unfolding of a fixed-point term; throws std::invalid_argument
// on anything else.
Term unfold(const Term& t);

// arrow(a, X) = [a] \/X  /\  /\_{x in X} <a> x      (empty X: [a] F)
Term arrow(const std::string& action, const std::vector<Term>& xs);

struct Literal {
  std::string atom;
  bool negated = false;
  bool is_var = false;  // variable literal rather than generator

  Term to_term() const;
  bool operator<(const Literal& o) const {
    if (atom != o.atom) return atom < o.atom;
    if (negated != o.negated) return negated < o.negated;
    return is_var < o.is_var;
  }
  bool operator==(const Literal& o) const {
    return atom == o.atom && negated == o.negated && is_var == o.is_var;
  }
};

// Special conjunction data: a literal meet and one arrow block per action,
// with pairwise disjoint variable sets.
struct SpconSpec {
  std::vector<Literal> literals;  // Lambda
  std::vector<std::pair<std::string, std::vector<std::string>>> blocks;  // action -> X_sigma

  std::vector<std::string> coordinates() const;  // concatenated X_sigma, block order
  void validate() const;                         // throws on overlap / non-generator literals
};

// spcon(s) = /\Lambda /\ /\_{sigma} arrow(sigma, X_sigma)
Term spcon(const SpconSpec& s);

// Clause of the modal conjunctive normal form:
//   \/Gamma \/ \/_tau ( <tau> d_tau \/ \/_{e in E_tau} [tau] e )
struct Clause {
  bool has_top = false;
  std::set<Literal> literals;                       // Gamma
  std::map<std::string, Term> dia_part;             // merged diamond body per action
  std::map<std::string, std::vector<Term>> box_part;  // E_tau, canonically sorted

  Term to_term() const;
  // Syntactic truth test: Top member or a complementary literal pair.
  bool syntactically_top() const;
};

// Meet of the returned clauses equals t in every modal mu-algebra.  Guards,
// unfolds each top-level fixed point once to expose the first modal level,
// then distributes.  Expects nnf.
std::vector<Clause> modal_cnf(const Term& t);

}  // namespace mualg

#endif  // MUALG_TERM_HPP_
