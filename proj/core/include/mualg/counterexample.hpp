#ifndef MUALG_COUNTEREXAMPLE_HPP_
#define MUALG_COUNTEREXAMPLE_HPP_

#include <cstdint>
#include <map>
#include <string>

namespace mualg {

// The chain omega+1 with f = successor: f(Nat k) = Nat (k+1), f(Omega) =
// Omega; the least prefixed point of f is Omega.
struct OrdElem {
  bool omega = false;
  std::uint64_t k = 0;

  static OrdElem nat(std::uint64_t n) { return {false, n}; }
  static OrdElem om() { return {true, 0}; }
  bool operator==(const OrdElem& o) const {
    return omega == o.omega && (omega || k == o.k);
  }
  bool leq(const OrdElem& o) const {
    if (o.omega) return true;
    if (omega) return false;
    return k <= o.k;
  }
  OrdElem succ() const { return omega ? *this : nat(k + 1); }
  OrdElem meet(const OrdElem& o) const { return leq(o) ? *this : o; }
  OrdElem join(const OrdElem& o) const { return leq(o) ? o : *this; }
  std::string show() const { return omega ? "w" : std::to_string(k); }
};

// Finitely represented element of the reduced power (omega+1)^omega /~,
// where ~ identifies sequences agreeing on all but finitely many
// coordinates.  Two tail shapes occur in the blocking configuration:
//   Const(a):    i |-> a
//   Shifted(n):  i |-> bot for i < n, f^(i-n)(bot) for i >= n   (n may be
//                negative: the chain advanced by -n steps).
// Finite overrides keep exact representatives under pointwise operations;
// they never affect the quotient order or ~.
struct QuotSeq {
  enum class Form { Const, Shifted } form = Form::Const;
  OrdElem value;   // Const
  std::int64_t shift = 0;  // Shifted
  std::map<std::uint64_t, OrdElem> overrides;

  static QuotSeq constant(OrdElem a) {
    QuotSeq s;
    s.form = Form::Const;
    s.value = a;
    return s;
  }
  static QuotSeq shifted(std::int64_t n) {
    QuotSeq s;
    s.form = Form::Shifted;
    s.shift = n;
    return s;
  }
  static QuotSeq bottom() { return constant(OrdElem::nat(0)); }
  static QuotSeq mu() { return constant(OrdElem::om()); }  // class of mu_x.f

  OrdElem at(std::uint64_t i) const;
  void canonicalize();  // drops overrides matching the tail pattern
  std::string show() const;
};

// ~-equivalence: same tail shape (overrides immaterial).
bool quot_sim(const QuotSeq& a, const QuotSeq& b);
// Quotient order: pointwise <= at all but finitely many coordinates.
bool quot_leq(const QuotSeq& a, const QuotSeq& b);

QuotSeq quot_apply_f(const QuotSeq& s);
QuotSeq quot_meet(const QuotSeq& a, const QuotSeq& b);
QuotSeq quot_join(const QuotSeq& a, const QuotSeq& b);

// Exact decision: is l below phi_n for every n?
bool lower_bound_of_all_phi(const QuotSeq& l);

struct WrongconfReport {
  bool f_step_ok = false;       // f(phi_n) ~ phi_{n-1} for 1 <= n <= n_max
  bool chain_decreasing = false;  // phi_{n+1} <= phi_n
  bool mu_not_below_phi0 = false;
  bool all_ok() const { return f_step_ok && chain_decreasing && mu_not_below_phi0; }
  std::string text;             // deterministic structured listing
};

// Certifies the blocking configuration on the reduced power and, when a
// candidate lower bound is supplied, replays the derivation around it.
WrongconfReport wrongconf_verify(std::uint64_t n_max);

struct LowerBoundReplay {
  bool is_lower_bound = false;  // l <= phi_n for all n, decided exactly
  bool f_image_is_lower_bound = false;
  bool mu_below_l = false;
  // mu <= l: assuming l bounds the chain forces mu <= phi_0, refuted above.
  bool contradiction = false;
  std::string text;
};
LowerBoundReplay replay_lower_bound(const QuotSeq& l);

}  // namespace mualg

#endif  // MUALG_COUNTEREXAMPLE_HPP_
