#include "mualg/counterexample.hpp"

#include <algorithm>
#include <sstream>

namespace mualg {

namespace {

OrdElem pattern_at(const QuotSeq& s, std::uint64_t i) {
  if (s.form == QuotSeq::Form::Const) return s.value;
  std::int64_t d = std::int64_t(i) - s.shift;
  return d <= 0 ? OrdElem::nat(0) : OrdElem::nat(std::uint64_t(d));
}

std::uint64_t interesting_bound(const QuotSeq& a, const QuotSeq& b) {
  // Beyond this index both sequences follow their tail patterns and the
  // patterns' pointwise comparisons have settled.
  std::int64_t bound = 1;
  auto widen = [&](const QuotSeq& s) {
    if (s.form == QuotSeq::Form::Shifted)
      bound = std::max(bound, s.shift + 2);
    if (s.form == QuotSeq::Form::Const && !s.value.omega)
      bound = std::max<std::int64_t>(bound, std::int64_t(s.value.k) + 2);
    for (const auto& [i, v] : s.overrides)
      bound = std::max<std::int64_t>(bound, std::int64_t(i) + 2);
  };
  widen(a);
  widen(b);
  // Crossover of a constant against a shifted chain.
  auto cross = [&](const QuotSeq& c, const QuotSeq& sh) {
    if (c.form == QuotSeq::Form::Const && sh.form == QuotSeq::Form::Shifted &&
        !c.value.omega)
      bound = std::max<std::int64_t>(bound,
                                     sh.shift + std::int64_t(c.value.k) + 2);
  };
  cross(a, b);
  cross(b, a);
  return std::uint64_t(bound);
}

}  // namespace

OrdElem QuotSeq::at(std::uint64_t i) const {
  auto it = overrides.find(i);
  if (it != overrides.end()) return it->second;
  return pattern_at(*this, i);
}

void QuotSeq::canonicalize() {
  for (auto it = overrides.begin(); it != overrides.end();) {
    if (it->second == pattern_at(*this, it->first))
      it = overrides.erase(it);
    else
      ++it;
  }
}

std::string QuotSeq::show() const {
  std::ostringstream os;
  if (form == Form::Const)
    os << "const(" << value.show() << ")";
  else
    os << "phi[" << shift << "]";
  if (!overrides.empty()) {
    os << "{";
    bool first = true;
    for (const auto& [i, v] : overrides) {
      if (!first) os << ",";
      first = false;
      os << i << ":" << v.show();
    }
    os << "}";
  }
  return os.str();
}

bool quot_sim(const QuotSeq& a, const QuotSeq& b) {
  if (a.form != b.form) return false;  // tails differ at infinitely many points
  if (a.form == QuotSeq::Form::Const) return a.value == b.value;
  return a.shift == b.shift;
}

bool quot_leq(const QuotSeq& a, const QuotSeq& b) {
  // Only the tail patterns matter; finitely many coordinates are ignored.
  if (a.form == QuotSeq::Form::Const && b.form == QuotSeq::Form::Const)
    return a.value.leq(b.value);
  if (a.form == QuotSeq::Form::Const && b.form == QuotSeq::Form::Shifted)
    return !a.value.omega;  // Nat k <= i - n cofinitely; Omega never
  if (a.form == QuotSeq::Form::Shifted && b.form == QuotSeq::Form::Const)
    return b.value.omega;   // an unbounded chain fits below Omega only
  return b.shift <= a.shift;  // i - n <= i - m cofinitely iff m <= n
}

namespace {

QuotSeq pointwise(const QuotSeq& a, const QuotSeq& b, bool meet) {
  QuotSeq out;
  // Tail pattern of the result.
  if (a.form == QuotSeq::Form::Const && b.form == QuotSeq::Form::Const) {
    out = QuotSeq::constant(meet ? a.value.meet(b.value) : a.value.join(b.value));
  } else if (a.form == QuotSeq::Form::Shifted &&
             b.form == QuotSeq::Form::Shifted) {
    out = QuotSeq::shifted(meet ? std::max(a.shift, b.shift)
                                : std::min(a.shift, b.shift));
  } else {
    const QuotSeq& c = a.form == QuotSeq::Form::Const ? a : b;
    const QuotSeq& s = a.form == QuotSeq::Form::Const ? b : a;
    if (c.value.omega)
      out = meet ? QuotSeq::shifted(s.shift) : QuotSeq::constant(OrdElem::om());
    else
      out = meet ? QuotSeq::constant(c.value) : QuotSeq::shifted(s.shift);
  }
  std::uint64_t bound = interesting_bound(a, b);
  for (std::uint64_t i = 0; i < bound; ++i) {
    OrdElem v = meet ? a.at(i).meet(b.at(i)) : a.at(i).join(b.at(i));
    out.overrides[i] = v;
  }
  out.canonicalize();
  return out;
}

}  // namespace

QuotSeq quot_meet(const QuotSeq& a, const QuotSeq& b) {
  return pointwise(a, b, true);
}

QuotSeq quot_join(const QuotSeq& a, const QuotSeq& b) {
  return pointwise(a, b, false);
}

QuotSeq quot_apply_f(const QuotSeq& s) {
  QuotSeq out;
  if (s.form == QuotSeq::Form::Const)
    out = QuotSeq::constant(s.value.succ());
  else
    out = QuotSeq::shifted(s.shift - 1);
  std::uint64_t bound = interesting_bound(s, s);
  for (std::uint64_t i = 0; i < bound; ++i) out.overrides[i] = s.at(i).succ();
  out.canonicalize();
  return out;
}

bool lower_bound_of_all_phi(const QuotSeq& l) {
  // l <= phi_n for every n.  Constants below Omega always fit under the
  // unbounded tail; shifted chains fail at n > shift; Omega never fits.
  if (l.form == QuotSeq::Form::Const) return !l.value.omega;
  return false;
}

WrongconfReport wrongconf_verify(std::uint64_t n_max) {
  WrongconfReport rep;
  std::ostringstream os;
  rep.f_step_ok = true;
  for (std::uint64_t n = 1; n <= n_max && rep.f_step_ok; ++n) {
    QuotSeq fn = quot_apply_f(QuotSeq::shifted(std::int64_t(n)));
    if (!quot_sim(fn, QuotSeq::shifted(std::int64_t(n) - 1))) rep.f_step_ok = false;
  }
  os << "f-step: f(phi_n) ~ phi_{n-1} for 1 <= n <= " << n_max
     << " (tail shift decreases by one; prefix differences are finite): "
     << (rep.f_step_ok ? "ok" : "VIOLATED") << "\n";

  rep.chain_decreasing = true;
  for (std::uint64_t n = 0; n <= n_max && rep.chain_decreasing; ++n) {
    if (!quot_leq(QuotSeq::shifted(std::int64_t(n) + 1),
                  QuotSeq::shifted(std::int64_t(n))))
      rep.chain_decreasing = false;
  }
  os << "chain: phi_{n+1} <= phi_n for 0 <= n <= " << n_max
     << " (coordinate i compares i-n-1 <= i-n): "
     << (rep.chain_decreasing ? "ok" : "VIOLATED") << "\n";

  rep.mu_not_below_phi0 = !quot_leq(QuotSeq::mu(), QuotSeq::shifted(0));
  os << "blocking: mu !<= phi_0 (Omega exceeds every Nat coordinate): "
     << (rep.mu_not_below_phi0 ? "ok" : "VIOLATED") << "\n";

  rep.text = os.str();
  return rep;
}

LowerBoundReplay replay_lower_bound(const QuotSeq& l) {
  LowerBoundReplay r;
  std::ostringstream os;
  r.is_lower_bound = lower_bound_of_all_phi(l);
  os << "candidate " << l.show() << ": lower bound of every phi_n: "
     << (r.is_lower_bound ? "yes" : "no") << "\n";
  QuotSeq fl = quot_apply_f(l);
  r.f_image_is_lower_bound = lower_bound_of_all_phi(fl);
  os << "f-image " << fl.show() << ": lower bound of every phi_n: "
     << (r.f_image_is_lower_bound ? "yes" : "no") << "\n";
  r.mu_below_l = quot_leq(QuotSeq::mu(), l);
  // Were the candidate a lower bound of every phi_n, mu <= candidate would
  // force mu <= phi_0, which the configuration refutes.
  r.contradiction = r.mu_below_l;
  if (r.contradiction)
    os << "contradiction: mu <= candidate would give mu <= phi_0\n";
  else
    os << "no contradiction arises from this candidate\n";
  r.text = os.str();
  return r;
}

}  // namespace mualg
