#include "mualg/completion.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace mualg {

void FinitePoset::validate() const {
  const int n = size();
  if (n > 64) throw std::invalid_argument("poset: more than 64 elements");
  if (int(below.size()) != n) throw std::invalid_argument("poset: bad shape");
  for (int i = 0; i < n; ++i)
    if (!leq(i, i)) throw std::invalid_argument("poset: not reflexive");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i != j && leq(i, j) && leq(j, i))
        throw std::invalid_argument("poset: not antisymmetric");
      if (leq(i, j) && (below[i] & ~below[j]))
        throw std::invalid_argument("poset: not transitive");
    }
}

FinitePoset FinitePoset::from_pairs(
    const std::vector<std::string>& names,
    const std::vector<std::pair<std::string, std::string>>& leq_pairs) {
  FinitePoset p;
  p.names = names;
  const int n = p.size();
  if (n > 64) throw std::invalid_argument("poset: more than 64 elements");
  std::map<std::string, int> idx;
  for (int i = 0; i < n; ++i) idx[names[i]] = i;
  p.below.assign(n, 0);
  for (int i = 0; i < n; ++i) p.below[i] |= std::uint64_t(1) << i;
  for (const auto& [a, b] : leq_pairs) {
    auto ia = idx.find(a), ib = idx.find(b);
    if (ia == idx.end() || ib == idx.end())
      throw std::invalid_argument("poset: unknown element in pair");
    p.below[ib->second] |= std::uint64_t(1) << ia->second;
  }
  // Transitive closure.
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (p.leq(i, j) && (p.below[i] & ~p.below[j])) {
          p.below[j] |= p.below[i];
          changed = true;
        }
  }
  p.validate();
  return p;
}

namespace {

// Least upper bound helpers working on element masks.
std::uint64_t upper_bounds(const FinitePoset& p, std::uint64_t set) {
  std::uint64_t out = 0;
  for (int u = 0; u < p.size(); ++u) {
    if ((set & ~p.below[u]) == 0) out |= std::uint64_t(1) << u;
  }
  return out;
}

std::uint64_t lower_bounds(const FinitePoset& p, std::uint64_t set) {
  std::uint64_t out = 0;
  for (int l = 0; l < p.size(); ++l) {
    bool ok = true;
    for (int u = 0; u < p.size() && ok; ++u)
      if ((set >> u) & 1)
        if (!p.leq(l, u)) ok = false;
    if (ok) out |= std::uint64_t(1) << l;
  }
  return out;
}

int least_of(const FinitePoset& p, std::uint64_t set) {
  for (int i = 0; i < p.size(); ++i)
    if ((set >> i) & 1) {
      bool least = true;
      for (int j = 0; j < p.size() && least; ++j)
        if ((set >> j) & 1)
          if (!p.leq(i, j)) least = false;
      if (least) return i;
    }
  return -1;
}

int greatest_of(const FinitePoset& p, std::uint64_t set) {
  for (int i = 0; i < p.size(); ++i)
    if ((set >> i) & 1) {
      bool greatest = true;
      for (int j = 0; j < p.size() && greatest; ++j)
        if ((set >> j) & 1)
          if (!p.leq(j, i)) greatest = false;
      if (greatest) return i;
    }
  return -1;
}

}  // namespace

bool poset_is_lattice(const FinitePoset& p) {
  const int n = p.size();
  if (n == 0) return false;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::uint64_t pair = (std::uint64_t(1) << a) | (std::uint64_t(1) << b);
      if (least_of(p, upper_bounds(p, pair)) < 0) return false;
      if (greatest_of(p, lower_bounds(p, pair)) < 0) return false;
    }
  // Top and bottom come from the empty join/meet.
  return least_of(p, upper_bounds(p, 0)) >= 0 &&
         greatest_of(p, lower_bounds(p, 0)) >= 0;
}

namespace {

std::vector<std::uint64_t> iso_profile(const FinitePoset& p) {
  // Per element: (|down|, |up|, sorted down-degrees of covered elements).
  std::vector<std::uint64_t> prof;
  for (int i = 0; i < p.size(); ++i) {
    std::uint64_t down = __builtin_popcountll(p.below[i]);
    std::uint64_t up = 0;
    for (int j = 0; j < p.size(); ++j)
      if (p.leq(i, j)) ++up;
    prof.push_back((down << 32) | up);
  }
  std::sort(prof.begin(), prof.end());
  return prof;
}

}  // namespace

bool poset_isomorphic(const FinitePoset& a, const FinitePoset& b) {
  if (a.size() != b.size()) return false;
  if (iso_profile(a) != iso_profile(b)) return false;
  const int n = a.size();
  if (n > 8)
    throw std::invalid_argument("poset_isomorphic: exhaustive check capped at 8");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j)
        if (a.leq(i, j) != b.leq(perm[i], perm[j])) ok = false;
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// ---------------------------------------------------------------------------

int CutLattice::meet(int a, int b) const {
  int idx = index_of(cuts[a] & cuts[b]);
  assert(idx >= 0);  // cuts are intersection-closed
  return idx;
}

int CutLattice::join(int a, int b) const {
  // Smallest cut containing the union.
  std::uint64_t u = cuts[a] | cuts[b];
  int best = -1;
  for (int i = 0; i < size(); ++i)
    if ((u & ~cuts[i]) == 0)
      if (best < 0 || (cuts[i] & ~cuts[best]) == 0) best = i;
  assert(best >= 0);
  return best;
}

int CutLattice::iota(int elem) const {
  int idx = index_of(base.below[elem]);
  assert(idx >= 0);
  return idx;
}

int CutLattice::index_of(std::uint64_t lower) const {
  auto it = std::lower_bound(cuts.begin(), cuts.end(), lower);
  if (it == cuts.end() || *it != lower) return -1;
  return int(it - cuts.begin());
}

int CutLattice::max_element(int cut) const {
  return greatest_of(base, cuts[cut]);
}

FinitePoset CutLattice::as_poset() const {
  if (size() > 64)
    throw std::invalid_argument("as_poset: completion exceeds 64 elements");
  FinitePoset p;
  for (int i = 0; i < size(); ++i) p.names.push_back("c" + std::to_string(i));
  p.below.assign(size(), 0);
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      if (leq(i, j)) p.below[j] |= std::uint64_t(1) << i;
  return p;
}

CutLattice dm_completion(const FinitePoset& p, int max_elements) {
  p.validate();
  CutLattice c;
  c.base = p;
  // Every cut is an intersection of principal ideals, together with the
  // whole carrier (the lower bounds of the empty upper set).
  std::set<std::uint64_t> acc;
  std::uint64_t everything = p.size() == 64 ? ~std::uint64_t(0)
                                            : ((std::uint64_t(1) << p.size()) - 1);
  acc.insert(everything);
  for (int i = 0; i < p.size(); ++i) acc.insert(p.below[i]);
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::uint64_t> cur(acc.begin(), acc.end());
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = i + 1; j < cur.size(); ++j)
        if (acc.insert(cur[i] & cur[j]).second) changed = true;
    if (int(acc.size()) > max_elements)
      throw std::invalid_argument("dm_completion: completion exceeds bound");
  }
  c.cuts.assign(acc.begin(), acc.end());
  std::sort(c.cuts.begin(), c.cuts.end());
  for (int i = 0; i < c.size(); ++i) {
    if (c.cuts[i] == c.cuts[0]) c.bottom = 0;
    if ((c.cuts[c.size() - 1] & ~c.cuts[i]) == 0 &&
        (c.cuts[i] & ~c.cuts[c.size() - 1]) == 0)
      c.top = i;
  }
  // Sorted masks put the least cut first and the full carrier last.
  c.bottom = 0;
  c.top = c.size() - 1;
  assert(c.cuts[c.top] == everything);
  return c;
}

bool join_preserving(const FinitePoset& lattice, const std::vector<int>& f) {
  const int n = lattice.size();
  const std::uint64_t everything =
      n == 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << n) - 1);
  int bot = least_of(lattice, everything);  // the empty join
  if (bot < 0) return false;
  if (f[bot] != bot) return false;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::uint64_t pair = (std::uint64_t(1) << a) | (std::uint64_t(1) << b);
      int ab = least_of(lattice, upper_bounds(lattice, pair));
      std::uint64_t fpair =
          (std::uint64_t(1) << f[a]) | (std::uint64_t(1) << f[b]);
      int fab = least_of(lattice, upper_bounds(lattice, fpair));
      if (f[ab] != fab) return false;
    }
  return true;
}

ExtendedAdjoint extend_left_adjoint(const FinitePoset& lattice,
                                    const std::vector<int>& f,
                                    const CutLattice& c) {
  if (!poset_is_lattice(lattice))
    throw std::invalid_argument("extend_left_adjoint: base is not a lattice");
  if (int(f.size()) != lattice.size())
    throw std::invalid_argument("extend_left_adjoint: bad table");
  if (!join_preserving(lattice, f))
    throw std::invalid_argument("extend_left_adjoint: map does not preserve joins");

  ExtendedAdjoint ext;
  ext.f_base = f;
  // f^(A) = join of iota(f(x)) over x in A (join density).
  ext.f_ext.assign(c.size(), c.bottom);
  for (int a = 0; a < c.size(); ++a) {
    int acc = c.bottom;
    for (int x = 0; x < lattice.size(); ++x)
      if ((c.cuts[a] >> x) & 1) acc = c.join(acc, c.iota(f[x]));
    ext.f_ext[a] = acc;
  }
  // g^(B) = meet of iota(g(y)) over iota(y) >= B, where g is the right
  // adjoint on the base: g(y) = join { x | f(x) <= y }.
  std::vector<int> g_base(lattice.size());
  for (int y = 0; y < lattice.size(); ++y) {
    std::uint64_t set = 0;
    for (int x = 0; x < lattice.size(); ++x)
      if (lattice.leq(f[x], y)) set |= std::uint64_t(1) << x;
    g_base[y] = least_of(lattice, upper_bounds(lattice, set));
  }
  ext.g_ext.assign(c.size(), c.top);
  for (int b = 0; b < c.size(); ++b) {
    int acc = c.top;
    for (int y = 0; y < lattice.size(); ++y)
      if (c.leq(b, c.iota(y))) acc = c.meet(acc, c.iota(g_base[y]));
    ext.g_ext[b] = acc;
  }
  return ext;
}

// ---------------------------------------------------------------------------
// Modal structure on a powerset completion.

namespace {

FinitePoset powerset_poset(const KripkeModel& m) {
  if (m.n > 5)
    throw std::invalid_argument("complete_modal_structure: model too large");
  const int card = 1 << m.n;
  FinitePoset p;
  for (int i = 0; i < card; ++i) p.names.push_back("e" + std::to_string(i));
  p.below.assign(card, 0);
  for (int i = 0; i < card; ++i)
    for (int j = 0; j < card; ++j)
      if ((j & ~i) == 0) p.below[i] |= std::uint64_t(1) << j;
  return p;
}

}  // namespace

CompletedModalAlgebra complete_modal_structure(const KripkeModel& m) {
  CompletedModalAlgebra out;
  out.model = m;
  out.carrier = powerset_poset(m);
  out.lat = dm_completion(out.carrier);
  for (const auto& act : m.actions) {
    std::vector<int> f(out.carrier.size());
    for (int z = 0; z < out.carrier.size(); ++z)
      f[z] = int(m.eval_dia(act, Elem(z)));
    out.dia_ext[act] = extend_left_adjoint(out.carrier, f, out.lat);
  }
  return out;
}

int CompletedModalAlgebra::iota(Elem z) const { return lat.iota(int(z)); }

namespace {

int completed_eval_rec(const CompletedModalAlgebra& alg, const Term& t,
                       std::map<std::string, int>& env) {
  const CutLattice& c = alg.lat;
  switch (t->kind) {
    case Kind::Gen: {
      auto it = alg.model.val.find(t->name);
      return alg.iota(it == alg.model.val.end() ? 0 : it->second);
    }
    case Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end())
        throw std::invalid_argument("unbound variable: " + t->name);
      return it->second;
    }
    case Kind::Top:
      return c.top;
    case Kind::Bot:
      return c.bottom;
    case Kind::And:
      return c.meet(completed_eval_rec(alg, t->lhs, env),
                    completed_eval_rec(alg, t->rhs, env));
    case Kind::Or:
      return c.join(completed_eval_rec(alg, t->lhs, env),
                    completed_eval_rec(alg, t->rhs, env));
    case Kind::Neg: {
      int a = completed_eval_rec(alg, t->lhs, env);
      // Cuts of a finite lattice are principal, so negate the top element.
      int mx = c.max_element(a);
      assert(mx >= 0);
      return alg.iota(alg.model.complement(Elem(mx)));
    }
    case Kind::Dia: {
      auto it = alg.dia_ext.find(t->name);
      if (it == alg.dia_ext.end())
        throw std::invalid_argument("unknown action: " + t->name);
      return it->second.f_ext[completed_eval_rec(alg, t->lhs, env)];
    }
    case Kind::Box: {
      auto it = alg.dia_ext.find(t->name);
      if (it == alg.dia_ext.end())
        throw std::invalid_argument("unknown action: " + t->name);
      int a = completed_eval_rec(alg, t->lhs, env);
      int mx = c.max_element(a);
      assert(mx >= 0);
      Elem za = alg.model.complement(Elem(mx));
      int negd = it->second.f_ext[alg.iota(za)];
      int md = c.max_element(negd);
      assert(md >= 0);
      return alg.iota(alg.model.complement(Elem(md)));
    }
    case Kind::Mu:
    case Kind::Nu: {
      int cur = t->kind == Kind::Mu ? c.bottom : c.top;
      auto saved = env.find(t->name);
      int old = 0;
      bool had = false;
      if (saved != env.end()) {
        had = true;
        old = saved->second;
      }
      for (int step = 0;; ++step) {
        if (step > c.size() + 1)
          throw std::invalid_argument(
              "fixed point did not stabilize; body not positive in " + t->name);
        env[t->name] = cur;
        int next = completed_eval_rec(alg, t->lhs, env);
        if (next == cur) break;
        cur = next;
      }
      if (had)
        env[t->name] = old;
      else
        env.erase(t->name);
      return cur;
    }
  }
  assert(false);
  return c.bottom;
}

}  // namespace

int CompletedModalAlgebra::eval(const Term& t,
                                const std::map<std::string, int>& env) const {
  std::map<std::string, int> e = env;
  return completed_eval_rec(*this, t, e);
}

PreservationReport preservation_check(const KripkeModel& m,
                                      const CompletedModalAlgebra& c,
                                      const Term& body, const std::string& v,
                                      const Env& env) {
  // Hypothesis: iota intertwines the two polynomial steps, checked over the
  // whole (finite) carrier.
  std::map<std::string, int> cenv;
  for (const auto& [y, z] : env) cenv[y] = c.iota(z);
  const Elem universe = m.universe();
  for (Elem z = 0; z <= universe; ++z) {
    Env e = env;
    e[v] = z;
    Elem fz = eval(m, body, e);
    std::map<std::string, int> ce = cenv;
    ce[v] = c.iota(z);
    int cz = c.eval(body, ce);
    if (cz != c.iota(fz)) {
      PreservationReport r;
      r.verdict = PreservationVerdict::HypothesisFailure;
      r.detail = "embedding does not intertwine the polynomial at element " +
                 std::to_string(z);
      return r;
    }
  }
  // Stage-by-stage approximants.
  ApproximantTrace tr = lfp_iterate(m, body, v, env);
  int cur = c.lat.bottom;
  PreservationReport r;
  r.verdict = PreservationVerdict::Preserved;
  for (std::size_t i = 0; i < tr.entries.size(); ++i) {
    if (cur != c.iota(tr.entries[i])) {
      r.verdict = PreservationVerdict::Failed;
      r.detail = "stage " + std::to_string(i) + " not preserved";
      return r;
    }
    std::map<std::string, int> ce = cenv;
    ce[v] = cur;
    cur = c.eval(body, ce);
    ++r.stages;
  }
  // Final values.
  std::map<std::string, int> ce = cenv;
  if (c.eval(mu(v, body), cenv) != c.iota(tr.value())) {
    r.verdict = PreservationVerdict::Failed;
    r.detail = "least fixed point not preserved";
  }
  return r;
}

PreservationReport preservation_check_steps(const FinitePoset& lattice,
                                            const CutLattice& c,
                                            const std::vector<int>& fL,
                                            const std::vector<int>& fC) {
  PreservationReport r;
  for (int x = 0; x < lattice.size(); ++x)
    if (fC[c.iota(x)] != c.iota(fL[x])) {
      r.verdict = PreservationVerdict::HypothesisFailure;
      r.detail = "embedding does not intertwine the steps at element " +
                 std::to_string(x);
      return r;
    }
  int botL = -1;
  for (int x = 0; x < lattice.size(); ++x) {
    bool least = true;
    for (int y = 0; y < lattice.size(); ++y)
      if (!lattice.leq(x, y)) least = false;
    if (least) botL = x;
  }
  if (botL < 0) {
    r.verdict = PreservationVerdict::HypothesisFailure;
    r.detail = "base has no bottom";
    return r;
  }
  int curL = botL, curC = c.bottom;
  r.verdict = PreservationVerdict::Preserved;
  for (int step = 0; step <= lattice.size() + 1; ++step) {
    if (curC != c.iota(curL)) {
      r.verdict = PreservationVerdict::Failed;
      r.detail = "stage " + std::to_string(step) + " not preserved";
      return r;
    }
    int nextL = fL[curL], nextC = fC[curC];
    ++r.stages;
    if (nextL == curL && nextC == curC) break;
    curL = nextL;
    curC = nextC;
  }
  return r;
}

}  // namespace mualg
