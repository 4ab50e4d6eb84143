#ifndef MUALG_TEXTIO_HPP_
#define MUALG_TEXTIO_HPP_

#include <optional>
#include <stdexcept>
#include <string>

#include "mualg/completion.hpp"
#include "mualg/kripke.hpp"
#include "mualg/systems.hpp"
#include "mualg/term.hpp"

namespace mualg {

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(const std::string& msg, int l, int c)
      : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
        line(l),
        col(c) {}
};

// Concrete term grammar: identifiers [a-z][a-z0-9_]*, `T`, `F`, `~t`,
// `t & t`, `t | t`, `<a> t`, `[a] t`, `mu x . t`, `nu x . t`,
// `arrow a { t, ... }`, parentheses.  `~` and modalities bind tightest,
// then `&`, then `|`; binders extend right.  Identifiers in `vars` (and
// binder-bound ones) parse as variables, all others as generators.
Term parse_term(const std::string& text,
                const std::set<std::string>& vars = {});

// Canonical text; parse_term(print_term(t)) is alpha-equal to t.
std::string print_term(const Term& t);

// Line format, in order:  `states: s0 s1` / `rel a: s0->s1 s1->s2` /
// `val p: s0 s2`.  When an alphabet is supplied, rel lines outside it are
// rejected.
KripkeModel parse_model(const std::string& text,
                        const std::optional<std::vector<std::string>>& alphabet =
                            std::nullopt);
std::string print_model(const KripkeModel& m);

// Header lines `bound: x y` and optional `free: z`, then one `x := term`
// per bound variable; `#` comments.
System parse_system(const std::string& text);
std::string print_system(const System& s);

// `elem: a b c` / `leq: a<b b<c`.
FinitePoset parse_poset(const std::string& text);
std::string print_poset(const FinitePoset& p);
// Order matrix rows of 0/1, one line per element.
std::string print_order_matrix(const FinitePoset& p);

std::string show_elem(const KripkeModel& m, Elem z);

}  // namespace mualg

#endif  // MUALG_TEXTIO_HPP_
