#include "mualg/textio.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <functional>
#include <sstream>

namespace mualg {

namespace {

struct Lexer {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      advance();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
  bool eat(char c) {
    if (peek() != c) return false;
    advance();
    return true;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool ident_start(char c) { return c >= 'a' && c <= 'z'; }
  bool ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  }
  std::string ident() {
    skip_ws();
    if (pos >= text.size() || !ident_start(text[pos])) fail("expected identifier");
    std::string out;
    while (pos < text.size() && ident_char(text[pos])) {
      out.push_back(text[pos]);
      advance();
    }
    return out;
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
};

struct TermParser {
  Lexer lex;
  std::set<std::string> vars;  // names parsing as variables

  TermParser(const std::string& t, const std::set<std::string>& vs)
      : lex(t), vars(vs) {}

  Term parse() {
    Term t = or_expr();
    if (!lex.at_end()) lex.fail("trailing input");
    return t;
  }

  Term or_expr() {
    Term t = and_expr();
    while (lex.peek() == '|') {
      lex.advance();
      t = disj(t, and_expr());
    }
    return t;
  }

  Term and_expr() {
    Term t = unary();
    while (lex.peek() == '&') {
      lex.advance();
      t = conj(t, unary());
    }
    return t;
  }

  Term binder(bool least) {
    int bl = lex.line, bc = lex.col;
    std::string v = lex.ident();
    lex.expect('.');
    bool added = vars.insert(v).second;
    Term body = or_expr();  // binders extend right
    if (added) vars.erase(v);
    if (!positive_in(body, v))
      throw ParseError("variable " + v + " under odd negations", bl, bc);
    return least ? mu(v, body) : nu(v, body);
  }

  Term unary() {
    char c = lex.peek();
    if (c == '~') {
      lex.advance();
      return neg(unary());
    }
    if (c == '<') {
      lex.advance();
      std::string a = lex.ident();
      lex.expect('>');
      return dia(a, unary());
    }
    if (c == '[') {
      lex.advance();
      std::string a = lex.ident();
      lex.expect(']');
      return box(a, unary());
    }
    if (c == '(') {
      lex.advance();
      Term t = or_expr();
      lex.expect(')');
      return t;
    }
    if (c == 'T' || c == 'F') {
      lex.advance();
      return c == 'T' ? top() : bot();
    }
    if (lex.ident_start(c)) {
      std::string id = lex.ident();
      if (id == "mu") return binder(true);
      if (id == "nu") return binder(false);
      if (id == "arrow") {
        std::string a = lex.ident();
        lex.expect('{');
        std::vector<Term> xs;
        if (lex.peek() != '}') {
          xs.push_back(or_expr());
          while (lex.eat(',')) xs.push_back(or_expr());
        }
        lex.expect('}');
        return arrow(a, xs);
      }
      return vars.count(id) ? var(id) : gen(id);
    }
    lex.fail("unexpected character");
  }
};

enum Level { LvlOr = 0, LvlAnd = 1, LvlUnary = 2 };

// `tail` marks positions where a binder may extend to the end of the
// enclosing expression without changing the parse.
void print_rec(const Term& t, Level lvl, bool tail, std::ostringstream& os) {
  switch (t->kind) {
    case Kind::Gen:
    case Kind::Var:
      os << t->name;
      return;
    case Kind::Top:
      os << "T";
      return;
    case Kind::Bot:
      os << "F";
      return;
    case Kind::Or: {
      bool parens = LvlOr < lvl;
      if (parens) os << "(";
      print_rec(t->lhs, LvlOr, false, os);
      os << " | ";
      print_rec(t->rhs, LvlAnd, parens || tail, os);
      if (parens) os << ")";
      return;
    }
    case Kind::And: {
      bool parens = LvlAnd < lvl;
      if (parens) os << "(";
      print_rec(t->lhs, LvlAnd, false, os);
      os << " & ";
      print_rec(t->rhs, LvlUnary, parens || tail, os);
      if (parens) os << ")";
      return;
    }
    case Kind::Neg:
      os << "~";
      print_rec(t->lhs, LvlUnary, tail, os);
      return;
    case Kind::Dia:
      os << "<" << t->name << "> ";
      print_rec(t->lhs, LvlUnary, tail, os);
      return;
    case Kind::Box:
      os << "[" << t->name << "] ";
      print_rec(t->lhs, LvlUnary, tail, os);
      return;
    case Kind::Mu:
    case Kind::Nu: {
      bool parens = !tail;
      if (parens) os << "(";
      os << (t->kind == Kind::Mu ? "mu " : "nu ") << t->name << " . ";
      print_rec(t->lhs, LvlOr, true, os);
      if (parens) os << ")";
      return;
    }
  }
}

}  // namespace

Term parse_term(const std::string& text, const std::set<std::string>& vars) {
  TermParser p(text, vars);
  return p.parse();
}

namespace {

bool legal_ident(const std::string& s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s)
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'))
      return false;
  return true;
}

// Canonicalized terms carry positional binder names outside the grammar;
// rename those so printed text always re-parses.
Term legalize_binders(const Term& t, std::set<std::string>& used, int& counter) {
  switch (t->kind) {
    case Kind::Gen:
    case Kind::Var:
    case Kind::Top:
    case Kind::Bot:
      return t;
    case Kind::And:
      return conj(legalize_binders(t->lhs, used, counter),
                  legalize_binders(t->rhs, used, counter));
    case Kind::Or:
      return disj(legalize_binders(t->lhs, used, counter),
                  legalize_binders(t->rhs, used, counter));
    case Kind::Neg:
      return neg(legalize_binders(t->lhs, used, counter));
    case Kind::Dia:
      return dia(t->name, legalize_binders(t->lhs, used, counter));
    case Kind::Box:
      return box(t->name, legalize_binders(t->lhs, used, counter));
    case Kind::Mu:
    case Kind::Nu: {
      Term body = t->lhs;
      std::string name = t->name;
      if (!legal_ident(name)) {
        do {
          name = "v" + std::to_string(counter++);
        } while (used.count(name));
        used.insert(name);
        body = substitute(body, {{t->name, var(name)}});
      }
      body = legalize_binders(body, used, counter);
      return std::make_shared<const TermNode>(t->kind, name, body, nullptr);
    }
  }
  return t;
}

}  // namespace

std::string print_term(const Term& t) {
  bool needs_fix = false;
  std::function<void(const Term&)> scan = [&](const Term& s) {
    if ((s->kind == Kind::Mu || s->kind == Kind::Nu) && !legal_ident(s->name))
      needs_fix = true;
    if (s->lhs) scan(s->lhs);
    if (s->rhs) scan(s->rhs);
  };
  scan(t);
  Term out = t;
  if (needs_fix) {
    std::set<std::string> used = free_vars(t);
    for (const auto& g : generators_of(t)) used.insert(g);
    int counter = 0;
    out = legalize_binders(t, used, counter);
  }
  std::ostringstream os;
  print_rec(out, LvlOr, true, os);
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

}  // namespace

KripkeModel parse_model(const std::string& text,
                        const std::optional<std::vector<std::string>>& alphabet) {
  KripkeModel m;
  std::map<std::string, int> state_idx;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  int phase = 0;  // 0: expect states, 1: rel*, 2: val*
  while (std::getline(is, raw)) {
    ++lineno;
    std::string s = raw;
    auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    if (split_ws(s).empty()) continue;
    auto colon = s.find(':');
    if (colon == std::string::npos)
      throw ParseError("expected 'directive:'", lineno, 1);
    auto head = split_ws(s.substr(0, colon));
    auto rest = split_ws(s.substr(colon + 1));
    if (head.size() == 1 && head[0] == "states") {
      if (phase != 0) throw ParseError("states line out of order", lineno, 1);
      phase = 1;
      for (const auto& nm : rest) {
        if (state_idx.count(nm))
          throw ParseError("duplicate state " + nm, lineno, 1);
        state_idx[nm] = m.n++;
        m.state_names.push_back(nm);
      }
      if (m.n > 64) throw ParseError("too many states", lineno, 1);
    } else if (head.size() == 2 && head[0] == "rel") {
      if (phase == 0 || phase > 1)
        throw ParseError("rel line out of order", lineno, 1);
      const std::string& act = head[1];
      if (alphabet &&
          std::find(alphabet->begin(), alphabet->end(), act) == alphabet->end())
        throw ParseError("undeclared action " + act, lineno, 1);
      if (!m.succ.count(act)) {
        m.actions.push_back(act);
        m.succ[act].assign(m.n, 0);
      }
      for (const auto& e : rest) {
        auto arr = e.find("->");
        if (arr == std::string::npos)
          throw ParseError("expected from->to", lineno, 1);
        auto f = state_idx.find(e.substr(0, arr));
        auto t = state_idx.find(e.substr(arr + 2));
        if (f == state_idx.end() || t == state_idx.end())
          throw ParseError("unknown state in edge " + e, lineno, 1);
        m.add_edge(act, f->second, t->second);
      }
    } else if (head.size() == 2 && head[0] == "val") {
      if (phase == 0) throw ParseError("val line before states", lineno, 1);
      phase = 2;
      Elem z = 0;
      for (const auto& nm : rest) {
        auto it = state_idx.find(nm);
        if (it == state_idx.end())
          throw ParseError("unknown state " + nm, lineno, 1);
        z |= Elem(1) << it->second;
      }
      m.val[head[1]] = z;
    } else {
      throw ParseError("unknown directive", lineno, 1);
    }
  }
  if (phase == 0) throw ParseError("missing states line", lineno, 1);
  if (alphabet) {
    for (const auto& a : *alphabet)
      if (!m.succ.count(a)) {
        m.actions.push_back(a);
        m.succ[a].assign(m.n, 0);
      }
  }
  return m;
}

std::string print_model(const KripkeModel& m) {
  std::ostringstream os;
  os << "states:";
  for (const auto& s : m.state_names) os << " " << s;
  os << "\n";
  std::vector<std::string> acts = m.actions;
  std::sort(acts.begin(), acts.end());
  for (const auto& a : acts) {
    os << "rel " << a << ":";
    const auto& sv = m.succ.at(a);
    for (int f = 0; f < m.n; ++f)
      for (int t = 0; t < m.n; ++t)
        if ((sv[f] >> t) & 1)
          os << " " << m.state_names[f] << "->" << m.state_names[t];
    os << "\n";
  }
  for (const auto& [g, z] : m.val) {
    os << "val " << g << ":";
    for (int s = 0; s < m.n; ++s)
      if ((z >> s) & 1) os << " " << m.state_names[s];
    os << "\n";
  }
  return os.str();
}

System parse_system(const std::string& text) {
  System sys;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  bool have_bound = false;
  std::set<std::string> all_vars;
  std::vector<std::pair<int, std::pair<std::string, std::string>>> eq_lines;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string s = raw;
    auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    if (split_ws(s).empty()) continue;
    auto assign = s.find(":=");
    if (assign != std::string::npos) {
      auto lhs = split_ws(s.substr(0, assign));
      if (lhs.size() != 1)
        throw ParseError("expected 'x := term'", lineno, 1);
      eq_lines.push_back({lineno, {lhs[0], s.substr(assign + 2)}});
      continue;
    }
    auto colon = s.find(':');
    if (colon == std::string::npos)
      throw ParseError("expected header or equation", lineno, 1);
    auto head = split_ws(s.substr(0, colon));
    auto rest = split_ws(s.substr(colon + 1));
    if (head.size() == 1 && head[0] == "bound") {
      sys.bound = rest;
      have_bound = true;
    } else if (head.size() == 1 && head[0] == "free") {
      sys.params = rest;
    } else {
      throw ParseError("unknown header " + head[0], lineno, 1);
    }
  }
  if (!have_bound) throw ParseError("missing bound: header", lineno, 1);
  all_vars.insert(sys.bound.begin(), sys.bound.end());
  all_vars.insert(sys.params.begin(), sys.params.end());
  for (const auto& [ln, kv] : eq_lines) {
    if (!std::count(sys.bound.begin(), sys.bound.end(), kv.first))
      throw ParseError("equation for non-bound variable " + kv.first, ln, 1);
    try {
      sys.equations[kv.first] = parse_term(kv.second, all_vars);
    } catch (const ParseError& e) {
      throw ParseError(std::string(e.what()), ln, e.col);
    }
  }
  try {
    sys.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), lineno, 1);
  }
  return sys;
}

std::string print_system(const System& s) {
  std::ostringstream os;
  os << "bound:";
  for (const auto& x : s.bound) os << " " << x;
  os << "\n";
  if (!s.params.empty()) {
    os << "free:";
    for (const auto& y : s.params) os << " " << y;
    os << "\n";
  }
  for (const auto& x : s.bound)
    os << x << " := " << print_term(s.equations.at(x)) << "\n";
  return os.str();
}

FinitePoset parse_poset(const std::string& text) {
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> pairs;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string s = raw;
    auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    if (split_ws(s).empty()) continue;
    auto colon = s.find(':');
    if (colon == std::string::npos)
      throw ParseError("expected 'elem:' or 'leq:'", lineno, 1);
    auto head = split_ws(s.substr(0, colon));
    auto rest = split_ws(s.substr(colon + 1));
    if (head.size() == 1 && head[0] == "elem") {
      names.insert(names.end(), rest.begin(), rest.end());
    } else if (head.size() == 1 && head[0] == "leq") {
      for (const auto& e : rest) {
        auto lt = e.find('<');
        if (lt == std::string::npos)
          throw ParseError("expected a<b", lineno, 1);
        pairs.push_back({e.substr(0, lt), e.substr(lt + 1)});
      }
    } else {
      throw ParseError("unknown directive", lineno, 1);
    }
  }
  try {
    return FinitePoset::from_pairs(names, pairs);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), lineno, 1);
  }
}

std::string print_poset(const FinitePoset& p) {
  std::ostringstream os;
  os << "elem:";
  for (const auto& n : p.names) os << " " << n;
  os << "\n";
  os << "leq:";
  for (int a = 0; a < p.size(); ++a)
    for (int b = 0; b < p.size(); ++b)
      if (a != b && p.leq(a, b)) os << " " << p.names[a] << "<" << p.names[b];
  os << "\n";
  return os.str();
}

std::string print_order_matrix(const FinitePoset& p) {
  std::ostringstream os;
  for (int a = 0; a < p.size(); ++a) {
    for (int b = 0; b < p.size(); ++b) os << (p.leq(a, b) ? '1' : '0');
    os << "\n";
  }
  return os.str();
}

std::string show_elem(const KripkeModel& m, Elem z) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (int s = 0; s < m.n; ++s)
    if ((z >> s) & 1) {
      if (!first) os << ",";
      first = false;
      os << m.state_names[s];
    }
  os << "}";
  return os.str();
}

}  // namespace mualg
