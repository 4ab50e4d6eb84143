// Command-line front door: thin adapters over the library engines.  Every
// subcommand is deterministic given its inputs, --seed and --budget.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mualg/completion.hpp"
#include "mualg/counterexample.hpp"
#include "mualg/covers.hpp"
#include "mualg/suites.hpp"
#include "mualg/systems.hpp"
#include "mualg/textio.hpp"

using namespace mualg;

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

std::set<std::string> split_names(const std::string& csv) {
  std::set<std::string> out;
  std::istringstream is(csv);
  std::string w;
  while (std::getline(is, w, ',')) {
    if (!w.empty()) out.insert(w);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Descriptor text: s-expressions
//   (id) (proj i n) (join k) (const "term") (cmeet "term") (dia a)
//   (pair d d ...) (comp d d) (mu (i ...) d)
//   (spcon (lit p) (lit ~p) ... (block a x y) ...)

struct SexpParser {
  std::string text;
  std::size_t pos = 0;

  explicit SexpParser(std::string t) : text(std::move(t)) {}
  void ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
  }
  char peek() {
    ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  void expect(char c) {
    if (peek() != c) throw std::runtime_error(std::string("descriptor: expected '") + c + "'");
    ++pos;
  }
  std::string atom() {
    ws();
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace((unsigned char)text[pos]) &&
           text[pos] != '(' && text[pos] != ')')
      ++pos;
    if (start == pos) throw std::runtime_error("descriptor: expected atom");
    return text.substr(start, pos - start);
  }
  std::string quoted() {
    ws();
    if (peek() != '"') throw std::runtime_error("descriptor: expected quoted term");
    ++pos;
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != '"') ++pos;
    if (pos == text.size()) throw std::runtime_error("descriptor: unterminated quote");
    std::string s = text.substr(start, pos - start);
    ++pos;
    return s;
  }
  bool at_end() {
    ws();
    return pos >= text.size();
  }

  AdjointPtr parse() {
    expect('(');
    std::string head = atom();
    AdjointPtr out;
    if (head == "id") {
      out = adj::identity();
    } else if (head == "proj") {
      int i = std::stoi(atom());
      int n = std::stoi(atom());
      out = adj::proj(i, n);
    } else if (head == "join") {
      out = adj::join(std::stoi(atom()));
    } else if (head == "const") {
      out = adj::constant(parse_term(quoted()), 1);
    } else if (head == "cmeet") {
      out = adj::const_meet(parse_term(quoted()));
    } else if (head == "dia") {
      out = adj::dia(atom());
    } else if (head == "pair") {
      std::vector<AdjointPtr> parts;
      while (peek() == '(') parts.push_back(parse());
      out = adj::pair_of(parts);
    } else if (head == "comp") {
      AdjointPtr a = parse();
      AdjointPtr b = parse();
      out = adj::compose(a, b);
    } else if (head == "mu") {
      expect('(');
      std::vector<int> coords;
      while (peek() != ')') coords.push_back(std::stoi(atom()));
      expect(')');
      out = adj::mu(parse(), coords);
    } else if (head == "spcon") {
      SpconSpec spec;
      while (peek() == '(') {
        ++pos;
        std::string kind = atom();
        if (kind == "lit") {
          std::string l = atom();
          bool negated = !l.empty() && l[0] == '~';
          spec.literals.push_back({negated ? l.substr(1) : l, negated, false});
        } else if (kind == "block") {
          std::string act = atom();
          std::vector<std::string> xs;
          while (peek() != ')') xs.push_back(atom());
          spec.blocks.push_back({act, xs});
        } else {
          throw std::runtime_error("descriptor: unknown spcon field " + kind);
        }
        expect(')');
      }
      out = adj::spcon_map(spec);
    } else {
      throw std::runtime_error("descriptor: unknown head " + head);
    }
    expect(')');
    return out;
  }
};

std::string show_term_vec(const std::vector<Term>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? " ; " : "") + print_term(v[i]);
  return s;
}

std::string show_elem_vec(const KripkeModel& m, const std::vector<Elem>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? " ; " : "") + show_elem(m, v[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for fixed-point modal algebra computations"};
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  long budget = 4096;
  std::string out_path;
  app.add_option("--seed", seed, "generator seed")->capture_default_str();
  app.add_option("--budget", budget, "exploration budget")->capture_default_str();
  app.add_option("--out", out_path, "write output to a file instead of stdout");

  // Shared option targets.
  std::string input, model_path, varname = "x", action = "a", target_text;
  std::string vars_csv, lits_csv, f_text, g_text, candidate;
  std::vector<std::string> lets, y_specs, seed_terms;
  int depth = 10, width = -1;
  std::uint64_t nmax = 100;

  auto add_input = [&](CLI::App* cmd, const char* what) {
    cmd->add_option("input", input, what)->required();
  };

  auto* c_parse = app.add_subcommand("parse", "parse a term and echo it");
  add_input(c_parse, "term file or -");
  c_parse->add_option("--vars", vars_csv, "comma-separated variable names");
  auto* c_print = app.add_subcommand("print", "alias of parse");
  add_input(c_print, "term file or -");
  c_print->add_option("--vars", vars_csv, "comma-separated variable names");
  auto* c_nnf = app.add_subcommand("nnf", "negation normal form");
  add_input(c_nnf, "term file or -");
  auto* c_guard = app.add_subcommand("guard", "guarded form (input normalized first)");
  add_input(c_guard, "term file or -");
  auto* c_fl = app.add_subcommand("flclosure", "Fischer-Ladner closure members");
  add_input(c_fl, "term file or -");
  auto* c_classify = app.add_subcommand("classify", "fixed-point fragment tag");
  add_input(c_classify, "term file or -");
  auto* c_cnf = app.add_subcommand("cnf", "modal clause normal form");
  add_input(c_cnf, "term file or -");

  auto* c_eval = app.add_subcommand("eval", "evaluate a term on a model");
  add_input(c_eval, "term file or -");
  c_eval->add_option("--model", model_path, "model file")->required();
  c_eval->add_option("--let", lets, "binding var=term, repeatable");

  auto* c_approx = app.add_subcommand("approx", "approximant trace of a body");
  add_input(c_approx, "body term file or -");
  c_approx->add_option("--model", model_path)->required();
  c_approx->add_option("--var", varname, "fixed-point variable")->capture_default_str();

  auto* c_compile = app.add_subcommand("compile", "least-fixed-point fragment to an elementary system");
  add_input(c_compile, "term file or -");

  auto* c_bekic = app.add_subcommand("bekic", "solve a system by variable elimination");
  add_input(c_bekic, "system file or -");
  c_bekic->add_option("--model", model_path)->required();
  c_bekic->add_option("--let", lets, "free-variable binding var=term");

  auto* c_unravel = app.add_subcommand("unravel", "guarded system to a simple one");
  add_input(c_unravel, "system file or -");

  auto* c_powerset = app.add_subcommand("powerset", "simple system over nonempty subsets");
  add_input(c_powerset, "system file or -");

  auto* c_covers = app.add_subcommand("covers", "covering vectors of a descriptor");
  add_input(c_covers, "descriptor file or -");
  c_covers->add_option("--target", target_text, "target term")->required();
  c_covers->add_option("--model", model_path, "evaluate on a model instead of terms");

  auto* c_adjoint = app.add_subcommand("adjoint", "diamond right adjoint of a term");
  add_input(c_adjoint, "term file or -");
  c_adjoint->add_option("--action", action)->capture_default_str();

  auto* c_mucover = app.add_subcommand("mucover", "fixed-point covers via pans");
  add_input(c_mucover, "descriptor file or -");
  c_mucover->add_option("--target", target_text, "target term")->required();
  c_mucover->add_option("--model", model_path, "evaluate on a model instead of terms");

  auto* c_reach = app.add_subcommand("reach", "closure of seeds under scheme covers");
  add_input(c_reach, "descriptor file (one per line group) or -");
  c_reach->add_option("--seed-term", seed_terms, "seed term, repeatable")->required();

  auto* c_complete = app.add_subcommand("complete", "cut completion of a poset");
  add_input(c_complete, "poset file or -");

  auto* c_preserve = app.add_subcommand("preserve", "fixed-point preservation through the completion");
  add_input(c_preserve, "body term file or -");
  c_preserve->add_option("--model", model_path)->required();
  c_preserve->add_option("--var", varname)->capture_default_str();

  auto* c_whitman = app.add_subcommand("whitman", "inconsistency split certificate");
  add_input(c_whitman, "witness file: lines 'lit p', 'lit ~p', 'y <action> <term>'");
  c_whitman->add_option("--model", model_path)->required();

  auto* c_harness = app.add_subcommand("harness", "two-function approximant interleaving");
  c_harness->add_option("--model", model_path)->required();
  c_harness->add_option("--f", f_text, "term over x and y")->required();
  c_harness->add_option("--g", g_text, "term over x and y")->required();
  c_harness->add_option("--depth", depth)->capture_default_str();
  c_harness->add_option("--width", width, "word alphabet width; -1 = state count");

  auto* c_counter = app.add_subcommand("counterexample", "blocking configuration report");
  c_counter->add_option("--n", nmax, "chain length to certify")->capture_default_str();
  c_counter->add_option("--candidate", candidate,
                        "lower-bound candidate: bottom | mu | const:<k> | shifted:<n>");

  auto* c_suite = app.add_subcommand("suite", "run a verification suite");
  c_suite->add_option("name", input, "suite name or 'all'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::ostringstream os;
    auto parse_with_vars = [&](const std::string& text) {
      return parse_term(text, split_names(vars_csv));
    };
    auto env_from_lets = [&](const KripkeModel& m) {
      Env env;
      for (const auto& b : lets) {
        auto eq = b.find('=');
        if (eq == std::string::npos)
          throw std::runtime_error("--let expects var=term");
        env[b.substr(0, eq)] = eval(m, parse_term(b.substr(eq + 1)));
      }
      return env;
    };

    if (*c_parse || *c_print) {
      os << print_term(parse_with_vars(slurp(input))) << "\n";
    } else if (*c_nnf) {
      os << print_term(nnf(parse_term(slurp(input)))) << "\n";
    } else if (*c_guard) {
      os << print_term(guard(nnf(parse_term(slurp(input))))) << "\n";
    } else if (*c_fl) {
      TermSet fl = fl_closure(parse_term(slurp(input)));
      for (const auto& t : fl.items()) os << print_term(t) << "\n";
    } else if (*c_classify) {
      os << fragment_name(classify(nnf(parse_term(slurp(input))))) << "\n";
    } else if (*c_cnf) {
      for (const auto& c : modal_cnf(nnf(parse_term(slurp(input)))))
        os << print_term(c.to_term()) << "\n";
    } else if (*c_eval) {
      KripkeModel m = parse_model(slurp(model_path));
      std::set<std::string> vars;
      for (const auto& b : lets) vars.insert(b.substr(0, b.find('=')));
      Term t = parse_term(slurp(input), vars);
      os << show_elem(m, eval(m, t, env_from_lets(m))) << "\n";
    } else if (*c_approx) {
      KripkeModel m = parse_model(slurp(model_path));
      Term body = parse_term(slurp(input), {varname});
      auto tr = lfp_iterate(m, body, varname);
      for (std::size_t i = 0; i < tr.entries.size(); ++i)
        os << i << ": " << show_elem(m, tr.entries[i]) << "\n";
      os << "stabilization: " << tr.stab_index << "\n";
    } else if (*c_compile) {
      auto comp = compile_sigma1(nnf(parse_term(slurp(input))));
      os << print_system(comp.system);
      os << "designated: " << comp.designated << "\n";
      for (const auto& [y, lit] : comp.literal_bindings)
        os << "binding: " << y << " = " << print_term(lit) << "\n";
    } else if (*c_bekic) {
      KripkeModel m = parse_model(slurp(model_path));
      System s = parse_system(slurp(input));
      auto sol = bekic_solve(s, m, env_from_lets(m));
      for (const auto& x : s.bound)
        os << x << " = " << show_elem(m, sol.at(x)) << "\n";
    } else if (*c_unravel) {
      auto r = unravel_to_simple(parse_system(slurp(input)));
      os << print_system(r.system);
      for (const auto& [from, to] : r.witness)
        os << "witness: " << from << " -> " << to << "\n";
    } else if (*c_powerset) {
      auto pt = powerset_translate(parse_system(slurp(input)));
      os << print_system(pt.target);
      for (std::size_t i = 0; i < pt.subset_vars.size(); ++i) {
        os << "subset: " << pt.subset_vars[i] << " =";
        for (const auto& mem : pt.subset_members[i]) os << " " << mem;
        os << "\n";
      }
    } else if (*c_covers || *c_mucover) {
      SexpParser sp(slurp(input));
      AdjointPtr d = sp.parse();
      const bool is_mu = bool(*c_mucover);
      if (!model_path.empty()) {
        KripkeModel m = parse_model(slurp(model_path));
        LatticeCovers lc(m, int(budget));
        std::vector<Elem> target(d->coarity, eval(m, parse_term(target_text)));
        auto cs = is_mu ? lc.mu_cover(d, target) : lc.cover(d, target);
        for (const auto& v : cs) os << show_elem_vec(m, v) << "\n";
      } else {
        SyntacticCovers sc{int(budget)};
        std::vector<Term> target(d->coarity, parse_term(target_text));
        auto cs = is_mu ? sc.mu_cover(d, target) : sc.cover(d, target);
        for (const auto& v : cs) os << show_term_vec(v) << "\n";
      }
    } else if (*c_adjoint) {
      Term b = nnf(parse_term(slurp(input)));
      os << print_term(dia_right_adjoint(action, modal_cnf(b))) << "\n";
    } else if (*c_reach) {
      SexpParser sp(slurp(input));
      std::vector<AdjointPtr> schemes;
      while (!sp.at_end()) schemes.push_back(sp.parse());
      std::vector<Term> seeds;
      for (const auto& s : seed_terms) seeds.push_back(parse_term(s));
      SyntacticCovers sc{int(budget)};
      auto r = sc.automaton_reach(schemes, seeds, int(budget));
      os << (r.closed ? "closed" : "budget-exhausted") << "\n";
      for (const auto& t : r.states) os << print_term(t) << "\n";
    } else if (*c_complete) {
      FinitePoset p = parse_poset(slurp(input));
      CutLattice c = dm_completion(p);
      os << print_order_matrix(c.as_poset());
    } else if (*c_preserve) {
      KripkeModel m = parse_model(slurp(model_path));
      auto alg = complete_modal_structure(m);
      Term body = parse_term(slurp(input), {varname});
      auto rep = preservation_check(m, alg, body, varname);
      os << (rep.verdict == PreservationVerdict::Preserved
                 ? "preserved"
                 : rep.verdict == PreservationVerdict::HypothesisFailure
                       ? "hypothesis-failure"
                       : "failed")
         << " stages=" << rep.stages << "\n";
      if (!rep.detail.empty()) os << rep.detail << "\n";
    } else if (*c_whitman) {
      KripkeModel m = parse_model(slurp(model_path));
      std::vector<Literal> lambda;
      std::map<std::string, std::vector<Term>> ys;
      std::istringstream is(slurp(input));
      std::string line;
      while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind == "lit") {
          std::string l;
          ls >> l;
          bool negd = !l.empty() && l[0] == '~';
          lambda.push_back({negd ? l.substr(1) : l, negd, false});
        } else if (kind == "y") {
          std::string act;
          ls >> act;
          std::string rest;
          std::getline(ls, rest);
          ys[act].push_back(parse_term(rest));
        } else {
          throw std::runtime_error("whitman: unknown line " + kind);
        }
      }
      auto rep = whitman_check(lambda, ys, m);
      switch (rep.kind) {
        case WhitmanReport::Kind::LiteralClash:
          os << "literal-clash " << rep.clash_atom << "\n";
          break;
        case WhitmanReport::Kind::BottomWitness:
          os << "bottom-witness " << rep.witness_action << " "
             << print_term(rep.witness_term) << "\n";
          break;
        case WhitmanReport::Kind::Certificate:
          os << "certificate second=" << (rep.second_coordinate ? "T" : "F")
             << " first=" << show_elem(m, rep.first_coordinate) << "\n";
          break;
      }
    } else if (*c_harness) {
      KripkeModel m = parse_model(slurp(model_path));
      Term f = parse_term(f_text, {"x", "y"});
      Term g = parse_term(g_text, {"x", "y"});
      auto [tr, v] = regular_harness(f, g, m, depth, width);
      os << "chain-dominated: " << (v.chain_dominated ? "yes" : "no") << "\n";
      os << "level-joins-match: " << (v.level_joins_match ? "yes" : "no") << "\n";
      os << "pairs-bounded: " << (v.pairs_bounded ? "yes" : "no") << "\n";
      for (int n = 0; n <= tr.depth; ++n)
        os << n << ": f=" << show_elem(m, tr.f_seq[n])
           << " g=" << show_elem(m, tr.g_seq[n])
           << " h=" << show_elem(m, tr.h_seq[n])
           << " i=" << show_elem(m, tr.i_seq[n]) << "\n";
    } else if (*c_counter) {
      auto rep = wrongconf_verify(nmax);
      os << rep.text;
      if (!candidate.empty()) {
        QuotSeq l;
        if (candidate == "bottom")
          l = QuotSeq::bottom();
        else if (candidate == "mu")
          l = QuotSeq::mu();
        else if (candidate.rfind("const:", 0) == 0)
          l = QuotSeq::constant(OrdElem::nat(std::stoull(candidate.substr(6))));
        else if (candidate.rfind("shifted:", 0) == 0)
          l = QuotSeq::shifted(std::stoll(candidate.substr(8)));
        else
          throw std::runtime_error("unknown candidate " + candidate);
        os << replay_lower_bound(l).text;
      }
      if (!rep.all_ok()) {
        emit(out_path, os.str());
        return 1;
      }
    } else if (*c_suite) {
      SuiteReport rep = run_suite(input, seed, budget);
      emit(out_path, format_report(rep));
      return rep.pass() ? 0 : 1;
    }
    emit(out_path, os.str());
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
