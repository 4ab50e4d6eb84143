// Drives the installed command-line tool against the library engines and
// diffs the outputs; the tool must stay a thin adapter.

#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "mualg/suites.hpp"
#include "mualg/systems.hpp"
#include "mualg/textio.hpp"

using namespace mualg;

namespace {

std::string g_cli;

struct RunResult {
  int code;
  std::string out;
};

RunResult run(const std::string& args, const std::string& stdin_text = "") {
  std::string cmd;
  if (!stdin_text.empty()) {
    std::string tmp = "/tmp/mualg_cli_stdin.txt";
    std::ofstream f(tmp);
    f << stdin_text;
    f.close();
    cmd = g_cli + " " + args + " < " + tmp + " 2>&1";
  } else {
    cmd = g_cli + " " + args + " 2>&1";
  }
  std::array<char, 512> buf{};
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  while (fgets(buf.data(), int(buf.size()), p)) out += buf.data();
  int code = pclose(p);
  return {WEXITSTATUS(code), out};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

const char* kModel =
    "states: s0 s1\n"
    "rel a: s0->s1 s1->s1\n"
    "val p: s1\n";

}  // namespace

TEST_CASE("parse echoes the canonical form") {
  auto r = run("parse -", "mu x . p | <a> x\n");
  CHECK(r.code == 0);
  CHECK(r.out == "mu x . p | <a> x\n");
}

TEST_CASE("syntax and positivity errors exit with the usage code") {
  CHECK(run("parse -", "mu x . ~x").code == 2);
  CHECK(run("parse -", "p &&& q").code == 2);
  CHECK(run("nonexistent-subcommand").code == 2);
}

TEST_CASE("eval matches the engine") {
  write_file("/tmp/mualg_cli_m.model", kModel);
  auto r = run("eval - --model /tmp/mualg_cli_m.model", "mu x . p | <a> x");
  CHECK(r.code == 0);
  KripkeModel m = parse_model(kModel);
  Elem direct = eval(m, parse_term("mu x . p | <a> x"));
  CHECK(r.out == show_elem(m, direct) + "\n");
}

TEST_CASE("bekic subcommand matches the engine") {
  write_file("/tmp/mualg_cli_m.model", kModel);
  const char* sys = "bound: x\nx := p | <a> x\n";
  write_file("/tmp/mualg_cli_s.system", sys);
  auto r = run("bekic /tmp/mualg_cli_s.system --model /tmp/mualg_cli_m.model");
  CHECK(r.code == 0);
  KripkeModel m = parse_model(kModel);
  auto sol = bekic_solve(parse_system(sys), m);
  CHECK(r.out == "x = " + show_elem(m, sol.at("x")) + "\n");
}

TEST_CASE("suite subcommand reports and exits by verdict") {
  auto r = run("suite counterexample");
  CHECK(r.code == 0);
  CHECK(r.out == format_report(run_suite("counterexample", 42, 4096)));
  CHECK(run("suite nonexistent").code == 2);
}

TEST_CASE("reports are byte-identical across runs") {
  auto a = run("suite counterexample --seed 7");
  auto b = run("suite counterexample --seed 7");
  CHECK(a.out == b.out);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-cli>\n");
    return 2;
  }
  g_cli = argv[1];
  doctest::Context ctx;
  ctx.applyCommandLine(argc - 1, argv + 1);
  return ctx.run();
}
