// Acceptance driver: runs every verification suite and prints one line per
// criterion.  Exit code 0 only when all pass.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "mualg/suites.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 42;
  long budget = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--seed") && i + 1 < argc)
      seed = std::strtoull(argv[++i], nullptr, 10);
    else if (!std::strcmp(argv[i], "--budget") && i + 1 < argc)
      budget = std::strtol(argv[++i], nullptr, 10);
  }
  const auto names = mualg::suite_names();
  bool all_pass = true;
  for (std::size_t i = 0; i < names.size(); ++i) {
    mualg::SuiteReport rep = mualg::run_suite(names[i], seed, budget);
    bool pass = rep.pass();
    all_pass = all_pass && pass;
    std::printf("%s: criterion %zu %s\n", pass ? "PASS" : "FAIL", i + 1,
                names[i].c_str());
    if (!pass) {
      for (const auto& c : rep.checks)
        if (!c.pass)
          std::printf("       failed check: %s %s\n", c.name.c_str(),
                      c.detail.c_str());
    }
    std::fflush(stdout);
  }
  std::printf("%s\n", all_pass ? "ALL CRITERIA PASS" : "CRITERIA FAILED");
  return all_pass ? 0 : 1;
}
