#ifndef MUALG_SUITES_HPP_
#define MUALG_SUITES_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace mualg {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  long budget = 0;
  std::vector<CheckResult> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Known suite names, in the order `run_suite("all", ...)` executes them.
std::vector<std::string> suite_names();

// Runs one named verification suite (or "all").  Budget <= 0 picks the
// default exploration budget; the check counts themselves are fixed.
// Throws std::invalid_argument on unknown names.
SuiteReport run_suite(const std::string& name, std::uint64_t seed, long budget);

// Deterministic text rendering, one line per check.
std::string format_report(const SuiteReport& r);

}  // namespace mualg

#endif  // MUALG_SUITES_HPP_
