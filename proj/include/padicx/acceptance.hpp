#ifndef PADICX_ACCEPTANCE_HPP
#define PADICX_ACCEPTANCE_HPP

#include <string>
#include <vector>

namespace padicx {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0;
  std::string detail;  // filled on failure (or informative on pass)
};

// Suites: padic, tree, harmonic, moments, multivanish, linv, branch, theta,
// multiplier, vanish, spiess, exceptional, order2, local, all.
// Unknown names raise Usage.
std::vector<CriterionResult> run_acceptance(const std::string& suite);

// One line per criterion: "PASS|FAIL  #k name (t s)  detail".
std::string format_results(const std::vector<CriterionResult>& results);

}  // namespace padicx

#endif
