// Acceptance runner: one line per criterion, nonzero exit on any failure.
#include <cstdio>

#include "padicx/acceptance.hpp"

int main() {
  auto results = padicx::run_acceptance("all");
  std::fputs(padicx::format_results(results).c_str(), stdout);
  for (const auto& r : results)
    if (!r.pass) return 1;
  return 0;
}
