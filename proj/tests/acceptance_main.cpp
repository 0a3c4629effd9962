// Acceptance suite: runs every shipped guarantee at full scale and prints
// one pass/fail line per check. Exits nonzero on any failure.

#include "oe/selfcheck.hpp"

#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
  oe::CheckScale scale;
  scale.threads = 0;
  scale.scratch_dir = "acceptance_scratch";
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) scale.mc_trials = 30000;
    if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc)
      scale.threads = std::atoi(argv[++i]);
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
      scale.seed = std::strtoull(argv[++i], nullptr, 10);
  }
  const auto results = oe::run_acceptance_checks(scale, std::cout);
  int failures = 0;
  for (const auto& r : results)
    if (!r.pass) ++failures;
  if (failures > 0) {
    std::cout << failures << " acceptance check(s) FAILED\n";
    return 1;
  }
  std::cout << "all " << results.size() << " acceptance checks passed\n";
  return 0;
}
