// Acceptance gate: runs every criterion, prints one verdict line each,
// exits nonzero when any fails.
#include <cstring>
#include <iostream>
#include <string>

#include "hvp/check.hpp"

int main(int argc, char** argv) {
  std::string fixtures = "tests/fixtures";
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--fixtures") == 0 && i + 1 < argc)
      fixtures = argv[++i];
  }
  hvp::CheckSummary s = hvp::run_acceptance(fixtures, std::cout);
  return s.failed == 0 ? 0 : 1;
}
