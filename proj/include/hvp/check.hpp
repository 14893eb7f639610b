#pragma once
// Acceptance suite: one pass/fail verdict per criterion, with regression
// values pinned to a JSON fixture file on the first run and compared on
// every later run.
#include <iosfwd>
#include <string>

namespace hvp {

struct CheckSummary {
  int total = 0;    // criteria executed
  int failed = 0;   // criteria with at least one failed assertion
  int pinned = 0;   // regression values written (first run against fixtures)
};

// Runs all acceptance criteria, printing one line per criterion plus detail
// lines for failures and pinned values. `fixtures_dir` holds
// regression.json; missing values are pinned there. Returns the summary;
// callers map failed > 0 to a nonzero exit code.
CheckSummary run_acceptance(const std::string& fixtures_dir,
                            std::ostream& out);

}  // namespace hvp
