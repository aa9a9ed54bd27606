#pragma once

#include <string>
#include <vector>

namespace divcor {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// Named invariant suites runnable from the CLI (`verify --suite NAME`) and
// reused by the acceptance harness.  "goldens" needs the path to
// golden/v1/regressions.json; the others ignore it.
std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, const std::string& golden_path = "");

}  // namespace divcor
