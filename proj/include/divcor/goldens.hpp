#pragma once

#include <functional>
#include <map>
#include <string>

namespace divcor {

// Regression-pinned values: computed once through the brute-force/oracle
// pipeline, stored in golden/v1/regressions.json, asserted stable thereafter.
struct GoldenSet {
  std::map<std::string, double> values;
};

// Runs the fixed regression configurations (takes a few minutes; the
// discarded-mass trend spans X = 2^20 .. 2^26).
GoldenSet compute_goldens(const std::function<void(const std::string&)>& progress = {});

GoldenSet load_goldens(const std::string& path);
void save_goldens(const GoldenSet& g, const std::string& path);

struct GoldenMismatch {
  std::string name;
  double expected;
  double actual;
};

// Relative comparison at 1e-9 (absolute for values below 1e-9).
std::vector<GoldenMismatch> compare_goldens(const GoldenSet& expected,
                                            const GoldenSet& actual);

}  // namespace divcor
