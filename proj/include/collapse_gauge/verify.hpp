#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace collapse_gauge {

struct CheckResult {
  std::string module;
  std::string name;
  int instances = 0;
  bool passed = false;
  std::string detail;  // worst observed discrepancy or first failing instance
};

/// Property suite behind the `verify` command: every invariant of the core,
/// lambda, spectrum and montecarlo modules on reduced sample sizes. All
/// randomness derives from `seed`, so the table is reproducible.
std::vector<CheckResult> run_verification(std::uint64_t seed);

void print_verification_table(const std::vector<CheckResult>& results, std::ostream& os);

}  // namespace collapse_gauge
