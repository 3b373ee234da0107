#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ordloc::checks {

enum class Suite { calibration, dominance, gpn, all };
enum class Budget { quick, full };

Suite suite_from_name(const std::string& name);
Budget budget_from_name(const std::string& name);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // observed vs expected when failing
};

struct CheckReport {
  std::vector<CheckResult> results;

  bool all_pass() const;
  std::string to_text() const;
  void append(CheckReport other);
};

// Invariant suites over the built-in family/loss pairs. quick shrinks the
// replication count and grids; full runs the suites at reporting scale.
CheckReport calibration_suite(Budget budget);
CheckReport dominance_suite(Budget budget, std::uint64_t seed);
CheckReport gpn_suite(Budget budget, std::uint64_t seed);

CheckReport run_check(Suite suite, Budget budget, std::uint64_t seed = 42);

}  // namespace ordloc::checks
