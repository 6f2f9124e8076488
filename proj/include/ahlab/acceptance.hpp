#pragma once

#include <string>
#include <vector>

namespace ahlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
  double seconds = 0.0;
};

constexpr int kAcceptanceCriteria = 10;

/// Runs one acceptance criterion (1..10). Exceptions become a failed result.
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_acceptance();

/// "[PASS] 3 decay fitting (0.01 s): details"
std::string format_line(const CriterionResult& r);

}  // namespace ahlab
