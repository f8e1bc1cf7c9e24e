#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lorentz {

enum class Level { fast, full };
std::string to_string(Level l);
Level parse_level(const std::string& s);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double margin = 0.0;    // smallest slack over all checks; negative on failure
  std::string detail;
  double wall_s = 0.0;
  double budget_s = 0.0;  // stated runtime limit
};

/// Ids 1..10.
std::vector<int> criterion_ids();
CriterionResult run_criterion(int id, Level level, std::uint64_t seed = 42);
std::vector<CriterionResult> validate_suite(Level level, std::uint64_t seed = 42);

/// One line: "criterion N PASS|FAIL name margin=... time=...s detail".
std::string format_result(const CriterionResult& r);

}  // namespace lorentz
