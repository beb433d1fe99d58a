#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace utm {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20260101;
  int threads = 0;
  std::vector<int> only;  // empty runs every criterion
};

/// Runs the acceptance criteria, printing one PASS/FAIL line per criterion to `log`.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& log);

}  // namespace utm
