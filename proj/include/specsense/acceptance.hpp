#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace specsense {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::vector<int> only;  // empty: every criterion
  std::uint64_t seed = 20190601;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// "PASS  3  title (detail) [1.23 s]"
std::string format_criterion(const CriterionResult& r);

}  // namespace specsense
