#pragma once

#include <string>
#include <vector>

namespace spinhall::checks {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Built-in invariant suite covering the model, basis, berry, semiclassics
/// and transport layers. Deterministic (fixed seeds).
std::vector<CheckResult> run_all();

}  // namespace spinhall::checks
