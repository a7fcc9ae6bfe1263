#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace tobit {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Numerical property suite: derivative checks against finite differences,
// the per-coordinate quadratic upper bound, and the special-function
// range/bound sweeps. Deterministic for a fixed seed.
std::vector<CheckResult> run_numeric_checks(std::uint64_t seed = 12345);

}  // namespace tobit
