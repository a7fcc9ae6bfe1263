#pragma once
#include <cstddef>
#include <vector>

#include "tobit/dataset.hpp"
#include "tobit/penalty.hpp"
#include "tobit/solver.hpp"

namespace tobit {

struct LlaConfig {
  enum class Init { zero, lasso, explicit_params };
  int steps = 3;
  Init init = Init::zero;
  double lasso_lambda = -1.0;   // Init::lasso; <= 0 means reuse the penalty lambda
  OlsenParams explicit_init;     // Init::explicit_params, solver scale
};

struct LlaResult {
  FitResult fit;  // final step
  std::vector<std::vector<std::size_t>> support_history;  // one entry per step
  std::vector<double> objective_history;  // folded objective per step, solver scale
};

// Solves the folded-concave problem by repeated weighted-lasso fits with
// adaptive weights recomputed from the previous iterate. Zero
// initialization makes step one the plain penalized fit at the same
// lambda. Inner solves warm-start from the previous iterate, so the
// folded objective is nonincreasing across steps.
LlaResult fit_folded_concave(const Dataset& data, const PenaltySpec& penalty,
                             const LlaConfig& lla = {}, const SolverConfig& solver = {});

// Unpenalized fit restricted to the given slope coordinates (0-based);
// all other slopes are exactly zero. The restricted gradient at the
// solution is driven below 1e-8.
FitResult fit_oracle(const Dataset& data, const std::vector<std::size_t>& support,
                     const SolverConfig& solver = {});

}  // namespace tobit
