#pragma once
#include <cstddef>
#include <vector>

#include "tobit/dataset.hpp"
#include "tobit/solver.hpp"
#include "tobit/types.hpp"

// Internal solver entry points shared by the penalized fits, the
// linearized concave loop and the simulation drivers. Data passed here is
// already on the solver scale (standardized when the caller wants that).

namespace tobit::detail {

struct CoreResult {
  OlsenParams theta;
  double loss = 0.0;
  double objective = 0.0;
  double kkt = 0.0;
  int cycles = 0;
  bool converged = false;
};

// Slopes-zero fit: alternating intercept and gamma updates to tolerance.
OlsenParams null_params(const Dataset& data, const SolverConfig& config);

// lambda_w holds per-coordinate soft thresholds. sweep restricts the
// optimization to a subset of slope indices; the rest stay at their
// initial values.
CoreResult fit_core(const Dataset& data, const std::vector<double>& lambda_w,
                    const SolverConfig& config, const OlsenParams* init,
                    const std::vector<std::size_t>* sweep);

struct LsResult {
  double b0 = 0.0;
  std::vector<double> b;
  double rss = 0.0;
  double objective = 0.0;
  double kkt = 0.0;
  int cycles = 0;
  bool converged = false;
};

LsResult fit_ls_core(const Dataset& data, const std::vector<double>& lambda_w,
                     const SolverConfig& config, const LsResult* init);

// Log-spaced grid from just above `top` down to top * ratio.
std::vector<double> log_lambda_grid(double top, int n_lambda, double ratio);

}  // namespace tobit::detail
