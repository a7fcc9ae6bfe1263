#pragma once
#include <cstddef>
#include <optional>
#include <vector>

#include "tobit/dataset.hpp"
#include "tobit/penalty.hpp"
#include "tobit/types.hpp"

namespace tobit {

struct SolverConfig {
  double tol = 1e-7;      // max coordinate change per full cycle
  int max_cycles = 10000;
  bool active_set = true;
  bool standardize = true;
};

struct FitResult {
  OlsenParams theta;      // solver scale (standardized predictors when enabled)
  NaturalParams natural;  // raw predictor scale
  double objective = 0.0; // loss + penalty at theta, solver scale
  int cycles_used = 0;
  double kkt_residual = 0.0;
  bool converged = false;
  double lambda = 0.0;
  std::vector<double> weights_used;  // empty when unweighted

  std::vector<std::size_t> support() const;  // indices of nonzero slopes
};

struct PathResult {
  std::vector<double> lambdas;   // strictly decreasing
  std::vector<FitResult> fits;   // fits[k] warm-started from fits[k-1]
  double null_delta0 = 0.0;
  double null_gamma = 1.0;
};

double soft_threshold(double z, double t);

// Coordinate-descent state over a fixed dataset: cached linear predictors
// for the censored block and residuals gamma*y - z for the uncensored
// block, both updated in O(n) per committed coordinate. Update steps
// minimize the unit-curvature quadratic majorizer, so each commit can only
// decrease the penalized objective.
class CdState {
 public:
  CdState(const Dataset& data, OlsenParams init);

  // Unpenalized intercept step delta0 - l'(delta0); commits, returns the change.
  double update_delta0();
  // Soft-thresholded step for slope j with threshold lambda_w; commits,
  // returns the change.
  double update_delta(std::size_t j, double lambda_w);
  // Exact minimizer of the loss in gamma given the current slopes.
  double update_gamma();

  double loss_value() const;
  // Fresh gradient of the loss at the current parameters, length p + 2.
  std::vector<double> gradient();
  double gradient_gamma() const;

  const OlsenParams& params() const { return theta_; }
  double curvature(std::size_t j) const { return m_[j]; }

  // Cached censored-row linear predictors and uncensored residuals.
  const std::vector<double>& censored_predictor() const { return zc_; }
  const std::vector<double>& uncensored_residual() const { return ru_; }

  // Recompute cached predictors from scratch (sheds incremental rounding).
  void refresh();

  // Replace the parameters wholesale and rebuild the caches.
  void set_params(const OlsenParams& theta);

 private:
  void ensure_mills() ;

  const Dataset* data_;
  OlsenParams theta_;
  std::vector<double> m_;      // per-column curvature (1/n) sum x^2
  std::vector<double> zc_;     // linear predictor, censored rows
  std::vector<double> ru_;     // gamma*y - z, uncensored rows
  std::vector<double> gc_;     // g(-zc), censored rows
  bool mills_fresh_ = false;
  double sum_y_sq_ = 0.0;      // over uncensored rows
};

// Smallest lambda at which the all-zero slope vector is optimal.
double lambda_max(const Dataset& data, const SolverConfig& config = {});

// Weighted-lasso penalized fit. weights may be empty (all ones). init, if
// given, is on the solver scale and must match a fit of the same data.
// Non-convergence is reported through FitResult::converged.
FitResult fit_weighted_lasso(const Dataset& data, double lambda,
                             const std::vector<double>& weights, const SolverConfig& config = {},
                             const OlsenParams* init = nullptr);

FitResult fit_lasso(const Dataset& data, double lambda, const SolverConfig& config = {});

// Warm-started fits over a log-spaced grid from lambda_max down to
// lambda_min_ratio * lambda_max. lambda_min_ratio <= 0 selects the default
// (0.01, or 0.05 when p > n).
PathResult fit_path(const Dataset& data, int n_lambda = 100, double lambda_min_ratio = -1.0,
                    const std::vector<double>* weights = nullptr, const SolverConfig& config = {});

// Penalized least squares on the same data with y treated as fully
// observed: (1/2n)||y - b0 - X b||^2 + P(b). scad/mcp are solved with the
// linearized reweighting loop.
FitResult fit_ls_penalized(const Dataset& data, const PenaltySpec& penalty,
                           const SolverConfig& config = {});

double ls_lambda_max(const Dataset& data, const SolverConfig& config = {});

PathResult fit_ls_path(const Dataset& data, int n_lambda = 100, double lambda_min_ratio = -1.0,
                       const SolverConfig& config = {});

}  // namespace tobit
