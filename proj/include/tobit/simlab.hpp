#pragma once
#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "tobit/dataset.hpp"
#include "tobit/loss.hpp"
#include "tobit/solver.hpp"
#include "tobit/types.hpp"

namespace tobit {

enum class CovarianceKind { independent, cs, ar1 };

struct SimDesign {
  std::size_t n_train = 100;
  std::size_t n_test = 5000;
  std::size_t p = 50;
  CovarianceKind covariance = CovarianceKind::independent;
  double rho = 0.0;
  double q = 0.125;  // censored fraction, in (0, 1)
  double beta0 = 3.0;
  std::vector<double> beta = {5.0, 1.0, 0.5, -2.0, 0.1};  // padded with zeros to p
  double sigma = 1.0;
  int replications = 20;
  std::uint64_t seed = 1;

  void validate() const;
  std::vector<double> full_beta() const;          // length p
  std::vector<std::size_t> true_support() const;  // nonzero slots of full_beta
};

// Deterministic stream seed for (seed, stream) pairs.
std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t stream);

// Dense p x p covariance of the requested structure (column-major).
// cs: unit diagonal, rho off-diagonal; ar1: rho^|i-j|.
std::vector<double> build_covariance(CovarianceKind kind, double rho, std::size_t p);

struct GenResult {
  Dataset train;
  Dataset test;
  NaturalParams truth;  // raw scale
  double c_q;           // empirical censoring threshold
};

// Draws one replication: Gaussian predictors with the designed covariance,
// latent responses, then censoring at the pooled empirical q-quantile.
// Fully determined by (design.seed, rep_index).
GenResult gen_dataset(const SimDesign& design, int rep_index);

enum class Method { tobit_lasso, tobit_scad, ls_lasso, ls_scad, ols, ols_oracle };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct CvResult {
  double best_lambda = 0.0;
  std::vector<double> lambdas;  // decreasing grid
  std::vector<double> cv_mse;   // mean held-out MSE per lambda
};

struct CvOptions {
  int k = 5;
  int n_lambda = 100;
  SolverConfig solver;
  PredictMode mode = PredictMode::censored_mean;  // tobit methods only
  double scad_a = 3.0;                            // tobit_scad; ls_scad uses 3.7
  PenaltyFamily concave_family = PenaltyFamily::scad;  // tobit_scad method: scad or mcp
  std::uint64_t fold_seed = 0;
  const std::vector<int>* fold_ids = nullptr;     // optional explicit assignment
  const std::vector<double>* lambda_grid = nullptr;
};

// Stratified k-fold tuning curve; ties broken toward the larger lambda.
// Throws data_error when a training split loses every uncensored row.
CvResult kfold_cv(const Dataset& data, Method method, const CvOptions& opts = {});

struct Metrics {
  double mse = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double fp = 0.0;
  double fn = 0.0;
};

// Test MSE against the censored response plus estimation and selection
// losses versus the generating parameters.
Metrics evaluate(const NaturalParams& fit, const Dataset& test, const NaturalParams& truth,
                 const std::vector<std::size_t>& selected, PredictMode mode);

struct MethodSummary {
  Method method;
  Metrics mean;
  Metrics se;
};

struct ExperimentTable {
  std::vector<MethodSummary> rows;
  std::string csv() const;     // columns: method,metric,mean,se
  std::string pretty() const;  // aligned table
};

struct ExperimentOptions {
  int threads = 1;
  PredictMode mode = PredictMode::censored_mean;
  int cv_folds = 5;
  int n_lambda = 100;
  SolverConfig solver;
};

// Runs the replication loop: per replication, tune each method by k-fold
// CV, refit on the training split and score on the test split.
// Reproducible down to the byte for a fixed (design, seed), independent of
// the thread count.
ExperimentTable run_experiment(const SimDesign& design, const std::vector<Method>& methods,
                               const ExperimentOptions& opts = {});

}  // namespace tobit
