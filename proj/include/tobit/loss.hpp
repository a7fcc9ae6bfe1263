#pragma once
#include <vector>

#include "tobit/dataset.hpp"
#include "tobit/types.hpp"

namespace tobit {

// Negative mean log-likelihood of the reparameterized model,
//   (1/n) * sum_i { d_i [ (gamma y_i - z_i)^2 / 2 - log gamma ]
//                   + (1 - d_i) [ -log Phi(-z_i) ] }
// with z_i the linear predictor including the intercept. Convex in
// (delta0, delta, gamma).
double neg_loglik(const Dataset& data, const OlsenParams& theta);

// Gradient of neg_loglik, length p + 2, ordered (delta0, delta_1..p, gamma).
std::vector<double> grad_neg_loglik(const Dataset& data, const OlsenParams& theta);

// Hessian of neg_loglik, (p+2) x (p+2) row-major, same ordering.
// Symmetric positive semidefinite.
std::vector<double> hessian_neg_loglik(const Dataset& data, const OlsenParams& theta);

enum class PredictMode { latent, censored_mean, prob_uncensored };

// Predictions for raw (unstandardized) predictors, column-major x_new with
// n rows. latent: censor_shift + beta0 + x'beta. censored_mean: the
// conditional mean of the censored response. prob_uncensored: the
// probability the response is above the threshold.
std::vector<double> predict(const NaturalParams& np, const double* x_new, std::size_t n,
                            std::size_t p, PredictMode mode, double censor_shift);

std::vector<double> predict(const NaturalParams& np, const Dataset& data, PredictMode mode);

}  // namespace tobit
