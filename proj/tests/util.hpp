#pragma once
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "tobit/dataset.hpp"
#include "tobit/types.hpp"

namespace testutil {

// Random left-censored regression data: Gaussian predictors, a few active
// coefficients, response censored at its own empirical q-quantile (so at
// least one row is always uncensored).
inline tobit::Dataset random_censored(std::mt19937_64& rng, std::size_t n, std::size_t p,
                                      double q, double signal = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(n * p), ystar(n);
  for (double& v : x) v = g(rng);
  const double beta0 = g(rng);
  std::vector<double> beta(p, 0.0);
  for (std::size_t j = 0; j < p && j < 3; ++j) beta[j] = signal * g(rng);
  for (std::size_t i = 0; i < n; ++i) {
    double z = beta0;
    for (std::size_t j = 0; j < p; ++j) z += x[j * n + i] * beta[j];
    ystar[i] = z + g(rng);
  }
  std::vector<double> sorted = ystar;
  std::size_t k = static_cast<std::size_t>(std::llround(q * static_cast<double>(n)));
  k = std::max<std::size_t>(1, std::min(k, n - 1));
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
  const double c = sorted[k - 1];
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::max(ystar[i] - c, 0.0);
  return tobit::Dataset::from_shifted(std::move(x), n, p, std::move(y), c);
}

// Fully uncensored data (every response strictly positive).
inline tobit::Dataset random_uncensored(std::mt19937_64& rng, std::size_t n, std::size_t p) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(n * p), y(n);
  for (double& v : x) v = g(rng);
  for (std::size_t i = 0; i < n; ++i) {
    double z = 10.0;
    for (std::size_t j = 0; j < p && j < 3; ++j) z += x[j * n + i];
    y[i] = z + 0.8 * g(rng);
    if (y[i] <= 0.1) y[i] = 0.1;
  }
  return tobit::Dataset::from_shifted(std::move(x), n, p, std::move(y), 0.0);
}

}  // namespace testutil
