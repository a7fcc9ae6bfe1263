#pragma once
#include <cstddef>
#include <vector>

namespace tobit {

// Parameters of the reparameterized model: delta = beta / sigma and
// gamma = 1 / sigma. The loss is jointly convex in these coordinates.
struct OlsenParams {
  double delta0 = 0.0;
  std::vector<double> delta;
  double gamma = 1.0;
};

// Parameters on the original regression scale.
struct NaturalParams {
  double beta0 = 0.0;
  std::vector<double> beta;
  double sigma = 1.0;
};

// Exact algebraic maps between the two parameterizations. Throw
// input_error when gamma or sigma is not strictly positive or any entry
// is non-finite.
NaturalParams to_natural(const OlsenParams& theta);
OlsenParams from_natural(const NaturalParams& np);

// Per-column centering and scaling, scale_j = sqrt(mean of squared
// centered values).
struct Standardization {
  std::vector<double> mean;
  std::vector<double> scale;
};

// Maps coefficients fit on standardized predictors back to the raw scale,
// preserving predictions exactly.
NaturalParams destandardize_params(const NaturalParams& np, const Standardization& s);

}  // namespace tobit
