#include "tobit/types.hpp"

#include <cmath>

#include "tobit/errors.hpp"

namespace tobit {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw input_error(std::string("non-finite ") + name);
}

}  // namespace

NaturalParams to_natural(const OlsenParams& theta) {
  require_finite(theta.delta0, "delta0");
  require_finite(theta.gamma, "gamma");
  if (!(theta.gamma > 0.0)) throw input_error("gamma must be strictly positive");
  NaturalParams np;
  np.sigma = 1.0 / theta.gamma;
  np.beta0 = theta.delta0 / theta.gamma;
  np.beta.resize(theta.delta.size());
  for (std::size_t j = 0; j < theta.delta.size(); ++j) {
    require_finite(theta.delta[j], "delta");
    np.beta[j] = theta.delta[j] / theta.gamma;
  }
  return np;
}

OlsenParams from_natural(const NaturalParams& np) {
  require_finite(np.beta0, "beta0");
  require_finite(np.sigma, "sigma");
  if (!(np.sigma > 0.0)) throw input_error("sigma must be strictly positive");
  OlsenParams theta;
  theta.gamma = 1.0 / np.sigma;
  theta.delta0 = np.beta0 / np.sigma;
  theta.delta.resize(np.beta.size());
  for (std::size_t j = 0; j < np.beta.size(); ++j) {
    require_finite(np.beta[j], "beta");
    theta.delta[j] = np.beta[j] / np.sigma;
  }
  return theta;
}

NaturalParams destandardize_params(const NaturalParams& np, const Standardization& s) {
  NaturalParams out;
  out.sigma = np.sigma;
  out.beta.resize(np.beta.size());
  double shift = 0.0;
  for (std::size_t j = 0; j < np.beta.size(); ++j) {
    out.beta[j] = np.beta[j] / s.scale[j];
    shift += out.beta[j] * s.mean[j];
  }
  out.beta0 = np.beta0 - shift;
  return out;
}

}  // namespace tobit
