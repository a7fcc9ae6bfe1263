#include "tobit/loss.hpp"

#include <cmath>
#include <string>

#include "tobit/errors.hpp"
#include "tobit/kernels.hpp"
#include "tobit/special.hpp"

namespace tobit {

namespace {

void validate(const Dataset& data, const OlsenParams& theta) {
  if (theta.delta.size() != data.n_cols()) throw input_error("parameter/data shape mismatch");
  if (!std::isfinite(theta.delta0) || !std::isfinite(theta.gamma)) {
    throw input_error("non-finite parameters");
  }
  for (double d : theta.delta) {
    if (!std::isfinite(d)) throw input_error("non-finite parameters");
  }
  if (!(theta.gamma > 0.0)) throw input_error("gamma must be strictly positive");
}

// Linear predictor z_i = delta0 + x_i' delta over all rows.
std::vector<double> linear_predictor(const Dataset& data, const OlsenParams& theta) {
  const std::size_t n = data.n_rows();
  std::vector<double> z(n, theta.delta0);
  for (std::size_t j = 0; j < data.n_cols(); ++j) {
    if (theta.delta[j] != 0.0) kernels::axpy(theta.delta[j], data.col(j), z.data(), n);
  }
  return z;
}

}  // namespace

double neg_loglik(const Dataset& data, const OlsenParams& theta) {
  validate(data, theta);
  const std::size_t n = data.n_rows();
  const std::size_t n0 = data.n_censored();
  const std::vector<double> z = linear_predictor(data, theta);
  const std::vector<double>& y = data.y();

  double acc = 0.0;
  for (std::size_t i = 0; i < n0; ++i) acc -= norm_logcdf(-z[i]);
  const double log_gamma = std::log(theta.gamma);
  for (std::size_t i = n0; i < n; ++i) {
    const double r = theta.gamma * y[i] - z[i];
    acc += 0.5 * r * r - log_gamma;
  }
  return acc / static_cast<double>(n);
}

std::vector<double> grad_neg_loglik(const Dataset& data, const OlsenParams& theta) {
  validate(data, theta);
  const std::size_t n = data.n_rows();
  const std::size_t n0 = data.n_censored();
  const std::size_t n1 = data.n_uncensored();
  const std::size_t p = data.n_cols();
  const std::vector<double> z = linear_predictor(data, theta);
  const std::vector<double>& y = data.y();

  // Per-row scores: censored rows contribute g(-z_i), uncensored -(gamma y - z).
  std::vector<double> score(n);
  for (std::size_t i = 0; i < n0; ++i) score[i] = inv_mills(-z[i]);
  for (std::size_t i = n0; i < n; ++i) score[i] = -(theta.gamma * y[i] - z[i]);

  std::vector<double> grad(p + 2, 0.0);
  const double invn = 1.0 / static_cast<double>(n);
  grad[0] = kernels::sum(score.data(), n) * invn;
  for (std::size_t j = 0; j < p; ++j) {
    grad[j + 1] = kernels::dot(score.data(), data.col(j), n) * invn;
  }
  // d/dgamma: -(1/n) [ n1/gamma - sum_unc y_i (gamma y_i - z_i) ].
  double acc = 0.0;
  for (std::size_t i = n0; i < n; ++i) acc += y[i] * (theta.gamma * y[i] - z[i]);
  grad[p + 1] = (acc - static_cast<double>(n1) / theta.gamma) * invn;
  return grad;
}

std::vector<double> hessian_neg_loglik(const Dataset& data, const OlsenParams& theta) {
  validate(data, theta);
  const std::size_t n = data.n_rows();
  const std::size_t n0 = data.n_censored();
  const std::size_t n1 = data.n_uncensored();
  const std::size_t p = data.n_cols();
  const std::size_t dim = p + 2;
  const std::vector<double> z = linear_predictor(data, theta);
  const std::vector<double>& y = data.y();

  // Row weights: h(-z_i) for censored rows, 1 for uncensored.
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n0; ++i) w[i] = hazard(-z[i]);
  for (std::size_t i = n0; i < n; ++i) w[i] = 1.0;

  std::vector<double> hess(dim * dim, 0.0);
  const double invn = 1.0 / static_cast<double>(n);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return hess[r * dim + c]; };

  // Augmented design: column 0 is the intercept, columns 1..p are x,
  // column p+1 is -y (zero on censored rows).
  auto aug_col = [&](std::size_t k, std::vector<double>& buf) -> const double* {
    if (k == 0) {
      buf.assign(n, 1.0);
      return buf.data();
    }
    if (k <= p) return data.col(k - 1);
    buf.resize(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = -y[i];
    return buf.data();
  };

  std::vector<double> bufa, bufb, wa(n);
  for (std::size_t a = 0; a < dim; ++a) {
    const double* ca = aug_col(a, bufa);
    for (std::size_t i = 0; i < n; ++i) wa[i] = w[i] * ca[i];
    for (std::size_t b = a; b < dim; ++b) {
      const double* cb = aug_col(b, bufb);
      const double v = kernels::dot(wa.data(), cb, n) * invn;
      at(a, b) = v;
      at(b, a) = v;
    }
  }
  at(dim - 1, dim - 1) += static_cast<double>(n1) / (theta.gamma * theta.gamma) * invn;
  return hess;
}

std::vector<double> predict(const NaturalParams& np, const double* x_new, std::size_t n,
                            std::size_t p, PredictMode mode, double censor_shift) {
  if (np.beta.size() != p) throw input_error("predictor count mismatch: model has " +
                                             std::to_string(np.beta.size()) + ", data has " +
                                             std::to_string(p));
  if (!(np.sigma > 0.0)) throw input_error("sigma must be strictly positive");
  std::vector<double> m(n, np.beta0);
  for (std::size_t j = 0; j < p; ++j) {
    if (np.beta[j] != 0.0) kernels::axpy(np.beta[j], x_new + j * n, m.data(), n);
  }
  std::vector<double> out(n);
  switch (mode) {
    case PredictMode::latent:
      for (std::size_t i = 0; i < n; ++i) out[i] = censor_shift + m[i];
      break;
    case PredictMode::censored_mean:
      for (std::size_t i = 0; i < n; ++i) {
        const double s = m[i] / np.sigma;
        out[i] = censor_shift + norm_cdf(s) * m[i] + np.sigma * norm_pdf(s);
      }
      break;
    case PredictMode::prob_uncensored:
      for (std::size_t i = 0; i < n; ++i) out[i] = norm_cdf(m[i] / np.sigma);
      break;
  }
  return out;
}

std::vector<double> predict(const NaturalParams& np, const Dataset& data, PredictMode mode) {
  return predict(np, data.col(0), data.n_rows(), data.n_cols(), mode, data.censor_shift());
}

}  // namespace tobit
