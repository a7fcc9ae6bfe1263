#include "tobit/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "tobit/detail/solver_core.hpp"
#include "tobit/errors.hpp"
#include "tobit/kernels.hpp"
#include "tobit/loss.hpp"
#include "tobit/special.hpp"

namespace tobit {

double soft_threshold(double z, double t) {
  if (t < 0.0) throw input_error("soft_threshold requires t >= 0");
  const double mag = std::fabs(z) - t;
  if (mag <= 0.0) return 0.0;
  return z > 0.0 ? mag : -mag;
}

std::vector<std::size_t> FitResult::support() const {
  std::vector<std::size_t> s;
  for (std::size_t j = 0; j < theta.delta.size(); ++j) {
    if (theta.delta[j] != 0.0) s.push_back(j);
  }
  return s;
}

// ---------------------------------------------------------------------------
// CdState

CdState::CdState(const Dataset& data, OlsenParams init) : data_(&data), theta_(std::move(init)) {
  if (theta_.delta.size() != data.n_cols()) throw input_error("init size mismatch");
  if (!(theta_.gamma > 0.0)) throw input_error("gamma must be strictly positive");
  const std::size_t n = data.n_rows();
  const std::size_t p = data.n_cols();
  m_.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    m_[j] = kernels::sum_sq(data.col(j), n) / static_cast<double>(n);
    if (!(m_[j] > 0.0)) throw data_error("column " + std::to_string(j + 1) + " is identically zero");
  }
  sum_y_sq_ = kernels::sum_sq(data.y_uncensored(), data.n_uncensored());
  if (!(sum_y_sq_ > 0.0)) throw data_error("no positive uncensored response");
  refresh();
}

void CdState::refresh() {
  const std::size_t n = data_->n_rows();
  const std::size_t n0 = data_->n_censored();
  const std::size_t n1 = data_->n_uncensored();
  std::vector<double> z(n, theta_.delta0);
  for (std::size_t j = 0; j < data_->n_cols(); ++j) {
    if (theta_.delta[j] != 0.0) kernels::axpy(theta_.delta[j], data_->col(j), z.data(), n);
  }
  zc_.assign(z.begin(), z.begin() + n0);
  ru_.resize(n1);
  const double* yu = data_->y_uncensored();
  for (std::size_t i = 0; i < n1; ++i) ru_[i] = theta_.gamma * yu[i] - z[n0 + i];
  gc_.resize(n0);
  mills_fresh_ = false;
}

void CdState::set_params(const OlsenParams& theta) {
  if (theta.delta.size() != theta_.delta.size()) throw input_error("parameter size mismatch");
  if (!(theta.gamma > 0.0)) throw input_error("gamma must be strictly positive");
  theta_ = theta;
  refresh();
}

void CdState::ensure_mills() {
  if (mills_fresh_) return;
  for (std::size_t i = 0; i < zc_.size(); ++i) gc_[i] = inv_mills(-zc_[i]);
  mills_fresh_ = true;
}

double CdState::update_delta0() {
  ensure_mills();
  const std::size_t n0 = zc_.size();
  const std::size_t n1 = ru_.size();
  const double n = static_cast<double>(n0 + n1);
  const double grad = (kernels::sum(gc_.data(), n0) - kernels::sum(ru_.data(), n1)) / n;
  if (grad == 0.0) return 0.0;
  const double step = -grad;  // intercept curvature is exactly 1
  theta_.delta0 += step;
  for (double& z : zc_) z += step;
  for (double& r : ru_) r -= step;
  mills_fresh_ = false;
  return step;
}

double CdState::update_delta(std::size_t j, double lambda_w) {
  ensure_mills();
  const std::size_t n0 = zc_.size();
  const std::size_t n1 = ru_.size();
  const double n = static_cast<double>(n0 + n1);
  const double* xc = data_->col(j);
  const double* xu = xc + n0;
  const double grad =
      (kernels::dot(gc_.data(), xc, n0) - kernels::dot(ru_.data(), xu, n1)) / n;
  const double mj = m_[j];
  const double updated = soft_threshold(mj * theta_.delta[j] - grad, lambda_w) / mj;
  const double step = updated - theta_.delta[j];
  if (step != 0.0) {
    theta_.delta[j] = updated;
    kernels::axpy(step, xc, zc_.data(), n0);
    kernels::axpy(-step, xu, ru_.data(), n1);
    mills_fresh_ = false;
  }
  return step;
}

double CdState::update_gamma() {
  const std::size_t n1 = ru_.size();
  const double* yu = data_->y_uncensored();
  // sum_unc y*z recovered from the residuals: y'z = gamma*y'y - y'r.
  const double b = theta_.gamma * sum_y_sq_ - kernels::dot(yu, ru_.data(), n1);
  const double c = static_cast<double>(n1);
  const double root = (b + std::sqrt(b * b + 4.0 * sum_y_sq_ * c)) / (2.0 * sum_y_sq_);
  const double step = root - theta_.gamma;
  if (step != 0.0) {
    theta_.gamma = root;
    kernels::axpy(step, yu, ru_.data(), n1);
  }
  return step;
}

double CdState::loss_value() const {
  const std::size_t n0 = zc_.size();
  const std::size_t n1 = ru_.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n0; ++i) acc -= norm_logcdf(-zc_[i]);
  const double log_gamma = std::log(theta_.gamma);
  for (std::size_t i = 0; i < n1; ++i) acc += 0.5 * ru_[i] * ru_[i] - log_gamma;
  return acc / static_cast<double>(n0 + n1);
}

double CdState::gradient_gamma() const {
  const std::size_t n1 = ru_.size();
  const double* yu = data_->y_uncensored();
  const double n = static_cast<double>(zc_.size() + n1);
  return (kernels::dot(yu, ru_.data(), n1) - static_cast<double>(n1) / theta_.gamma) / n;
}

std::vector<double> CdState::gradient() {
  ensure_mills();
  const std::size_t n0 = zc_.size();
  const std::size_t n1 = ru_.size();
  const std::size_t p = data_->n_cols();
  const double n = static_cast<double>(n0 + n1);
  std::vector<double> grad(p + 2);
  grad[0] = (kernels::sum(gc_.data(), n0) - kernels::sum(ru_.data(), n1)) / n;
  for (std::size_t j = 0; j < p; ++j) {
    const double* xc = data_->col(j);
    grad[j + 1] = (kernels::dot(gc_.data(), xc, n0) - kernels::dot(ru_.data(), xc + n0, n1)) / n;
  }
  grad[p + 1] = gradient_gamma();
  return grad;
}

// ---------------------------------------------------------------------------
// Core solver on solver-scale data

namespace detail {

OlsenParams null_params(const Dataset& data, const SolverConfig& config) {
  const std::size_t n1 = data.n_uncensored();
  const double* yu = data.y_uncensored();
  const double mean = kernels::sum(yu, n1) / static_cast<double>(n1);
  const double msq = kernels::sum_sq(yu, n1) / static_cast<double>(n1);
  const double var = msq - mean * mean;
  const double gamma0 = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0 / std::sqrt(msq);
  OlsenParams theta;
  theta.delta0 = 0.0;
  theta.delta.assign(data.n_cols(), 0.0);
  theta.gamma = gamma0;
  CdState st(data, theta);
  for (int it = 0; it < config.max_cycles; ++it) {
    double chg = std::fabs(st.update_delta0());
    chg = std::max(chg, std::fabs(st.update_gamma()));
    if (chg < config.tol) break;
  }
  return st.params();
}

namespace {

// Damped Newton step on the smooth restricted problem: the active slopes
// with their current signs, the intercept and gamma. Coordinate descent
// stalls when y is nearly collinear with the fitted predictor (strong
// signals), which leaves a soft direction mixing gamma with the slopes; a
// second-order step removes it. Returns false when no descent was found.
bool newton_polish(CdState& st, const Dataset& data, const std::vector<double>& lambda_w) {
  const OlsenParams th = st.params();
  const std::size_t n = data.n_rows();
  const std::size_t n0 = data.n_censored();
  const std::size_t n1 = data.n_uncensored();
  const std::size_t p = data.n_cols();

  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < p; ++j) {
    if (th.delta[j] != 0.0) active.push_back(j);
  }
  const std::size_t m = active.size() + 2;  // intercept, active slopes, gamma

  const std::vector<double> grad = st.gradient();
  Eigen::VectorXd g(m);
  g(0) = grad[0];
  for (std::size_t i = 0; i < active.size(); ++i) {
    const std::size_t j = active[i];
    g(1 + i) = grad[j + 1] + (th.delta[j] > 0.0 ? lambda_w[j] : -lambda_w[j]);
  }
  g(m - 1) = grad[p + 1];

  const std::vector<double>& zc = st.censored_predictor();
  std::vector<double> w(n0);
  for (std::size_t i = 0; i < n0; ++i) w[i] = hazard(-zc[i]);
  const double* yu = data.y_uncensored();

  auto column = [&](std::size_t a) -> const double* {
    return a == 0 ? nullptr : data.col(active[a - 1]);  // nullptr marks the intercept
  };
  Eigen::MatrixXd H(m, m);
  const double invn = 1.0 / static_cast<double>(n);
  for (std::size_t a = 0; a + 1 < m; ++a) {
    const double* ca = column(a);
    for (std::size_t b = a; b + 1 < m; ++b) {
      const double* cb = column(b);
      double acc = 0.0;
      for (std::size_t i = 0; i < n0; ++i) {
        acc += w[i] * (ca ? ca[i] : 1.0) * (cb ? cb[i] : 1.0);
      }
      for (std::size_t i = n0; i < n; ++i) acc += (ca ? ca[i] : 1.0) * (cb ? cb[i] : 1.0);
      H(a, b) = H(b, a) = acc * invn;
    }
    double accg = 0.0;
    for (std::size_t i = 0; i < n1; ++i) accg += (ca ? ca[n0 + i] : 1.0) * yu[i];
    H(a, m - 1) = H(m - 1, a) = -accg * invn;
  }
  H(m - 1, m - 1) =
      (kernels::sum_sq(yu, n1) + static_cast<double>(n1) / (th.gamma * th.gamma)) * invn;
  for (std::size_t a = 0; a < m; ++a) H(a, a) += 1e-12;

  const Eigen::VectorXd dir = H.ldlt().solve(-g);
  if (!dir.allFinite()) return false;

  auto penalty = [&](const OlsenParams& t) {
    double acc = 0.0;
    for (std::size_t j = 0; j < p; ++j) acc += lambda_w[j] * std::fabs(t.delta[j]);
    return acc;
  };
  const double base = st.loss_value() + penalty(th);

  double t = 1.0;
  for (int bt = 0; bt < 40; ++bt, t *= 0.5) {
    OlsenParams cand = th;
    cand.delta0 += t * dir(0);
    bool ok = true;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const std::size_t j = active[i];
      cand.delta[j] += t * dir(1 + i);
      if (cand.delta[j] * th.delta[j] <= 0.0) {  // sign flip leaves the orthant
        ok = false;
        break;
      }
    }
    cand.gamma += t * dir(m - 1);
    if (!ok || !(cand.gamma > 0.0)) continue;
    const double obj = neg_loglik(data, cand) + penalty(cand);
    if (obj < base - 1e-15) {
      st.set_params(cand);
      return true;
    }
  }
  return false;
}

double kkt_from_gradient(const std::vector<double>& grad, const OlsenParams& theta,
                         const std::vector<double>& lambda_w,
                         const std::vector<std::size_t>* sweep) {
  const std::size_t p = theta.delta.size();
  double r = std::max(std::fabs(grad[0]), std::fabs(grad[p + 1]));
  auto violation = [&](std::size_t j) {
    const double gj = grad[j + 1];
    const double d = theta.delta[j];
    if (d != 0.0) return std::fabs(gj + (d > 0.0 ? lambda_w[j] : -lambda_w[j]));
    return std::max(0.0, std::fabs(gj) - lambda_w[j]);
  };
  if (sweep) {
    for (std::size_t j : *sweep) r = std::max(r, violation(j));
  } else {
    for (std::size_t j = 0; j < p; ++j) r = std::max(r, violation(j));
  }
  return r;
}

}  // namespace

// data is already on the solver scale. lambda_w holds the per-coordinate
// soft thresholds. sweep restricts optimization to a subset of slopes
// (the others stay at their initial values, zero for oracle-style fits).
CoreResult fit_core(const Dataset& data, const std::vector<double>& lambda_w,
                    const SolverConfig& config, const OlsenParams* init,
                    const std::vector<std::size_t>* sweep) {
  const std::size_t p = data.n_cols();
  OlsenParams start = init ? *init : null_params(data, config);
  CdState st(data, std::move(start));

  std::vector<std::size_t> all;
  if (!sweep) {
    all.resize(p);
    for (std::size_t j = 0; j < p; ++j) all[j] = j;
  }
  const std::vector<std::size_t>& coords = sweep ? *sweep : all;

  const bool use_active = config.active_set && !sweep;
  enum class Phase { full, active };
  Phase phase = Phase::full;
  int full_sweeps = 0;
  std::vector<std::size_t> active;

  CoreResult out;
#ifndef NDEBUG
  auto objective_now = [&]() {
    double pen = 0.0;
    for (std::size_t j = 0; j < p; ++j) pen += lambda_w[j] * std::fabs(st.params().delta[j]);
    return st.loss_value() + pen;
  };
  double prev_obj = objective_now();
#endif

  // Once the nonzero pattern stops changing, interleave Newton steps on
  // the active orthant: sweeps alone crawl when y is nearly collinear
  // with the fitted predictor and the iterate has to travel along the
  // soft slope/gamma direction.
  std::vector<std::size_t> prev_support;
  std::vector<std::size_t> cur_support;

  int cycles = 0;
  while (cycles < config.max_cycles) {
    const std::vector<std::size_t>& set = (phase == Phase::active) ? active : coords;
    double maxchg = std::fabs(st.update_delta0());
    for (std::size_t j : set) {
      maxchg = std::max(maxchg, std::fabs(st.update_delta(j, lambda_w[j])));
    }
    maxchg = std::max(maxchg, std::fabs(st.update_gamma()));
    ++cycles;

    cur_support.clear();
    for (std::size_t j = 0; j < p; ++j) {
      if (st.params().delta[j] != 0.0) cur_support.push_back(j);
    }
    const bool support_stable = cur_support == prev_support;
    prev_support = cur_support;
    if (maxchg >= config.tol && support_stable && cycles % 4 == 0 &&
        cycles < config.max_cycles) {
      if (newton_polish(st, data, lambda_w)) ++cycles;
    }
#ifndef NDEBUG
    const double obj = objective_now();
    assert(obj <= prev_obj + 1e-10);
    prev_obj = obj;
#endif

    if (phase == Phase::active) {
      if (maxchg < config.tol) phase = Phase::full;  // verification sweep next
      continue;
    }

    ++full_sweeps;
    if (maxchg < config.tol) {
      st.refresh();
      double kkt = kkt_from_gradient(st.gradient(), st.params(), lambda_w, sweep);
      // Polish the stalled orthant with Newton steps before giving the
      // sweeps another go; this handles the soft gamma/slope direction.
      while (kkt > 10.0 * config.tol && cycles < config.max_cycles) {
        if (!newton_polish(st, data, lambda_w)) break;
        ++cycles;
        kkt = kkt_from_gradient(st.gradient(), st.params(), lambda_w, sweep);
      }
      if (kkt <= 10.0 * config.tol) {
        out.kkt = kkt;
        out.converged = true;
        break;
      }
      // Stationarity not yet certified; keep sweeping the full set.
      continue;
    }
    if (use_active && full_sweeps >= 2) {
      active.clear();
      for (std::size_t j = 0; j < p; ++j) {
        if (st.params().delta[j] != 0.0) active.push_back(j);
      }
      phase = Phase::active;
    }
  }

  if (!out.converged) {
    st.refresh();
    out.kkt = kkt_from_gradient(st.gradient(), st.params(), lambda_w, sweep);
  }
  out.theta = st.params();
  out.loss = st.loss_value();
  double pen = 0.0;
  for (std::size_t j = 0; j < p; ++j) pen += lambda_w[j] * std::fabs(out.theta.delta[j]);
  out.objective = out.loss + pen;
  out.cycles = cycles;
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public fits

namespace {

std::vector<double> thresholds(double lambda, const std::vector<double>& weights, std::size_t p) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw input_error("lambda must be >= 0");
  std::vector<double> lw(p, lambda);
  if (!weights.empty()) {
    if (weights.size() != p) throw input_error("weight vector length mismatch");
    for (std::size_t j = 0; j < p; ++j) {
      if (!(weights[j] >= 0.0)) throw input_error("weights must be nonnegative");
      lw[j] = lambda * weights[j];
    }
  }
  return lw;
}

FitResult package(const detail::CoreResult& core, double lambda, std::vector<double> weights,
                  const Standardization* std_info) {
  FitResult fr;
  fr.theta = core.theta;
  NaturalParams nat = to_natural(core.theta);
  fr.natural = std_info ? destandardize_params(nat, *std_info) : nat;
  fr.objective = core.objective;
  fr.cycles_used = core.cycles;
  fr.kkt_residual = core.kkt;
  fr.converged = core.converged;
  fr.lambda = lambda;
  fr.weights_used = std::move(weights);
  return fr;
}

}  // namespace

double lambda_max(const Dataset& data, const SolverConfig& config) {
  Dataset work = data;
  if (config.standardize) standardize_in_place(work);
  CdState st(work, detail::null_params(work, config));
  std::vector<double> grad = st.gradient();
  double top = 0.0;
  for (std::size_t j = 0; j < work.n_cols(); ++j) top = std::max(top, std::fabs(grad[j + 1]));
  return top;
}

FitResult fit_weighted_lasso(const Dataset& data, double lambda,
                             const std::vector<double>& weights, const SolverConfig& config,
                             const OlsenParams* init) {
  Dataset work = data;
  Standardization std_info;
  if (config.standardize) std_info = standardize_in_place(work);
  const std::vector<double> lw = thresholds(lambda, weights, work.n_cols());
  detail::CoreResult core = detail::fit_core(work, lw, config, init, nullptr);
  return package(core, lambda, weights, config.standardize ? &std_info : nullptr);
}

FitResult fit_lasso(const Dataset& data, double lambda, const SolverConfig& config) {
  return fit_weighted_lasso(data, lambda, {}, config);
}

namespace detail {

std::vector<double> log_lambda_grid(double top, int n_lambda, double ratio) {
  std::vector<double> grid(n_lambda);
  // Nudge the top so the first fit sits exactly at the null model even
  // after the intercept and scale re-converge under it.
  const double lo = std::log(top * ratio);
  const double hi = std::log(top * (1.0 + 1e-6));
  for (int k = 0; k < n_lambda; ++k) {
    const double f = n_lambda == 1 ? 0.0 : static_cast<double>(k) / (n_lambda - 1);
    grid[k] = std::exp(hi + f * (lo - hi));
  }
  return grid;
}

}  // namespace detail

PathResult fit_path(const Dataset& data, int n_lambda, double lambda_min_ratio,
                    const std::vector<double>* weights, const SolverConfig& config) {
  if (n_lambda < 1) throw input_error("n_lambda must be >= 1");
  Dataset work = data;
  Standardization std_info;
  if (config.standardize) std_info = standardize_in_place(work);
  const std::size_t p = work.n_cols();
  if (lambda_min_ratio <= 0.0) {
    lambda_min_ratio = (p > work.n_rows()) ? 0.05 : 0.01;
  }

  OlsenParams null_theta = detail::null_params(work, config);
  CdState null_state(work, null_theta);
  std::vector<double> grad = null_state.gradient();
  double top = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    const double w = weights ? (*weights)[j] : 1.0;
    if (w > 0.0) top = std::max(top, std::fabs(grad[j + 1]) / w);
  }
  top = std::max(top, 1e-12);

  PathResult path;
  path.null_delta0 = null_theta.delta0;
  path.null_gamma = null_theta.gamma;
  path.lambdas = detail::log_lambda_grid(top, n_lambda, lambda_min_ratio);
  path.fits.reserve(n_lambda);

  OlsenParams warm = null_theta;
  const std::vector<double> wvec = weights ? *weights : std::vector<double>{};
  for (double lam : path.lambdas) {
    const std::vector<double> lw = thresholds(lam, wvec, p);
    detail::CoreResult core = detail::fit_core(work, lw, config, &warm, nullptr);
    warm = core.theta;
    path.fits.push_back(package(core, lam, wvec, config.standardize ? &std_info : nullptr));
  }
  return path;
}

// ---------------------------------------------------------------------------
// Penalized least squares (baseline family)

namespace detail {

// Residual-caching coordinate descent for
//   (1/2n) || y - b0 - X b ||^2 + sum_j t_j |b_j|.
LsResult fit_ls_core(const Dataset& data, const std::vector<double>& lambda_w,
                     const SolverConfig& config, const LsResult* init) {
  const std::size_t n = data.n_rows();
  const std::size_t p = data.n_cols();
  const double invn = 1.0 / static_cast<double>(n);
  const std::vector<double>& y = data.y();

  std::vector<double> m(p);
  for (std::size_t j = 0; j < p; ++j) m[j] = kernels::sum_sq(data.col(j), n) * invn;

  double b0;
  std::vector<double> b;
  if (init) {
    b0 = init->b0;
    b = init->b;
  } else {
    b0 = kernels::sum(y.data(), n) * invn;
    b.assign(p, 0.0);
  }
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = y[i] - b0;
  for (std::size_t j = 0; j < p; ++j) {
    if (b[j] != 0.0) kernels::axpy(-b[j], data.col(j), e.data(), n);
  }

  auto kkt_now = [&]() {
    double r = std::fabs(kernels::sum(e.data(), n) * invn);
    for (std::size_t j = 0; j < p; ++j) {
      const double gj = -kernels::dot(data.col(j), e.data(), n) * invn;
      const double v = b[j] != 0.0
                           ? std::fabs(gj + (b[j] > 0.0 ? lambda_w[j] : -lambda_w[j]))
                           : std::max(0.0, std::fabs(gj) - lambda_w[j]);
      r = std::max(r, v);
    }
    return r;
  };

  LsResult out;
  int cycles = 0;
  while (cycles < config.max_cycles) {
    double maxchg = 0.0;
    {
      const double step = kernels::sum(e.data(), n) * invn;
      b0 += step;
      for (double& v : e) v -= step;
      maxchg = std::fabs(step);
    }
    for (std::size_t j = 0; j < p; ++j) {
      const double* xj = data.col(j);
      const double grad = -kernels::dot(xj, e.data(), n) * invn;
      const double updated = soft_threshold(m[j] * b[j] - grad, lambda_w[j]) / m[j];
      const double step = updated - b[j];
      if (step != 0.0) {
        b[j] = updated;
        kernels::axpy(-step, xj, e.data(), n);
      }
      maxchg = std::max(maxchg, std::fabs(step));
    }
    ++cycles;
    if (maxchg < config.tol) {
      const double kkt = kkt_now();
      if (kkt <= 10.0 * config.tol) {
        out.kkt = kkt;
        out.converged = true;
        break;
      }
    }
  }
  if (!out.converged) out.kkt = kkt_now();
  out.b0 = b0;
  out.b = std::move(b);
  out.rss = kernels::sum_sq(e.data(), n);
  double pen = 0.0;
  for (std::size_t j = 0; j < p; ++j) pen += lambda_w[j] * std::fabs(out.b[j]);
  out.objective = 0.5 * out.rss * invn + pen;
  out.cycles = cycles;
  return out;
}

}  // namespace detail

namespace {

FitResult package_ls(const detail::LsResult& core, const Dataset& data, double lambda,
                     std::vector<double> weights, const Standardization* std_info) {
  FitResult fr;
  NaturalParams nat;
  nat.beta0 = core.b0;
  nat.beta = core.b;
  nat.sigma = std::sqrt(std::max(core.rss / static_cast<double>(data.n_rows()), 1e-300));
  fr.theta = from_natural(nat);
  fr.natural = std_info ? destandardize_params(nat, *std_info) : nat;
  fr.objective = core.objective;
  fr.cycles_used = core.cycles;
  fr.kkt_residual = core.kkt;
  fr.converged = core.converged;
  fr.lambda = lambda;
  fr.weights_used = std::move(weights);
  return fr;
}

}  // namespace

double ls_lambda_max(const Dataset& data, const SolverConfig& config) {
  Dataset work = data;
  if (config.standardize) standardize_in_place(work);
  const std::size_t n = work.n_rows();
  const double invn = 1.0 / static_cast<double>(n);
  const std::vector<double>& y = work.y();
  const double ybar = kernels::sum(y.data(), n) * invn;
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = y[i] - ybar;
  double top = 0.0;
  for (std::size_t j = 0; j < work.n_cols(); ++j) {
    top = std::max(top, std::fabs(kernels::dot(work.col(j), e.data(), n) * invn));
  }
  return top;
}

FitResult fit_ls_penalized(const Dataset& data, const PenaltySpec& penalty,
                           const SolverConfig& config) {
  penalty.validate(data.n_cols());
  Dataset work = data;
  Standardization std_info;
  if (config.standardize) std_info = standardize_in_place(work);
  const std::size_t p = work.n_cols();
  const Standardization* sp = config.standardize ? &std_info : nullptr;

  if (penalty.family == PenaltyFamily::lasso || penalty.family == PenaltyFamily::weighted_lasso) {
    const std::vector<double> lw = thresholds(penalty.lambda, penalty.weights, p);
    detail::LsResult core = detail::fit_ls_core(work, lw, config, nullptr);
    return package_ls(core, work, penalty.lambda, penalty.weights, sp);
  }

  // Folded concave: linearize the penalty around the current estimate and
  // re-solve, starting from zero (first step is the plain lasso).
  std::vector<double> lw(p, penalty.lambda);
  detail::LsResult core = detail::fit_ls_core(work, lw, config, nullptr);
  for (int step = 1; step < 3; ++step) {
    std::vector<double> w = lla_weights(penalty, core.b);
    detail::LsResult next = detail::fit_ls_core(work, w, config, &core);
    core = next;
    lw = w;
  }
  std::vector<double> wnorm(p, 1.0);
  if (penalty.lambda > 0.0) {
    for (std::size_t j = 0; j < p; ++j) wnorm[j] = lw[j] / penalty.lambda;
  }
  // Report the folded objective rather than the surrogate.
  double pen = 0.0;
  for (std::size_t j = 0; j < p; ++j) pen += penalty_value(penalty, std::fabs(core.b[j]));
  core.objective = 0.5 * core.rss / static_cast<double>(work.n_rows()) + pen;
  return package_ls(core, work, penalty.lambda, wnorm, sp);
}

PathResult fit_ls_path(const Dataset& data, int n_lambda, double lambda_min_ratio,
                       const SolverConfig& config) {
  if (n_lambda < 1) throw input_error("n_lambda must be >= 1");
  Dataset work = data;
  Standardization std_info;
  if (config.standardize) std_info = standardize_in_place(work);
  const std::size_t p = work.n_cols();
  if (lambda_min_ratio <= 0.0) lambda_min_ratio = (p > work.n_rows()) ? 0.05 : 0.01;

  SolverConfig raw = config;
  raw.standardize = false;
  double top = std::max(ls_lambda_max(work, raw), 1e-12);

  PathResult path;
  path.lambdas = detail::log_lambda_grid(top, n_lambda, lambda_min_ratio);
  path.fits.reserve(n_lambda);
  const double ybar = kernels::sum(work.y().data(), work.n_rows()) / work.n_rows();
  path.null_delta0 = ybar;
  path.null_gamma = 1.0;

  detail::LsResult warm;
  bool have_warm = false;
  for (double lam : path.lambdas) {
    const std::vector<double> lw(p, lam);
    detail::LsResult core = detail::fit_ls_core(work, lw, config, have_warm ? &warm : nullptr);
    warm = core;
    have_warm = true;
    path.fits.push_back(package_ls(core, work, lam, {}, config.standardize ? &std_info : nullptr));
  }
  return path;
}

}  // namespace tobit
