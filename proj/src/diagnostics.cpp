#include "tobit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "tobit/dataset.hpp"
#include "tobit/kernels.hpp"
#include "tobit/loss.hpp"
#include "tobit/simlab.hpp"
#include "tobit/special.hpp"

namespace tobit {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

struct Instance {
  Dataset data;
  OlsenParams theta;
};

// Standardized censored data with random parameters; censoring at the
// sample q-quantile keeps at least one row uncensored.
Instance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t p, double q) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0, 1);
  std::vector<double> x(n * p), ystar(n);
  for (double& v : x) v = gauss(rng);
  const double beta0 = gauss(rng);
  std::vector<double> beta(p, 0.0);
  for (std::size_t j = 0; j < std::min<std::size_t>(p, 4); ++j) beta[j] = gauss(rng);
  const double sigma = 0.5 + 1.5 * unif(rng);
  for (std::size_t i = 0; i < n; ++i) {
    double z = beta0;
    for (std::size_t j = 0; j < p; ++j) z += x[j * n + i] * beta[j];
    ystar[i] = z + sigma * gauss(rng);
  }
  std::vector<double> sorted = ystar;
  std::size_t k = static_cast<std::size_t>(std::llround(q * static_cast<double>(n)));
  k = std::max<std::size_t>(1, std::min(k, n - 1));
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
  const double c = sorted[k - 1];
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::max(ystar[i] - c, 0.0);

  Instance inst{standardize(Dataset::from_shifted(std::move(x), n, p, std::move(y), c)).first,
                {}};
  inst.theta.delta0 = 0.5 * gauss(rng);
  inst.theta.delta.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    inst.theta.delta[j] = unif(rng) < 0.5 ? 0.0 : 0.7 * gauss(rng);
  }
  inst.theta.gamma = 0.5 + 1.5 * unif(rng);
  return inst;
}

// Mixed criterion: relative above 1, absolute below.
bool close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

CheckResult check_gradient_fd(std::uint64_t seed, int instances, double tol) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int it = 0; it < instances; ++it) {
    std::uniform_int_distribution<std::size_t> np(10, 50), pp(1, 8);
    std::uniform_real_distribution<double> qq(0.1, 0.6);
    Instance inst = random_instance(rng, np(rng), pp(rng), qq(rng));
    const std::vector<double> grad = grad_neg_loglik(inst.data, inst.theta);
    const double h = 1e-5;
    const std::size_t p = inst.data.n_cols();
    for (std::size_t c = 0; c < p + 2; ++c) {
      OlsenParams lo = inst.theta, hi = inst.theta;
      auto& lo_ref = (c == 0) ? lo.delta0 : (c <= p ? lo.delta[c - 1] : lo.gamma);
      auto& hi_ref = (c == 0) ? hi.delta0 : (c <= p ? hi.delta[c - 1] : hi.gamma);
      lo_ref -= h;
      hi_ref += h;
      const double fd = (neg_loglik(inst.data, hi) - neg_loglik(inst.data, lo)) / (2 * h);
      worst = std::max(worst, std::fabs(grad[c] - fd) /
                                  std::max(1.0, std::max(std::fabs(grad[c]), std::fabs(fd))));
    }
  }
  return {"gradient-fd", worst <= tol, "max mixed error " + num(worst)};
}

CheckResult check_hessian_fd(std::uint64_t seed, int instances, double tol) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int it = 0; it < instances; ++it) {
    std::uniform_int_distribution<std::size_t> np(10, 40), pp(1, 6);
    std::uniform_real_distribution<double> qq(0.1, 0.6);
    Instance inst = random_instance(rng, np(rng), pp(rng), qq(rng));
    const std::vector<double> hess = hessian_neg_loglik(inst.data, inst.theta);
    const double h = 1e-5;
    const std::size_t p = inst.data.n_cols();
    const std::size_t dim = p + 2;
    for (std::size_t c = 0; c < dim; ++c) {
      OlsenParams lo = inst.theta, hi = inst.theta;
      auto& lo_ref = (c == 0) ? lo.delta0 : (c <= p ? lo.delta[c - 1] : lo.gamma);
      auto& hi_ref = (c == 0) ? hi.delta0 : (c <= p ? hi.delta[c - 1] : hi.gamma);
      lo_ref -= h;
      hi_ref += h;
      const std::vector<double> glo = grad_neg_loglik(inst.data, lo);
      const std::vector<double> ghi = grad_neg_loglik(inst.data, hi);
      for (std::size_t r = 0; r < dim; ++r) {
        const double fd = (ghi[r] - glo[r]) / (2 * h);
        const double an = hess[r * dim + c];
        worst = std::max(worst, std::fabs(an - fd) /
                                    std::max(1.0, std::max(std::fabs(an), std::fabs(fd))));
      }
    }
  }
  return {"hessian-fd", worst <= tol, "max mixed error " + num(worst)};
}

CheckResult check_majorization(std::uint64_t seed, int tuples, double slack) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0, 1);
  double worst = -1e300;
  int bad = 0;
  Instance inst = random_instance(rng, 60, 6, 0.3);
  for (int t = 0; t < tuples; ++t) {
    if (t % 50 == 0) {
      std::uniform_int_distribution<std::size_t> np(20, 80), pp(1, 8);
      inst = random_instance(rng, np(rng), pp(rng), 0.1 + 0.5 * unif(rng));
    }
    const std::size_t p = inst.data.n_cols();
    const std::size_t c = std::uniform_int_distribution<std::size_t>(0, p)(rng);
    const double a = -3.0 + 6.0 * unif(rng);
    const double base = neg_loglik(inst.data, inst.theta);
    const std::vector<double> grad = grad_neg_loglik(inst.data, inst.theta);
    OlsenParams moved = inst.theta;
    (c == 0 ? moved.delta0 : moved.delta[c - 1]) += a;
    const double lhs = neg_loglik(inst.data, moved);
    const double rhs = base + grad[c] * a + 0.5 * a * a;
    const double gap = lhs - rhs;
    worst = std::max(worst, gap);
    if (gap > slack) ++bad;
  }
  return {"majorization", bad == 0, "max overshoot " + num(worst)};
}

CheckResult check_hazard_range(int points) {
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < points; ++i) {
    // Stay where the true value is representable in a double.
    const double s = -400.0 + (437.0 * i) / (points - 1);
    const double h = hazard(s);
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  const bool ok = lo > 0.0 && hi < 1.0;
  return {"hazard-range", ok, "min h " + num(lo) + ", 1 - max h " + num(1.0 - hi)};
}

CheckResult check_g_second_derivative(int points) {
  const double h = 1e-4;
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double s = -400.0 + (440.0 * i) / (points - 1);
    const double g2 = (inv_mills(s + h) - 2.0 * inv_mills(s) + inv_mills(s - h)) / (h * h);
    worst = std::max(worst, std::fabs(g2));
  }
  return {"g-second-derivative", worst < 4.3, "max |g''| " + num(worst)};
}

CheckResult check_kesavan(int points) {
  const double bound_slack = 1e-12;
  const double root2pi = std::sqrt(2.0 / 3.14159265358979323846);
  double worst = -1e300;
  for (int i = 0; i < points; ++i) {
    const double s = (100.0 * i) / (points - 1);
    worst = std::max(worst, inv_mills(-s) - (s + root2pi));
  }
  return {"kesavan-bound", worst <= bound_slack, "max excess " + num(worst)};
}

CheckResult check_g_monotone(std::uint64_t seed, int pairs) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-400.0, 40.0);
  int bad = 0;
  for (int i = 0; i < pairs; ++i) {
    double s1 = unif(rng), s2 = unif(rng);
    if (s1 > s2) std::swap(s1, s2);
    if (inv_mills(s1) < inv_mills(s2)) ++bad;
  }
  return {"g-monotone", bad == 0, std::to_string(bad) + " violations"};
}

CheckResult check_kernel_equivalence(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const kernels::Ops& ref = kernels::scalar_ops();
  const kernels::Ops& act = kernels::active_ops();
  double worst = 0.0;
  for (std::size_t n : {1u, 3u, 7u, 64u, 1001u}) {
    std::vector<double> a(n), b(n), y1(n), y2(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = gauss(rng);
      b[i] = gauss(rng);
      y1[i] = y2[i] = gauss(rng);
    }
    const double tol = 1e-12 * static_cast<double>(n);
    worst = std::max(worst, std::fabs(ref.dot(a.data(), b.data(), n) -
                                      act.dot(a.data(), b.data(), n)));
    worst = std::max(worst, std::fabs(ref.sum(a.data(), n) - act.sum(a.data(), n)));
    worst = std::max(worst, std::fabs(ref.sum_sq(a.data(), n) - act.sum_sq(a.data(), n)));
    ref.axpy(0.7, a.data(), y1.data(), n);
    act.axpy(0.7, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::fabs(y1[i] - y2[i]));
    if (worst > tol) break;
  }
  return {"kernel-equivalence", worst <= 1e-9,
          std::string(kernels::backend_name()) + " vs scalar, max diff " + num(worst)};
}

}  // namespace

std::vector<CheckResult> run_numeric_checks(std::uint64_t seed) {
  std::vector<CheckResult> out;
  out.push_back(check_gradient_fd(seed_mix(seed, 1), 20, 1e-6));
  out.push_back(check_hessian_fd(seed_mix(seed, 2), 10, 1e-5));
  out.push_back(check_majorization(seed_mix(seed, 3), 1000, 1e-9));
  out.push_back(check_hazard_range(100000));
  out.push_back(check_g_second_derivative(100000));
  out.push_back(check_kesavan(100000));
  out.push_back(check_g_monotone(seed_mix(seed, 4), 100000));
  out.push_back(check_kernel_equivalence(seed_mix(seed, 5)));
  return out;
}

}  // namespace tobit
