#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tobit/dataset.hpp"
#include "tobit/errors.hpp"
#include "tobit/loss.hpp"
#include "tobit/simlab.hpp"
#include "util.hpp"
#include "tobit/special.hpp"

using namespace tobit;

namespace {

Dataset tiny(std::vector<double> x_col, std::vector<double> y, std::size_t p = 1) {
  const std::size_t n = y.size();
  return Dataset::from_shifted(std::move(x_col), n, p, std::move(y), 0.0);
}

OlsenParams theta_of(double d0, std::vector<double> d, double g) {
  OlsenParams t;
  t.delta0 = d0;
  t.delta = std::move(d);
  t.gamma = g;
  return t;
}

Dataset random_censored(std::mt19937_64& rng, std::size_t n, std::size_t p, double q) {
  return testutil::random_censored(rng, n, p, q);
}

OlsenParams random_theta(std::mt19937_64& rng, std::size_t p) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  OlsenParams t;
  t.delta0 = 0.5 * g(rng);
  t.delta.resize(p);
  for (double& v : t.delta) v = 0.6 * g(rng);
  t.gamma = u(rng);
  return t;
}

}  // namespace

TEST_CASE("loss on single-row identities") {
  // one uncensored row, y = 1, z = 0, gamma = 1
  Dataset unc = tiny({1.0}, {1.0});
  CHECK(neg_loglik(unc, theta_of(0, {0}, 1)) == doctest::Approx(0.5).epsilon(1e-15));

  // a censored row contributes -log Phi(0) = log 2; isolate it from a
  // censored+uncensored pair since a dataset needs an uncensored row
  Dataset pair = tiny({1.0, 1.0}, {0.0, 1.0});
  const double total = neg_loglik(pair, theta_of(0, {0}, 1));
  CHECK(2.0 * total - 0.5 == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("loss matches an extended-precision straight-line evaluation") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    Dataset data = random_censored(rng, 25, 4, 0.3);
    OlsenParams th = random_theta(rng, 4);
    const double got = neg_loglik(data, th);
    const double want = static_cast<double>(oracles::neg_loglik_ld(data, th));
    CHECK(got == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("gradient identities on one uncensored row") {
  Dataset unc = tiny({1.0}, {1.0});
  const std::vector<double> g = grad_neg_loglik(unc, theta_of(0, {0}, 1));
  CHECK(g[0] == doctest::Approx(-1.0).epsilon(1e-14));  // d/d delta0
  CHECK(g[2] == doctest::Approx(0.0).epsilon(1e-14));   // d/d gamma
}

TEST_CASE("intercept gradient picks up g(0) from a censored row") {
  // censored row with z = 0 plus an uncensored row with zero residual
  Dataset pair = tiny({0.0, 1.0}, {0.0, 1.0});
  const std::vector<double> g = grad_neg_loglik(pair, theta_of(0, {1.0}, 1));
  CHECK(2.0 * g[0] == doctest::Approx(inv_mills(0.0)).epsilon(1e-13));
}

TEST_CASE("gradient and hessian match the independent oracle and finite differences") {
  std::mt19937_64 rng(19);
  for (int rep = 0; rep < 8; ++rep) {
    Dataset data = random_censored(rng, 30, 5, 0.35);
    OlsenParams th = random_theta(rng, 5);
    const std::vector<double> g = grad_neg_loglik(data, th);
    const std::vector<double> ref = oracles::grad_ld(data, th);
    for (std::size_t c = 0; c < g.size(); ++c) {
      CHECK(std::fabs(g[c] - ref[c]) <= 1e-10 * std::max(1.0, std::fabs(ref[c])));
    }

    const double h = 1e-5;
    const std::size_t p = 5;
    for (std::size_t c = 0; c < p + 2; ++c) {
      OlsenParams lo = th, hi = th;
      (c == 0 ? lo.delta0 : c <= p ? lo.delta[c - 1] : lo.gamma) -= h;
      (c == 0 ? hi.delta0 : c <= p ? hi.delta[c - 1] : hi.gamma) += h;
      const double fd = (neg_loglik(data, hi) - neg_loglik(data, lo)) / (2 * h);
      CHECK(std::fabs(g[c] - fd) <= 1e-6 * std::max(1.0, std::fabs(fd)));
    }

    const std::vector<double> hess = hessian_neg_loglik(data, th);
    const std::size_t dim = p + 2;
    for (std::size_t c = 0; c < dim; ++c) {
      OlsenParams lo = th, hi = th;
      (c == 0 ? lo.delta0 : c <= p ? lo.delta[c - 1] : lo.gamma) -= h;
      (c == 0 ? hi.delta0 : c <= p ? hi.delta[c - 1] : hi.gamma) += h;
      const std::vector<double> glo = grad_neg_loglik(data, lo);
      const std::vector<double> ghi = grad_neg_loglik(data, hi);
      for (std::size_t r = 0; r < dim; ++r) {
        const double fd = (ghi[r] - glo[r]) / (2 * h);
        CHECK(std::fabs(hess[r * dim + c] - fd) <= 1e-5 * std::max(1.0, std::fabs(fd)));
      }
    }
  }
}

TEST_CASE("hessian on one uncensored row and positive semidefiniteness") {
  Dataset unc = tiny({1.0}, {1.0});
  const std::vector<double> h = hessian_neg_loglik(unc, theta_of(0, {0}, 1));
  // coordinates (delta0, delta1, gamma); check the (delta0, gamma) block
  CHECK(h[0 * 3 + 0] == doctest::Approx(1.0));
  CHECK(h[0 * 3 + 2] == doctest::Approx(-1.0));
  CHECK(h[2 * 3 + 0] == doctest::Approx(-1.0));
  CHECK(h[2 * 3 + 2] == doctest::Approx(2.0));

  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    Dataset data = random_censored(rng, 40, 6, 0.4);
    OlsenParams th = random_theta(rng, 6);
    const std::vector<double> hm = hessian_neg_loglik(data, th);
    const std::size_t dim = 8;
    Eigen::MatrixXd H(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) H(r, c) = hm[r * dim + c];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const double norm = H.norm();
    CHECK(es.eigenvalues().minCoeff() >= -1e-8 * norm);
  }
}

TEST_CASE("loss is jointly convex") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (int rep = 0; rep < 200; ++rep) {
    Dataset data = random_censored(rng, 20, 3, 0.3);
    OlsenParams a = random_theta(rng, 3);
    OlsenParams b = random_theta(rng, 3);
    const double t = unif(rng);
    OlsenParams mid;
    mid.delta0 = t * a.delta0 + (1 - t) * b.delta0;
    mid.gamma = t * a.gamma + (1 - t) * b.gamma;
    mid.delta.resize(3);
    for (int j = 0; j < 3; ++j) mid.delta[j] = t * a.delta[j] + (1 - t) * b.delta[j];
    CHECK(neg_loglik(data, mid) <=
          t * neg_loglik(data, a) + (1 - t) * neg_loglik(data, b) + 1e-9);
  }
}

TEST_CASE("parameter maps") {
  OlsenParams th = theta_of(2.0, {3.0}, 1.0);
  NaturalParams np = to_natural(th);
  CHECK(np.beta0 == doctest::Approx(2.0));
  CHECK(np.beta[0] == doctest::Approx(3.0));
  CHECK(np.sigma == doctest::Approx(1.0));

  th = theta_of(0.0, {4.0}, 2.0);
  np = to_natural(th);
  CHECK(np.beta[0] == doctest::Approx(2.0));
  CHECK(np.sigma == doctest::Approx(0.5));

  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    OlsenParams t0 = random_theta(rng, 4);
    OlsenParams t1 = from_natural(to_natural(t0));
    CHECK(t1.delta0 == doctest::Approx(t0.delta0).epsilon(1e-12));
    CHECK(t1.gamma == doctest::Approx(t0.gamma).epsilon(1e-12));
    for (int j = 0; j < 4; ++j) CHECK(t1.delta[j] == doctest::Approx(t0.delta[j]).epsilon(1e-12));
  }
  CHECK_THROWS(to_natural(theta_of(0, {0}, -1.0)));
  CHECK_THROWS(from_natural(NaturalParams{0.0, {0.0}, 0.0}));
}

TEST_CASE("standardization") {
  Dataset data = tiny({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0});
  auto [std_data, info] = standardize(data);
  CHECK(info.mean[0] == doctest::Approx(2.0));
  CHECK(info.scale[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(std_data.col(0)[0] == doctest::Approx(-1.2247448713915890).epsilon(1e-9));
  CHECK(std_data.col(0)[1] == doctest::Approx(0.0));
  CHECK(std_data.col(0)[2] == doctest::Approx(1.2247448713915890).epsilon(1e-9));

  // idempotence
  auto [again, info2] = standardize(std_data);
  CHECK(info2.mean[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(info2.scale[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) {
    CHECK(again.col(0)[i] == doctest::Approx(std_data.col(0)[i]).epsilon(1e-12));
  }

  // zero-variance column names the offender
  Dataset flat = tiny({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0});
  CHECK_THROWS_WITH_AS(standardize(flat), doctest::Contains("column 1"), data_error);
}

TEST_CASE("destandardized parameters predict identically") {
  std::mt19937_64 rng(37);
  Dataset data = random_censored(rng, 40, 4, 0.25);
  auto [std_data, info] = standardize(data);
  NaturalParams np_std;
  np_std.beta0 = 0.7;
  np_std.beta = {0.5, -1.2, 0.0, 2.0};
  np_std.sigma = 1.3;
  NaturalParams np_raw = destandardize_params(np_std, info);
  for (PredictMode mode :
       {PredictMode::latent, PredictMode::censored_mean, PredictMode::prob_uncensored}) {
    const std::vector<double> a = predict(np_std, std_data, mode);
    const std::vector<double> b = predict(np_raw, data, mode);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(std::fabs(a[i] - b[i]) <= 1e-10 * std::max(1.0, std::fabs(a[i])));
    }
  }
}

TEST_CASE("prediction modes") {
  NaturalParams np{0.0, {0.0}, 1.0};
  const double x0 = 0.0;
  std::vector<double> out = predict(np, &x0, 1, 1, PredictMode::censored_mean, 0.0);
  CHECK(out[0] == doctest::Approx(0.3989422804014327).epsilon(1e-12));

  NaturalParams lin{3.0, {5.0}, 1.0};
  const double x1 = 1.0;
  out = predict(lin, &x1, 1, 1, PredictMode::latent, 0.0);
  CHECK(out[0] == doctest::Approx(8.0));

  out = predict(np, &x0, 1, 1, PredictMode::prob_uncensored, 0.0);
  CHECK(out[0] == doctest::Approx(0.5));

  CHECK_THROWS(predict(NaturalParams{0.0, {1.0, 2.0}, 1.0}, &x0, 1, 1, PredictMode::latent, 0.0));
}

TEST_CASE("censored mean agrees with Monte Carlo") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double m = 0.4, sigma = 1.7, c = 2.0;
  const std::size_t draws = 10'000'000;
  double acc = 0.0, acc2 = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double v = std::max(m + sigma * gauss(rng), 0.0) + c;
    acc += v;
    acc2 += v * v;
  }
  const double mc_mean = acc / draws;
  const double mc_se = std::sqrt((acc2 / draws - mc_mean * mc_mean) / draws);
  NaturalParams np{m, {0.0}, sigma};
  const double x0 = 0.0;
  const double pred = predict(np, &x0, 1, 1, PredictMode::censored_mean, c)[0];
  CHECK(std::fabs(pred - mc_mean) <= 3.0 * mc_se);
}
