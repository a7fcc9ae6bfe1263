#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tobit/errors.hpp"
#include "tobit/loss.hpp"
#include "tobit/simlab.hpp"
#include "tobit/solver.hpp"

using namespace tobit;

TEST_CASE("covariance structures") {
  const std::vector<double> ar1 = build_covariance(CovarianceKind::ar1, 0.5, 3);
  const double want[9] = {1, 0.5, 0.25, 0.5, 1, 0.5, 0.25, 0.5, 1};
  for (int i = 0; i < 9; ++i) CHECK(ar1[i] == doctest::Approx(want[i]));

  const std::vector<double> eye = build_covariance(CovarianceKind::independent, 0.0, 4);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) CHECK(eye[j * 4 + i] == doctest::Approx(i == j ? 1.0 : 0.0));
  }

  const std::vector<double> cs = build_covariance(CovarianceKind::cs, 0.8, 3);
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) CHECK(cs[j * 3 + i] == doctest::Approx(i == j ? 1.0 : 0.8));
  }

  CHECK_THROWS(build_covariance(CovarianceKind::cs, -0.9, 3));
  CHECK_THROWS(build_covariance(CovarianceKind::ar1, 1.0, 3));
}

TEST_CASE("generated data hits the requested censored fraction") {
  SimDesign d;
  d.n_train = 100;
  d.n_test = 900;
  d.p = 5;
  d.seed = 99;
  for (double q : {0.125, 0.25, 0.5}) {
    d.q = q;
    GenResult gen = gen_dataset(d, 3);
    const std::size_t censored = gen.train.n_censored() + gen.test.n_censored();
    const double frac = static_cast<double>(censored) / 1000.0;
    CHECK(std::fabs(frac - q) <= 1.0 / 1000.0 + 1e-12);
    CHECK(gen.train.censor_shift() == doctest::Approx(gen.c_q));
  }
}

TEST_CASE("independent design has small sample correlations") {
  SimDesign d;
  d.n_train = 5000;
  d.n_test = 20;
  d.p = 10;
  d.q = 0.25;
  d.seed = 5;
  GenResult gen = gen_dataset(d, 0);
  const Dataset& tr = gen.train;
  const double n = static_cast<double>(tr.n_rows());
  for (std::size_t a = 0; a < 10; ++a) {
    for (std::size_t b = a + 1; b < 10; ++b) {
      double mean_a = 0, mean_b = 0, cross = 0;
      for (std::size_t i = 0; i < tr.n_rows(); ++i) {
        mean_a += tr.col(a)[i];
        mean_b += tr.col(b)[i];
      }
      mean_a /= n;
      mean_b /= n;
      for (std::size_t i = 0; i < tr.n_rows(); ++i) {
        cross += (tr.col(a)[i] - mean_a) * (tr.col(b)[i] - mean_b);
      }
      CHECK(std::fabs(cross / n) < 0.08);
    }
  }
}

TEST_CASE("same seed reproduces the draw exactly") {
  SimDesign d;
  d.n_train = 50;
  d.n_test = 30;
  d.p = 4;
  d.beta = {2.0, -1.0};
  d.seed = 314;
  GenResult a = gen_dataset(d, 7);
  GenResult b = gen_dataset(d, 7);
  CHECK(a.c_q == b.c_q);
  for (std::size_t i = 0; i < a.train.n_rows(); ++i) CHECK(a.train.y()[i] == b.train.y()[i]);
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t i = 0; i < a.train.n_rows(); ++i) {
      CHECK(a.train.col(j)[i] == b.train.col(j)[i]);
    }
  }
  GenResult c = gen_dataset(d, 8);
  CHECK(c.c_q != a.c_q);
}

TEST_CASE("metric computation") {
  SimDesign d;
  d.n_train = 40;
  d.n_test = 200;
  d.p = 6;
  d.q = 0.25;
  d.seed = 21;
  GenResult gen = gen_dataset(d, 0);
  const NaturalParams truth{d.beta0, d.full_beta(), d.sigma};

  // a perfect fit has zero estimation/selection loss
  Metrics perfect = evaluate(truth, gen.test, truth, d.true_support(), PredictMode::censored_mean);
  CHECK(perfect.l1 == doctest::Approx(0.0));
  CHECK(perfect.l2 == doctest::Approx(0.0));
  CHECK(perfect.fp == doctest::Approx(0.0));
  CHECK(perfect.fn == doctest::Approx(0.0));

  // full selection: fp = p - s, fn = 0
  std::vector<std::size_t> all{0, 1, 2, 3, 4, 5};
  Metrics full = evaluate(truth, gen.test, truth, all, PredictMode::censored_mean);
  CHECK(full.fp == doctest::Approx(6.0 - 5.0));
  CHECK(full.fn == doctest::Approx(0.0));

  // independent recomputation of every metric for an arbitrary fit
  NaturalParams fit{2.0, {4.0, 0.0, 1.0, -1.0, 0.0, 0.3}, 1.2};
  std::vector<std::size_t> selected{0, 2, 3, 5};
  Metrics m = evaluate(fit, gen.test, truth, selected, PredictMode::latent);
  double sse = 0, l1 = 0, l2 = 0;
  const std::vector<double> truth_b = d.full_beta();
  for (std::size_t j = 0; j < 6; ++j) {
    l1 += std::fabs(fit.beta[j] - truth_b[j]);
    l2 += (fit.beta[j] - truth_b[j]) * (fit.beta[j] - truth_b[j]);
  }
  for (std::size_t i = 0; i < gen.test.n_rows(); ++i) {
    double z = fit.beta0;
    for (std::size_t j = 0; j < 6; ++j) z += gen.test.col(j)[i] * fit.beta[j];
    sse += (z - gen.test.y()[i]) * (z - gen.test.y()[i]);
  }
  CHECK(m.mse == doctest::Approx(sse / gen.test.n_rows()).epsilon(1e-12));
  CHECK(m.l1 == doctest::Approx(l1).epsilon(1e-12));
  CHECK(m.l2 == doctest::Approx(std::sqrt(l2)).epsilon(1e-12));
  CHECK(m.fp == doctest::Approx(1.0));
  CHECK(m.fn == doctest::Approx(2.0));
}

TEST_CASE("leave-one-out cross-validation matches a hand-rolled loop") {
  SimDesign d;
  d.n_train = 14;
  d.n_test = 20;
  d.p = 2;
  d.q = 0.3;
  d.beta = {1.5, -1.0};
  d.seed = 77;
  GenResult gen = gen_dataset(d, 0);
  const Dataset& data = gen.train;
  const std::size_t n = data.n_rows();

  std::vector<double> grid{0.4, 0.2, 0.1, 0.05};
  std::vector<int> folds(n);
  for (std::size_t i = 0; i < n; ++i) folds[i] = static_cast<int>(i);

  CvOptions opts;
  opts.k = static_cast<int>(n);
  opts.fold_ids = &folds;
  opts.lambda_grid = &grid;
  opts.solver.tol = 1e-10;  // tight so cold and warm starts coincide
  const CvResult cv = kfold_cv(data, Method::tobit_lasso, opts);

  // brute force: for each held-out row, fit the rest at each lambda
  std::vector<double> brute(grid.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> rest;
    for (std::size_t r = 0; r < n; ++r) {
      if (r != i) rest.push_back(r);
    }
    Dataset sub = data.subset(rest);
    for (std::size_t li = 0; li < grid.size(); ++li) {
      FitResult fit = fit_lasso(sub, grid[li], opts.solver);
      std::vector<double> xcol{data.col(0)[i], data.col(1)[i]};
      const double pred =
          predict(fit.natural, xcol.data(), 1, 2, PredictMode::censored_mean, 0.0)[0];
      brute[li] += (pred - data.y()[i]) * (pred - data.y()[i]);
    }
  }
  for (double& b : brute) b /= static_cast<double>(n);
  for (std::size_t li = 0; li < grid.size(); ++li) {
    CHECK(cv.cv_mse[li] == doctest::Approx(brute[li]).epsilon(1e-6));
  }
}

TEST_CASE("duplicating every row with aligned folds keeps the selected lambda") {
  SimDesign d;
  d.n_train = 30;
  d.n_test = 20;
  d.p = 3;
  d.q = 0.25;
  d.beta = {1.5, -1.0};
  d.seed = 15;
  GenResult gen = gen_dataset(d, 0);
  const Dataset& data = gen.train;
  const std::size_t n = data.n_rows();

  std::vector<double> grid{0.5, 0.25, 0.12, 0.06, 0.03};
  std::vector<int> folds(n);
  for (std::size_t i = 0; i < n; ++i) folds[i] = static_cast<int>(i % 3);

  CvOptions opts;
  opts.k = 3;
  opts.fold_ids = &folds;
  opts.lambda_grid = &grid;
  const CvResult base = kfold_cv(data, Method::tobit_lasso, opts);

  // duplicate rows; copies inherit their source's fold
  std::vector<double> x2(2 * n * 3), y2(2 * n);
  std::vector<int> folds2(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      x2[j * 2 * n + 2 * i] = data.col(j)[i];
      x2[j * 2 * n + 2 * i + 1] = data.col(j)[i];
    }
    y2[2 * i] = y2[2 * i + 1] = data.y()[i];
    folds2[2 * i] = folds2[2 * i + 1] = folds[i];
  }
  Dataset doubled = Dataset::from_shifted(std::move(x2), 2 * n, 3, std::move(y2), 0.0);
  // construction keeps relative order within the censored/uncensored
  // blocks, so the partitioned fold map can be rebuilt directly
  std::vector<int> folds2_part;
  folds2_part.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(data.y()[i] > 0.0)) {
      folds2_part.push_back(folds[i]);
      folds2_part.push_back(folds[i]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (data.y()[i] > 0.0) {
      folds2_part.push_back(folds[i]);
      folds2_part.push_back(folds[i]);
    }
  }

  CvOptions opts2;
  opts2.k = 3;
  opts2.fold_ids = &folds2_part;
  opts2.lambda_grid = &grid;
  const CvResult dup = kfold_cv(doubled, Method::tobit_lasso, opts2);

  CHECK(dup.best_lambda == doctest::Approx(base.best_lambda));
  for (std::size_t li = 0; li < grid.size(); ++li) {
    CHECK(dup.cv_mse[li] == doctest::Approx(base.cv_mse[li]).epsilon(1e-7));
  }
}

TEST_CASE("a grid above lambda_max reproduces the null-model error") {
  SimDesign d;
  d.n_train = 50;
  d.n_test = 20;
  d.p = 4;
  d.q = 0.25;
  d.beta = {1.5, -1.0};
  d.seed = 33;
  GenResult gen = gen_dataset(d, 0);
  const Dataset& data = gen.train;

  std::vector<double> grid{1e9};
  std::vector<int> folds(data.n_rows());
  for (std::size_t i = 0; i < data.n_rows(); ++i) folds[i] = static_cast<int>(i % 5);
  CvOptions opts;
  opts.fold_ids = &folds;
  opts.lambda_grid = &grid;
  const CvResult cv = kfold_cv(data, Method::tobit_lasso, opts);

  double manual = 0.0;
  for (int f = 0; f < 5; ++f) {
    std::vector<std::size_t> rest, held;
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
      (folds[i] == f ? held : rest).push_back(i);
    }
    FitResult null_fit = fit_lasso(data.subset(rest), 1e9, opts.solver);
    double sse = 0.0;
    for (std::size_t i : held) {
      std::vector<double> xr(4);
      for (std::size_t j = 0; j < 4; ++j) xr[j] = data.col(j)[i];
      const double pred =
          predict(null_fit.natural, xr.data(), 1, 4, PredictMode::censored_mean, 0.0)[0];
      sse += (pred - data.y()[i]) * (pred - data.y()[i]);
    }
    manual += sse / static_cast<double>(held.size());
  }
  manual /= 5.0;
  CHECK(cv.cv_mse[0] == doctest::Approx(manual).epsilon(1e-10));
}

TEST_CASE("stratification failure raises a data error") {
  // two uncensored rows only; leave-one-out style folds strand one split
  std::vector<double> x{0.5, -0.5, 1.0, -1.0};
  std::vector<double> y{0.0, 0.0, 0.0, 1.0};  // single uncensored row
  Dataset data = Dataset::from_shifted(std::move(x), 4, 1, std::move(y), 0.0);
  std::vector<int> folds{0, 0, 1, 1};
  CvOptions opts;
  opts.k = 2;
  opts.fold_ids = &folds;
  std::vector<double> grid{0.5};
  opts.lambda_grid = &grid;
  CHECK_THROWS_AS(kfold_cv(data, Method::tobit_lasso, opts), data_error);
}

TEST_CASE("experiment tables are deterministic across runs and thread counts") {
  SimDesign d;
  d.n_train = 40;
  d.n_test = 60;
  d.p = 6;
  d.q = 0.25;
  d.replications = 3;
  d.seed = 2024;
  const std::vector<Method> methods{Method::tobit_lasso, Method::ls_lasso, Method::ols};

  ExperimentOptions o1;
  o1.threads = 1;
  o1.n_lambda = 20;
  ExperimentOptions o2 = o1;
  o2.threads = 2;

  const std::string a = run_experiment(d, methods, o1).csv();
  const std::string b = run_experiment(d, methods, o1).csv();
  const std::string c = run_experiment(d, methods, o2).csv();
  CHECK(a == b);
  CHECK(a == c);
  CHECK(a.find("tobit_lasso,mse,") != std::string::npos);
}

TEST_CASE("ols baseline requires enough rows") {
  SimDesign d;
  d.n_train = 5;
  d.n_test = 10;
  d.p = 6;
  d.q = 0.25;
  d.replications = 1;
  CHECK_THROWS_AS(run_experiment(d, {Method::ols}, {}), input_error);
}
