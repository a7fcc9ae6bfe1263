#include "tobit/simlab.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "tobit/detail/solver_core.hpp"
#include "tobit/errors.hpp"
#include "tobit/lla.hpp"
#include "tobit/parallel.hpp"
#include "tobit/penalty.hpp"

namespace tobit {

// ---------------------------------------------------------------------------
// Design and generation

void SimDesign::validate() const {
  if (!(q > 0.0 && q < 1.0)) throw input_error("censored fraction q must lie in (0, 1)");
  if (p == 0) throw input_error("p must be >= 1");
  if (beta.size() > p) throw input_error("beta has more entries than predictors");
  if (!(sigma > 0.0)) throw input_error("sigma must be positive");
  if (replications < 1) throw input_error("replications must be >= 1");
  if (n_train < 2 || n_test < 1) throw input_error("n_train/n_test too small");
  if (covariance != CovarianceKind::independent) {
    if (!(std::fabs(rho) < 1.0)) throw input_error("|rho| must be < 1");
    if (covariance == CovarianceKind::cs && p > 1 && !(rho > -1.0 / (static_cast<double>(p) - 1.0))) {
      throw input_error("cs(rho) is not positive definite for this p");
    }
  }
}

std::vector<double> SimDesign::full_beta() const {
  std::vector<double> b = beta;
  b.resize(p, 0.0);
  return b;
}

std::vector<std::size_t> SimDesign::true_support() const {
  std::vector<std::size_t> s;
  const std::vector<double> b = full_beta();
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (b[j] != 0.0) s.push_back(j);
  }
  return s;
}

std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 on the combined state
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> build_covariance(CovarianceKind kind, double rho, std::size_t p) {
  if (kind != CovarianceKind::independent) {
    if (!(std::fabs(rho) < 1.0)) throw input_error("|rho| must be < 1");
    if (kind == CovarianceKind::cs && p > 1 && !(rho > -1.0 / (static_cast<double>(p) - 1.0))) {
      throw input_error("cs(rho) is not positive definite for this p");
    }
  }
  std::vector<double> sigma(p * p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < p; ++i) {
      double v;
      if (i == j) {
        v = 1.0;
      } else if (kind == CovarianceKind::independent) {
        v = 0.0;
      } else if (kind == CovarianceKind::cs) {
        v = rho;
      } else {
        v = std::pow(rho, std::fabs(static_cast<double>(i) - static_cast<double>(j)));
      }
      sigma[j * p + i] = v;
    }
  }
  return sigma;
}

GenResult gen_dataset(const SimDesign& design, int rep_index) {
  design.validate();
  const std::size_t N = design.n_train + design.n_test;
  const std::size_t p = design.p;

  std::mt19937_64 rng(seed_mix(design.seed, static_cast<std::uint64_t>(rep_index)));
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> x(N * p);
  for (double& v : x) v = gauss(rng);
  if (design.covariance != CovarianceKind::independent) {
    const std::vector<double> sig = build_covariance(design.covariance, design.rho, p);
    Eigen::Map<const Eigen::MatrixXd> S(sig.data(), p, p);
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) throw input_error("covariance is not positive definite");
    const Eigen::MatrixXd L = llt.matrixL();
    Eigen::Map<Eigen::MatrixXd> X(x.data(), N, p);
    X = X * L.transpose();
  }

  const std::vector<double> b = design.full_beta();
  std::vector<double> ystar(N, design.beta0);
  {
    Eigen::Map<const Eigen::MatrixXd> X(x.data(), N, p);
    Eigen::Map<const Eigen::VectorXd> bv(b.data(), p);
    Eigen::Map<Eigen::VectorXd> yv(ystar.data(), N);
    yv += X * bv;
  }
  for (double& v : ystar) v += design.sigma * gauss(rng);

  // Pooled empirical q-quantile as the censoring point.
  std::vector<double> sorted = ystar;
  std::size_t k = static_cast<std::size_t>(std::llround(design.q * static_cast<double>(N)));
  k = std::max<std::size_t>(1, std::min(k, N - 1));
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
  const double c_q = sorted[k - 1];

  std::vector<double> y_shift(N);
  for (std::size_t i = 0; i < N; ++i) y_shift[i] = std::max(ystar[i] - c_q, 0.0);

  auto slice = [&](std::size_t row0, std::size_t rows) {
    std::vector<double> xs(rows * p);
    std::vector<double> ys(rows);
    for (std::size_t j = 0; j < p; ++j) {
      const double* src = x.data() + j * N + row0;
      std::copy(src, src + rows, xs.data() + j * rows);
    }
    std::copy(y_shift.begin() + row0, y_shift.begin() + row0 + rows, ys.begin());
    return Dataset::from_shifted(std::move(xs), rows, p, std::move(ys), c_q);
  };

  GenResult out{slice(0, design.n_train), slice(design.n_train, design.n_test),
                NaturalParams{design.beta0, b, design.sigma}, c_q};
  return out;
}

// ---------------------------------------------------------------------------
// Methods, CV and evaluation

std::string method_name(Method m) {
  switch (m) {
    case Method::tobit_lasso: return "tobit_lasso";
    case Method::tobit_scad: return "tobit_scad";
    case Method::ls_lasso: return "lasso";
    case Method::ls_scad: return "scad";
    case Method::ols: return "ols";
    case Method::ols_oracle: return "ols_oracle";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "tobit_lasso") return Method::tobit_lasso;
  if (name == "tobit_scad") return Method::tobit_scad;
  if (name == "lasso" || name == "ls_lasso") return Method::ls_lasso;
  if (name == "scad" || name == "ls_scad") return Method::ls_scad;
  if (name == "ols") return Method::ols;
  if (name == "ols_oracle") return Method::ols_oracle;
  throw input_error("unknown method: " + name);
}

namespace {

constexpr double kLsScadA = 3.7;

bool is_tobit(Method m) { return m == Method::tobit_lasso || m == Method::tobit_scad; }

std::vector<int> stratified_folds(const Dataset& data, int k, std::uint64_t fold_seed) {
  const std::size_t n = data.n_rows();
  std::vector<int> fold(n);
  std::mt19937_64 rng(seed_mix(fold_seed, 0x666f6c64ULL));
  // Censored rows occupy [0, n0), uncensored [n0, n).
  std::vector<std::size_t> group;
  auto assign = [&](std::size_t lo, std::size_t hi) {
    group.clear();
    for (std::size_t i = lo; i < hi; ++i) group.push_back(i);
    std::shuffle(group.begin(), group.end(), rng);
    for (std::size_t idx = 0; idx < group.size(); ++idx) {
      fold[group[idx]] = static_cast<int>(idx % static_cast<std::size_t>(k));
    }
  };
  assign(0, data.n_censored());
  assign(data.n_censored(), n);
  return fold;
}

// Held-out block of raw rows, kept outside Dataset so an all-censored
// held-out fold stays legal.
struct HeldOut {
  std::vector<double> x;  // column-major
  std::vector<double> y;  // shifted
  std::size_t rows = 0;
};

HeldOut gather_holdout(const Dataset& data, const std::vector<int>& fold, int f) {
  HeldOut h;
  const std::size_t n = data.n_rows();
  const std::size_t p = data.n_cols();
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < n; ++i) {
    if (fold[i] == f) rows.push_back(i);
  }
  h.rows = rows.size();
  h.x.resize(h.rows * p);
  h.y.resize(h.rows);
  for (std::size_t r = 0; r < rows.size(); ++r) h.y[r] = data.y()[rows[r]];
  for (std::size_t j = 0; j < p; ++j) {
    const double* src = data.col(j);
    for (std::size_t r = 0; r < rows.size(); ++r) h.x[j * h.rows + r] = src[rows[r]];
  }
  return h;
}

double holdout_mse(const NaturalParams& np, const HeldOut& h, std::size_t p, PredictMode mode) {
  if (h.rows == 0) return 0.0;
  const std::vector<double> pred = predict(np, h.x.data(), h.rows, p, mode, 0.0);
  double sse = 0.0;
  for (std::size_t i = 0; i < h.rows; ++i) {
    const double d = pred[i] - h.y[i];
    sse += d * d;
  }
  return sse / static_cast<double>(h.rows);
}

}  // namespace

CvResult kfold_cv(const Dataset& data, Method method, const CvOptions& opts) {
  if (!is_tobit(method) && method != Method::ls_lasso && method != Method::ls_scad) {
    throw input_error("kfold_cv supports the penalized methods only");
  }
  const int k = opts.k;
  if (k < 2 || static_cast<std::size_t>(k) > data.n_rows()) {
    throw input_error("fold count must satisfy 2 <= k <= n");
  }
  const std::size_t n = data.n_rows();
  const std::size_t p = data.n_cols();

  std::vector<int> fold;
  if (opts.fold_ids) {
    fold = *opts.fold_ids;
    if (fold.size() != n) throw input_error("fold id vector length mismatch");
  } else {
    fold = stratified_folds(data, k, opts.fold_seed);
  }

  CvResult out;
  if (opts.lambda_grid) {
    out.lambdas = *opts.lambda_grid;
  } else {
    const double top = is_tobit(method) ? lambda_max(data, opts.solver)
                                        : ls_lambda_max(data, opts.solver);
    const double ratio = (p > n) ? 0.05 : 0.01;
    out.lambdas = detail::log_lambda_grid(std::max(top, 1e-12), opts.n_lambda, ratio);
  }
  const std::size_t nl = out.lambdas.size();
  std::vector<std::vector<double>> fold_mse(k, std::vector<double>(nl, 0.0));

  const PredictMode mode = is_tobit(method) ? opts.mode : PredictMode::latent;

  for (int f = 0; f < k; ++f) {
    std::vector<std::size_t> train_rows;
    std::size_t train_unc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (fold[i] != f) {
        train_rows.push_back(i);
        if (data.y()[i] > 0.0) ++train_unc;
      }
    }
    if (train_unc == 0) {
      throw data_error("stratification failure: fold " + std::to_string(f) +
                       " leaves no uncensored training observation");
    }
    Dataset ftrain = data.subset(train_rows);
    const HeldOut held = gather_holdout(data, fold, f);

    Dataset work = ftrain;
    Standardization si;
    const bool std_on = opts.solver.standardize;
    if (std_on) si = standardize_in_place(work);

    auto natural_of = [&](const OlsenParams& th) {
      NaturalParams nat = to_natural(th);
      return std_on ? destandardize_params(nat, si) : nat;
    };

    if (is_tobit(method)) {
      OlsenParams warm = detail::null_params(work, opts.solver);
      for (std::size_t li = 0; li < nl; ++li) {
        const double lam = out.lambdas[li];
        const std::vector<double> lw(p, lam);
        detail::CoreResult core = detail::fit_core(work, lw, opts.solver, &warm, nullptr);
        warm = core.theta;
        OlsenParams fitted = core.theta;
        if (method == Method::tobit_scad) {
          const PenaltySpec pen = opts.concave_family == PenaltyFamily::mcp
                                      ? PenaltySpec::mcp(lam, opts.scad_a)
                                      : PenaltySpec::scad(lam, opts.scad_a);
          for (int step = 1; step < 3; ++step) {
            const std::vector<double> w = lla_weights(pen, fitted.delta);
            fitted = detail::fit_core(work, w, opts.solver, &fitted, nullptr).theta;
          }
        }
        fold_mse[f][li] = holdout_mse(natural_of(fitted), held, p, mode);
      }
    } else {
      detail::LsResult warm;
      bool have_warm = false;
      for (std::size_t li = 0; li < nl; ++li) {
        const double lam = out.lambdas[li];
        const std::vector<double> lw(p, lam);
        detail::LsResult core =
            detail::fit_ls_core(work, lw, opts.solver, have_warm ? &warm : nullptr);
        warm = core;
        have_warm = true;
        detail::LsResult fitted = core;
        if (method == Method::ls_scad) {
          const PenaltySpec pen = PenaltySpec::scad(lam, kLsScadA);
          for (int step = 1; step < 3; ++step) {
            const std::vector<double> w = lla_weights(pen, fitted.b);
            fitted = detail::fit_ls_core(work, w, opts.solver, &fitted);
          }
        }
        NaturalParams nat;
        nat.beta0 = fitted.b0;
        nat.beta = fitted.b;
        nat.sigma = 1.0;
        if (std_on) nat = destandardize_params(nat, si);
        fold_mse[f][li] = holdout_mse(nat, held, p, mode);
      }
    }
  }

  out.cv_mse.assign(nl, 0.0);
  for (std::size_t li = 0; li < nl; ++li) {
    double acc = 0.0;
    for (int f = 0; f < k; ++f) acc += fold_mse[f][li];
    out.cv_mse[li] = acc / static_cast<double>(k);
  }
  std::size_t best = 0;
  for (std::size_t li = 1; li < nl; ++li) {
    if (out.cv_mse[li] < out.cv_mse[best]) best = li;  // ties keep the larger lambda
  }
  out.best_lambda = out.lambdas[best];
  return out;
}

Metrics evaluate(const NaturalParams& fit, const Dataset& test, const NaturalParams& truth,
                 const std::vector<std::size_t>& selected, PredictMode mode) {
  const std::size_t p = test.n_cols();
  if (fit.beta.size() != p || truth.beta.size() != p) throw input_error("shape mismatch in evaluate");
  Metrics m;
  const std::vector<double> pred =
      predict(fit, test.col(0), test.n_rows(), p, mode, 0.0);
  double sse = 0.0;
  for (std::size_t i = 0; i < test.n_rows(); ++i) {
    const double d = pred[i] - test.y()[i];
    sse += d * d;
  }
  m.mse = sse / static_cast<double>(test.n_rows());
  double l1 = 0.0, l2 = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    const double d = fit.beta[j] - truth.beta[j];
    l1 += std::fabs(d);
    l2 += d * d;
  }
  m.l1 = l1;
  m.l2 = std::sqrt(l2);
  std::vector<char> in_true(p, 0), in_sel(p, 0);
  for (std::size_t j = 0; j < p; ++j) in_true[j] = truth.beta[j] != 0.0;
  for (std::size_t j : selected) in_sel[j] = 1;
  int fp = 0, fn = 0;
  for (std::size_t j = 0; j < p; ++j) {
    if (in_sel[j] && !in_true[j]) ++fp;
    if (!in_sel[j] && in_true[j]) ++fn;
  }
  m.fp = fp;
  m.fn = fn;
  return m;
}

// ---------------------------------------------------------------------------
// Replication driver

namespace {

NaturalParams ols_fit(const Dataset& data, const std::vector<std::size_t>& cols) {
  const std::size_t n = data.n_rows();
  const std::size_t kp = cols.size();
  if (kp + 1 > n) throw input_error("ols requires p + 1 <= n");
  Eigen::MatrixXd A(n, kp + 1);
  A.col(0).setOnes();
  for (std::size_t c = 0; c < kp; ++c) {
    A.col(c + 1) = Eigen::Map<const Eigen::VectorXd>(data.col(cols[c]), n);
  }
  Eigen::Map<const Eigen::VectorXd> y(data.y().data(), n);
  const Eigen::VectorXd sol = (A.transpose() * A).ldlt().solve(A.transpose() * y);
  const double rss = (y - A * sol).squaredNorm();
  NaturalParams np;
  np.beta0 = sol[0];
  np.beta.assign(data.n_cols(), 0.0);
  for (std::size_t c = 0; c < kp; ++c) np.beta[cols[c]] = sol[c + 1];
  np.sigma = std::sqrt(std::max(rss / static_cast<double>(n), 1e-300));
  return np;
}

struct RepContext {
  const SimDesign* design;
  const ExperimentOptions* opts;
  NaturalParams truth_full;
  std::vector<std::size_t> true_support;
};

Metrics run_method(const RepContext& ctx, const GenResult& gen, Method m, int rep,
                   std::size_t method_index) {
  const ExperimentOptions& opts = *ctx.opts;
  const SimDesign& design = *ctx.design;
  const std::uint64_t cv_seed =
      seed_mix(seed_mix(design.seed, 0xCAFEF00DULL + static_cast<std::uint64_t>(rep)),
               method_index);

  switch (m) {
    case Method::tobit_lasso: {
      CvOptions co;
      co.k = opts.cv_folds;
      co.n_lambda = opts.n_lambda;
      co.solver = opts.solver;
      co.mode = opts.mode;
      co.fold_seed = cv_seed;
      const CvResult cv = kfold_cv(gen.train, m, co);
      FitResult fit = fit_lasso(gen.train, cv.best_lambda, opts.solver);
      return evaluate(fit.natural, gen.test, ctx.truth_full, fit.support(), opts.mode);
    }
    case Method::tobit_scad: {
      CvOptions co;
      co.k = opts.cv_folds;
      co.n_lambda = opts.n_lambda;
      co.solver = opts.solver;
      co.mode = opts.mode;
      co.scad_a = 3.0;
      co.fold_seed = cv_seed;
      const CvResult cv = kfold_cv(gen.train, m, co);
      LlaResult lla = fit_folded_concave(gen.train, PenaltySpec::scad(cv.best_lambda, 3.0),
                                         LlaConfig{}, opts.solver);
      return evaluate(lla.fit.natural, gen.test, ctx.truth_full, lla.fit.support(), opts.mode);
    }
    case Method::ls_lasso: {
      CvOptions co;
      co.k = opts.cv_folds;
      co.n_lambda = opts.n_lambda;
      co.solver = opts.solver;
      co.fold_seed = cv_seed;
      const CvResult cv = kfold_cv(gen.train, m, co);
      FitResult fit = fit_ls_penalized(gen.train, PenaltySpec::lasso(cv.best_lambda), opts.solver);
      return evaluate(fit.natural, gen.test, ctx.truth_full, fit.support(), PredictMode::latent);
    }
    case Method::ls_scad: {
      CvOptions co;
      co.k = opts.cv_folds;
      co.n_lambda = opts.n_lambda;
      co.solver = opts.solver;
      co.fold_seed = cv_seed;
      const CvResult cv = kfold_cv(gen.train, m, co);
      FitResult fit =
          fit_ls_penalized(gen.train, PenaltySpec::scad(cv.best_lambda, kLsScadA), opts.solver);
      return evaluate(fit.natural, gen.test, ctx.truth_full, fit.support(), PredictMode::latent);
    }
    case Method::ols: {
      std::vector<std::size_t> all(design.p);
      for (std::size_t j = 0; j < design.p; ++j) all[j] = j;
      const NaturalParams np = ols_fit(gen.train, all);
      return evaluate(np, gen.test, ctx.truth_full, all, PredictMode::latent);
    }
    case Method::ols_oracle: {
      const NaturalParams np = ols_fit(gen.train, ctx.true_support);
      return evaluate(np, gen.test, ctx.truth_full, ctx.true_support, PredictMode::latent);
    }
  }
  throw input_error("unknown method");
}

}  // namespace

ExperimentTable run_experiment(const SimDesign& design, const std::vector<Method>& methods,
                               const ExperimentOptions& opts) {
  design.validate();
  if (methods.empty()) throw input_error("no methods requested");
  for (Method m : methods) {
    if ((m == Method::ols || m == Method::ols_oracle) && design.p + 1 > design.n_train) {
      throw input_error("ols baselines require p + 1 <= n_train");
    }
  }

  RepContext ctx;
  ctx.design = &design;
  ctx.opts = &opts;
  ctx.truth_full = NaturalParams{design.beta0, design.full_beta(), design.sigma};
  ctx.true_support = design.true_support();

  const int reps = design.replications;
  std::vector<std::vector<Metrics>> slots(reps, std::vector<Metrics>(methods.size()));
  parallel_for(static_cast<std::size_t>(reps), opts.threads, [&](std::size_t r) {
    const GenResult gen = gen_dataset(design, static_cast<int>(r));
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      slots[r][mi] = run_method(ctx, gen, methods[mi], static_cast<int>(r), mi);
    }
  });

  ExperimentTable table;
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    MethodSummary row;
    row.method = methods[mi];
    auto accumulate = [&](auto proj) {
      double mean = 0.0;
      for (int r = 0; r < reps; ++r) mean += proj(slots[r][mi]);
      mean /= reps;
      double ss = 0.0;
      for (int r = 0; r < reps; ++r) {
        const double d = proj(slots[r][mi]) - mean;
        ss += d * d;
      }
      const double sd = reps > 1 ? std::sqrt(ss / (reps - 1)) : 0.0;
      return std::pair<double, double>(mean, sd / std::sqrt(static_cast<double>(reps)));
    };
    std::tie(row.mean.mse, row.se.mse) = accumulate([](const Metrics& m) { return m.mse; });
    std::tie(row.mean.l1, row.se.l1) = accumulate([](const Metrics& m) { return m.l1; });
    std::tie(row.mean.l2, row.se.l2) = accumulate([](const Metrics& m) { return m.l2; });
    std::tie(row.mean.fp, row.se.fp) = accumulate([](const Metrics& m) { return m.fp; });
    std::tie(row.mean.fn, row.se.fn) = accumulate([](const Metrics& m) { return m.fn; });
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string fmt(double v, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

std::string ExperimentTable::csv() const {
  std::string out = "method,metric,mean,se\n";
  const char* metrics[] = {"mse", "l1", "l2", "fp", "fn"};
  for (const MethodSummary& row : rows) {
    const double means[] = {row.mean.mse, row.mean.l1, row.mean.l2, row.mean.fp, row.mean.fn};
    const double ses[] = {row.se.mse, row.se.l1, row.se.l2, row.se.fp, row.se.fn};
    for (int i = 0; i < 5; ++i) {
      out += method_name(row.method);
      out += ',';
      out += metrics[i];
      out += ',';
      out += fmt(means[i], "%.10g");
      out += ',';
      out += fmt(ses[i], "%.10g");
      out += '\n';
    }
  }
  return out;
}

std::string ExperimentTable::pretty() const {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %-14s %-14s %-14s %-12s %-12s\n", "method", "mse", "l1",
                "l2", "fp", "fn");
  out += line;
  for (const MethodSummary& row : rows) {
    auto cell = [&](double mean, double se) {
      return fmt(mean, "%.4g") + "(" + fmt(se, "%.2g") + ")";
    };
    std::snprintf(line, sizeof(line), "%-12s %-14s %-14s %-14s %-12s %-12s\n",
                  method_name(row.method).c_str(), cell(row.mean.mse, row.se.mse).c_str(),
                  cell(row.mean.l1, row.se.l1).c_str(), cell(row.mean.l2, row.se.l2).c_str(),
                  cell(row.mean.fp, row.se.fp).c_str(), cell(row.mean.fn, row.se.fn).c_str());
    out += line;
  }
  return out;
}

}  // namespace tobit
