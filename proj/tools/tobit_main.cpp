#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "tobit/csv.hpp"
#include "tobit/dataset.hpp"
#include "tobit/diagnostics.hpp"
#include "tobit/errors.hpp"
#include "tobit/kernels.hpp"
#include "tobit/lla.hpp"
#include "tobit/loss.hpp"
#include "tobit/model_io.hpp"
#include "tobit/parallel.hpp"
#include "tobit/penalty.hpp"
#include "tobit/simlab.hpp"
#include "tobit/solver.hpp"

namespace {

using namespace tobit;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitData = 3;
constexpr int kExitNonConverged = 4;
constexpr int kExitPropertyFailure = 5;

struct LoadedData {
  Dataset dataset;
  std::vector<std::string> predictor_names;
};

LoadedData load_dataset(const std::string& path, const std::string& response,
                        double censor_value, const std::vector<std::string>& exclude) {
  const CsvTable table = read_csv(path);
  const int yc = table.find(response);
  if (yc < 0) {
    throw input_error("response column '" + response + "' not found in " + path);
  }
  std::vector<std::size_t> keep;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (static_cast<int>(j) == yc) continue;
    if (std::find(exclude.begin(), exclude.end(), table.columns[j]) != exclude.end()) continue;
    keep.push_back(j);
    names.push_back(table.columns[j]);
  }
  if (keep.empty()) throw input_error("no predictor columns left in " + path);
  const std::size_t n = table.rows();
  std::vector<double> x(n * keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) {
    std::copy(table.data[keep[c]].begin(), table.data[keep[c]].end(), x.begin() + c * n);
  }
  return {Dataset::from_raw(std::move(x), n, keep.size(), table.data[yc], censor_value),
          std::move(names)};
}

PredictMode mode_from_name(const std::string& name) {
  if (name == "latent") return PredictMode::latent;
  if (name == "censored-mean") return PredictMode::censored_mean;
  if (name == "prob") return PredictMode::prob_uncensored;
  throw input_error("unknown prediction mode: " + name);
}

int cmd_fit(const std::string& data_path, const std::string& response, double censor_value,
            const std::vector<std::string>& exclude, const std::string& family_name_str,
            double lambda, bool use_cv, int cv_folds, int n_lambda, double a_param,
            int lla_steps, const std::string& out_path, double tol, int max_cycles,
            bool allow_nonconverged, std::uint64_t seed, const std::string& mode_name) {
  LoadedData loaded = load_dataset(data_path, response, censor_value, exclude);
  const Dataset& data = loaded.dataset;

  const PenaltyFamily family = family_from_name(family_name_str);
  if (family == PenaltyFamily::weighted_lasso) {
    throw input_error("fit accepts lasso, scad or mcp (weighted lasso is internal)");
  }
  double a = a_param;
  if (a <= 0.0) a = 3.0;

  SolverConfig solver;
  solver.tol = tol;
  solver.max_cycles = max_cycles;

  double chosen_lambda = lambda;
  if (use_cv) {
    CvOptions co;
    co.k = cv_folds;
    co.n_lambda = n_lambda;
    co.solver = solver;
    co.mode = mode_from_name(mode_name);
    co.scad_a = a;
    co.concave_family = family == PenaltyFamily::lasso ? PenaltyFamily::scad : family;
    co.fold_seed = seed;
    const Method m = family == PenaltyFamily::lasso ? Method::tobit_lasso : Method::tobit_scad;
    chosen_lambda = kfold_cv(data, m, co).best_lambda;
  } else if (chosen_lambda < 0.0) {
    throw input_error("either --lambda or --cv is required");
  }

  FitResult fit;
  if (family == PenaltyFamily::lasso) {
    fit = fit_lasso(data, chosen_lambda, solver);
  } else {
    PenaltySpec pen = family == PenaltyFamily::scad ? PenaltySpec::scad(chosen_lambda, a)
                                                    : PenaltySpec::mcp(chosen_lambda, a);
    LlaConfig lla;
    lla.steps = lla_steps;
    fit = fit_folded_concave(data, pen, lla, solver).fit;
  }

  if (!fit.converged && !allow_nonconverged) {
    std::cerr << "fit did not converge within " << max_cycles
              << " cycles (rerun with --allow-nonconverged to keep it)\n";
    return kExitNonConverged;
  }

  ModelFile model;
  model.family = family_name_str;
  model.lambda = chosen_lambda;
  model.a = family == PenaltyFamily::lasso ? 0.0 : a;
  model.beta0 = fit.natural.beta0;
  model.beta = fit.natural.beta;
  model.sigma = fit.natural.sigma;
  model.censor_shift = censor_value;
  model.standardization = standardize(data).second;
  model.column_names = loaded.predictor_names;
  model.objective = fit.objective;
  model.kkt_residual = fit.kkt_residual;
  model.cycles = fit.cycles_used;
  model.converged = fit.converged;
  model.save(out_path);

  std::printf("lambda        %.10g\n", chosen_lambda);
  std::printf("support size  %zu\n", fit.support().size());
  std::printf("objective     %.10g\n", fit.objective);
  std::printf("kkt residual  %.3g\n", fit.kkt_residual);
  std::printf("model written to %s\n", out_path.c_str());
  return kExitOk;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& mode_name, const std::string& out_path) {
  const ModelFile model = ModelFile::load(model_path);
  const CsvTable table = read_csv(data_path);
  const std::size_t n = table.rows();
  std::vector<double> x(n * model.column_names.size());
  for (std::size_t c = 0; c < model.column_names.size(); ++c) {
    const int idx = table.find(model.column_names[c]);
    if (idx < 0) {
      throw input_error("model column '" + model.column_names[c] + "' not found in " + data_path);
    }
    std::copy(table.data[idx].begin(), table.data[idx].end(), x.begin() + c * n);
  }
  const std::vector<double> pred =
      predict(model.natural(), x.data(), n, model.column_names.size(),
              mode_from_name(mode_name), model.censor_shift);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw input_error("cannot write " + out_path);
    out = &file;
  }
  write_csv(*out, {"prediction"}, {pred});
  return kExitOk;
}

int cmd_path(const std::string& data_path, const std::string& response, double censor_value,
             const std::vector<std::string>& exclude, int n_lambda, double min_ratio,
             const std::string& out_path) {
  LoadedData loaded = load_dataset(data_path, response, censor_value, exclude);
  const PathResult path = fit_path(loaded.dataset, n_lambda, min_ratio);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw input_error("cannot write " + out_path);
    out = &file;
  }
  std::vector<double> lam, nnz, obj, kkt, conv, cyc;
  for (std::size_t k = 0; k < path.fits.size(); ++k) {
    lam.push_back(path.lambdas[k]);
    nnz.push_back(static_cast<double>(path.fits[k].support().size()));
    obj.push_back(path.fits[k].objective);
    kkt.push_back(path.fits[k].kkt_residual);
    conv.push_back(path.fits[k].converged ? 1.0 : 0.0);
    cyc.push_back(path.fits[k].cycles_used);
  }
  write_csv(*out, {"lambda", "nonzero", "objective", "kkt_residual", "converged", "cycles"},
            {lam, nnz, obj, kkt, conv, cyc});
  return kExitOk;
}

int cmd_cv(const std::string& data_path, const std::string& response, double censor_value,
           const std::vector<std::string>& exclude, const std::string& method_str, int k,
           int n_lambda, std::uint64_t seed, const std::string& mode_name, double a_param,
           const std::string& out_path) {
  LoadedData loaded = load_dataset(data_path, response, censor_value, exclude);
  CvOptions co;
  co.k = k;
  co.n_lambda = n_lambda;
  co.fold_seed = seed;
  co.mode = mode_from_name(mode_name);
  if (a_param > 0.0) co.scad_a = a_param;
  const CvResult cv = kfold_cv(loaded.dataset, method_from_name(method_str), co);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw input_error("cannot write " + out_path);
    out = &file;
  }
  std::printf("best_lambda %.10g\n", cv.best_lambda);
  write_csv(*out, {"lambda", "cv_mse"}, {cv.lambdas, cv.cv_mse});
  return kExitOk;
}

int cmd_simulate(const std::string& design_name, double q, std::size_t p, int reps,
                 std::uint64_t seed, std::size_t n_train, std::size_t n_test,
                 const std::string& methods_str, const std::string& mode_name, int threads,
                 bool full, const std::string& out_path) {
  SimDesign design;
  if (design_name == "table1") {
    design.covariance = CovarianceKind::independent;
  } else if (design_name == "table2") {
    design.covariance = CovarianceKind::cs;
    design.rho = 0.5;
  } else if (design_name == "table3") {
    design.covariance = CovarianceKind::cs;
    design.rho = 0.8;
  } else if (design_name == "table4") {
    design.covariance = CovarianceKind::ar1;
    design.rho = 0.5;
  } else if (design_name == "table5") {
    design.covariance = CovarianceKind::ar1;
    design.rho = 0.8;
  } else {
    throw input_error("unknown design (expected table1..table5): " + design_name);
  }
  design.q = q;
  design.p = (p == 0) ? (full ? 500 : 50) : p;
  design.replications = (reps == 0) ? (full ? 100 : 20) : reps;
  design.seed = seed;
  design.n_train = n_train;
  design.n_test = n_test;

  std::vector<Method> methods;
  if (methods_str.empty()) {
    methods = {Method::tobit_lasso, Method::tobit_scad, Method::ls_lasso, Method::ls_scad};
    if (design.p + 1 <= design.n_train) {
      methods.push_back(Method::ols_oracle);
      methods.push_back(Method::ols);
    }
  } else {
    std::string token;
    for (char c : methods_str + ",") {
      if (c == ',') {
        if (!token.empty()) methods.push_back(method_from_name(token));
        token.clear();
      } else {
        token += c;
      }
    }
  }

  ExperimentOptions opts;
  opts.threads = threads;
  opts.mode = mode_from_name(mode_name);
  const ExperimentTable table = run_experiment(design, methods, opts);

  std::cout << table.pretty();
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) throw input_error("cannot write " + out_path);
    file << table.csv();
  }
  return kExitOk;
}

int cmd_check(std::uint64_t seed) {
  bool all_pass = true;
  for (const CheckResult& r : run_numeric_checks(seed)) {
    std::printf("%s %-20s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    all_pass = all_pass && r.pass;
  }
  return all_pass ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"penalized censored (left-censored Gaussian) regression"};
  app.require_subcommand(1);

  std::string kernels_backend = "auto";
  app.add_option("--kernels", kernels_backend, "kernel backend: auto, scalar or avx2");

  auto* fit = app.add_subcommand("fit", "fit a penalized model to a CSV dataset");
  std::string fit_data, fit_response, fit_out = "model.json", fit_family = "lasso";
  std::string fit_mode = "censored-mean";
  std::vector<std::string> fit_exclude;
  double fit_censor = 0.0, fit_lambda = -1.0, fit_a = -1.0, fit_tol = 1e-7;
  int fit_cv_folds = 5, fit_nlambda = 100, fit_steps = 3, fit_max_cycles = 10000;
  bool fit_cv = false, fit_allow_nc = false;
  std::uint64_t fit_seed = 1;
  fit->add_option("--data", fit_data, "input CSV with a header row")->required();
  fit->add_option("--response", fit_response, "response column name")->required();
  fit->add_option("--censor-value", fit_censor, "left-censoring threshold (default 0)");
  fit->add_option("--exclude", fit_exclude, "predictor columns to drop")->delimiter(',');
  fit->add_option("--penalty", fit_family, "lasso, scad or mcp");
  fit->add_option("--lambda", fit_lambda, "penalty level");
  fit->add_flag("--cv", fit_cv, "choose lambda by k-fold cross-validation");
  fit->add_option("--cv-folds", fit_cv_folds, "folds for --cv");
  fit->add_option("--n-lambda", fit_nlambda, "grid size for --cv");
  fit->add_option("--a", fit_a, "concavity parameter for scad/mcp (default 3)");
  fit->add_option("--lla-steps", fit_steps, "reweighting steps for scad/mcp");
  fit->add_option("--tol", fit_tol, "convergence tolerance");
  fit->add_option("--max-cycles", fit_max_cycles, "sweep limit");
  fit->add_flag("--allow-nonconverged", fit_allow_nc, "keep a non-converged fit");
  fit->add_option("--seed", fit_seed, "seed for CV fold assignment");
  fit->add_option("--mode", fit_mode, "CV prediction mode: censored-mean, latent, prob");
  fit->add_option("--out", fit_out, "output model path");

  auto* pred = app.add_subcommand("predict", "predict from a saved model");
  std::string pred_model, pred_data, pred_mode = "censored-mean", pred_out;
  pred->add_option("--model", pred_model, "model JSON path")->required();
  pred->add_option("--data", pred_data, "input CSV")->required();
  pred->add_option("--mode", pred_mode, "latent, censored-mean or prob");
  pred->add_option("--out", pred_out, "output CSV (default stdout)");

  auto* path = app.add_subcommand("path", "lasso regularization path summary");
  std::string path_data, path_response, path_out;
  std::vector<std::string> path_exclude;
  double path_censor = 0.0, path_ratio = -1.0;
  int path_nlambda = 100;
  path->add_option("--data", path_data)->required();
  path->add_option("--response", path_response)->required();
  path->add_option("--censor-value", path_censor);
  path->add_option("--exclude", path_exclude)->delimiter(',');
  path->add_option("--n-lambda", path_nlambda);
  path->add_option("--lambda-min-ratio", path_ratio);
  path->add_option("--out", path_out, "output CSV (default stdout)");

  auto* cv = app.add_subcommand("cv", "k-fold cross-validation curve");
  std::string cv_data, cv_response, cv_method = "tobit_lasso", cv_mode = "censored-mean", cv_out;
  std::vector<std::string> cv_exclude;
  double cv_censor = 0.0, cv_a = -1.0;
  int cv_k = 5, cv_nlambda = 100;
  std::uint64_t cv_seed = 1;
  cv->add_option("--data", cv_data)->required();
  cv->add_option("--response", cv_response)->required();
  cv->add_option("--censor-value", cv_censor);
  cv->add_option("--exclude", cv_exclude)->delimiter(',');
  cv->add_option("--method", cv_method, "tobit_lasso, tobit_scad, lasso or scad");
  cv->add_option("--k", cv_k, "fold count (k = n gives leave-one-out)");
  cv->add_option("--n-lambda", cv_nlambda);
  cv->add_option("--seed", cv_seed);
  cv->add_option("--mode", cv_mode);
  cv->add_option("--a", cv_a, "concavity parameter override");
  cv->add_option("--out", cv_out, "output CSV (default stdout)");

  auto* sim = app.add_subcommand("simulate", "replicated synthetic-data comparison");
  std::string sim_design = "table1", sim_methods, sim_mode = "censored-mean", sim_out;
  double sim_q = 0.125;
  std::size_t sim_p = 0, sim_ntrain = 100, sim_ntest = 5000;
  int sim_reps = 0, sim_threads = default_thread_count();
  std::uint64_t sim_seed = 1;
  bool sim_full = false;
  sim->add_option("--design", sim_design, "table1..table5 (covariance structure)");
  sim->add_option("--q", sim_q, "censored fraction: 0.125, 0.25 or 0.5");
  sim->add_option("--p", sim_p, "predictor count (default 50, 500 with --full)");
  sim->add_option("--reps", sim_reps, "replications (default 20, 100 with --full)");
  sim->add_option("--seed", sim_seed);
  sim->add_option("--n-train", sim_ntrain);
  sim->add_option("--n-test", sim_ntest);
  sim->add_option("--methods", sim_methods, "comma list; default all applicable");
  sim->add_option("--mode", sim_mode, "prediction mode for the tobit methods");
  sim->add_option("--threads", sim_threads, "worker threads (default TOBIT_THREADS or cores)");
  sim->add_flag("--full", sim_full, "paper-scale defaults: 100 reps, p = 500");
  sim->add_option("-o,--out", sim_out, "write the CSV table here");

  auto* check = app.add_subcommand("check", "run the numerical property suite");
  std::uint64_t check_seed = 12345;
  check->add_option("--seed", check_seed);

  try {
    app.parse(argc, argv);
    kernels::select_backend(kernels_backend);
    if (*fit) {
      return cmd_fit(fit_data, fit_response, fit_censor, fit_exclude, fit_family, fit_lambda,
                     fit_cv, fit_cv_folds, fit_nlambda, fit_a, fit_steps, fit_out, fit_tol,
                     fit_max_cycles, fit_allow_nc, fit_seed, fit_mode);
    }
    if (*pred) return cmd_predict(pred_model, pred_data, pred_mode, pred_out);
    if (*path) {
      return cmd_path(path_data, path_response, path_censor, path_exclude, path_nlambda,
                      path_ratio, path_out);
    }
    if (*cv) {
      return cmd_cv(cv_data, cv_response, cv_censor, cv_exclude, cv_method, cv_k, cv_nlambda,
                    cv_seed, cv_mode, cv_a, cv_out);
    }
    if (*sim) {
      return cmd_simulate(sim_design, sim_q, sim_p, sim_reps, sim_seed, sim_ntrain, sim_ntest,
                          sim_methods, sim_mode, sim_threads, sim_full, sim_out);
    }
    if (*check) return cmd_check(check_seed);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitInput;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
