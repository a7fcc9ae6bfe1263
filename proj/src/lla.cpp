#include "tobit/lla.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tobit/detail/solver_core.hpp"
#include "tobit/errors.hpp"

namespace tobit {

namespace {

std::vector<std::size_t> nonzeros(const std::vector<double>& v) {
  std::vector<std::size_t> s;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] != 0.0) s.push_back(j);
  }
  return s;
}

}  // namespace

LlaResult fit_folded_concave(const Dataset& data, const PenaltySpec& penalty,
                             const LlaConfig& lla, const SolverConfig& solver) {
  if (penalty.family != PenaltyFamily::scad && penalty.family != PenaltyFamily::mcp) {
    throw input_error("fit_folded_concave requires a scad or mcp penalty");
  }
  penalty.validate(data.n_cols());
  if (lla.steps < 1) throw input_error("lla steps must be >= 1");

  Dataset work = data;
  Standardization std_info;
  if (solver.standardize) std_info = standardize_in_place(work);
  const std::size_t p = work.n_cols();

  OlsenParams current;
  switch (lla.init) {
    case LlaConfig::Init::zero:
      current = detail::null_params(work, solver);
      break;
    case LlaConfig::Init::lasso: {
      const double lam = lla.lasso_lambda > 0.0 ? lla.lasso_lambda : penalty.lambda;
      const std::vector<double> lw(p, lam);
      current = detail::fit_core(work, lw, solver, nullptr, nullptr).theta;
      break;
    }
    case LlaConfig::Init::explicit_params:
      if (lla.explicit_init.delta.size() != p) throw input_error("explicit init size mismatch");
      current = lla.explicit_init;
      break;
  }

  LlaResult out;
  bool all_converged = true;
  detail::CoreResult core;
  std::vector<double> last_weights(p, penalty.lambda);
  for (int step = 0; step < lla.steps; ++step) {
    const std::vector<double> w = lla_weights(penalty, current.delta);
    core = detail::fit_core(work, w, solver, &current, nullptr);
    all_converged = all_converged && core.converged;
    current = core.theta;
    last_weights = w;
    out.support_history.push_back(nonzeros(current.delta));
    double folded = core.loss;
    for (double d : current.delta) folded += penalty_value(penalty, std::fabs(d));
    out.objective_history.push_back(folded);
  }

  FitResult fr;
  fr.theta = core.theta;
  NaturalParams nat = to_natural(core.theta);
  fr.natural = solver.standardize ? destandardize_params(nat, std_info) : nat;
  fr.objective = out.objective_history.back();
  fr.cycles_used = core.cycles;
  fr.kkt_residual = core.kkt;
  fr.converged = all_converged && core.converged;
  fr.lambda = penalty.lambda;
  fr.weights_used.assign(p, 1.0);
  if (penalty.lambda > 0.0) {
    for (std::size_t j = 0; j < p; ++j) fr.weights_used[j] = last_weights[j] / penalty.lambda;
  }
  out.fit = std::move(fr);
  return out;
}

FitResult fit_oracle(const Dataset& data, const std::vector<std::size_t>& support,
                     const SolverConfig& solver) {
  const std::size_t p = data.n_cols();
  for (std::size_t j : support) {
    if (j >= p) throw input_error("support index out of range");
  }

  Dataset work = data;
  Standardization std_info;
  if (solver.standardize) std_info = standardize_in_place(work);

  SolverConfig cfg = solver;
  cfg.tol = std::min(cfg.tol, 1e-9);  // drives the restricted gradient below 1e-8
  cfg.active_set = false;

  const std::vector<double> lw(p, 0.0);
  detail::CoreResult core = detail::fit_core(work, lw, cfg, nullptr, &support);
  if (!core.converged) {
    throw data_error("restricted fit did not converge; degenerate restricted design");
  }

  FitResult fr;
  fr.theta = core.theta;
  NaturalParams nat = to_natural(core.theta);
  fr.natural = solver.standardize ? destandardize_params(nat, std_info) : nat;
  fr.objective = core.objective;
  fr.cycles_used = core.cycles;
  fr.kkt_residual = core.kkt;
  fr.converged = core.converged;
  fr.lambda = 0.0;
  return fr;
}

}  // namespace tobit
