#include "tobit/penalty.hpp"

#include <algorithm>
#include <cmath>

#include "tobit/errors.hpp"

namespace tobit {

std::string family_name(PenaltyFamily f) {
  switch (f) {
    case PenaltyFamily::lasso: return "lasso";
    case PenaltyFamily::weighted_lasso: return "weighted_lasso";
    case PenaltyFamily::scad: return "scad";
    case PenaltyFamily::mcp: return "mcp";
  }
  return "?";
}

PenaltyFamily family_from_name(const std::string& name) {
  if (name == "lasso") return PenaltyFamily::lasso;
  if (name == "weighted_lasso") return PenaltyFamily::weighted_lasso;
  if (name == "scad") return PenaltyFamily::scad;
  if (name == "mcp") return PenaltyFamily::mcp;
  throw input_error("unknown penalty family: " + name);
}

PenaltySpec PenaltySpec::lasso(double lambda) { return {PenaltyFamily::lasso, lambda, 0.0, {}}; }

PenaltySpec PenaltySpec::weighted_lasso(double lambda, std::vector<double> weights) {
  return {PenaltyFamily::weighted_lasso, lambda, 0.0, std::move(weights)};
}

PenaltySpec PenaltySpec::scad(double lambda, double a) {
  return {PenaltyFamily::scad, lambda, a, {}};
}

PenaltySpec PenaltySpec::mcp(double lambda, double a) { return {PenaltyFamily::mcp, lambda, a, {}}; }

void PenaltySpec::validate(std::size_t p) const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw input_error("lambda must be >= 0");
  if (family == PenaltyFamily::scad && !(a > 2.0)) throw input_error("scad requires a > 2");
  if (family == PenaltyFamily::mcp && !(a > 1.0)) throw input_error("mcp requires a > 1");
  if (family == PenaltyFamily::weighted_lasso) {
    if (weights.size() != p) throw input_error("weight vector length mismatch");
    for (double w : weights) {
      if (!(w >= 0.0)) throw input_error("weights must be nonnegative");
    }
  }
}

double penalty_deriv(const PenaltySpec& spec, double t) {
  if (t < 0.0) throw input_error("penalty argument must be >= 0");
  const double lam = spec.lambda;
  switch (spec.family) {
    case PenaltyFamily::lasso:
    case PenaltyFamily::weighted_lasso:
      return lam;
    case PenaltyFamily::scad:
      if (t <= lam) return lam;
      return std::max(spec.a * lam - t, 0.0) / (spec.a - 1.0);
    case PenaltyFamily::mcp:
      return std::max(lam - t / spec.a, 0.0);
  }
  return 0.0;
}

double penalty_value(const PenaltySpec& spec, double t) {
  if (t < 0.0) throw input_error("penalty argument must be >= 0");
  const double lam = spec.lambda;
  const double a = spec.a;
  switch (spec.family) {
    case PenaltyFamily::lasso:
    case PenaltyFamily::weighted_lasso:
      return lam * t;
    case PenaltyFamily::scad:
      if (t <= lam) return lam * t;
      if (t <= a * lam) return (2.0 * a * lam * t - t * t - lam * lam) / (2.0 * (a - 1.0));
      return (a + 1.0) * lam * lam / 2.0;
    case PenaltyFamily::mcp:
      if (t <= a * lam) return lam * t - t * t / (2.0 * a);
      return a * lam * lam / 2.0;
  }
  return 0.0;
}

double penalty_total(const PenaltySpec& spec, const std::vector<double>& delta) {
  double acc = 0.0;
  if (spec.family == PenaltyFamily::weighted_lasso) {
    for (std::size_t j = 0; j < delta.size(); ++j) {
      acc += spec.lambda * spec.weights[j] * std::fabs(delta[j]);
    }
    return acc;
  }
  for (double d : delta) acc += penalty_value(spec, std::fabs(d));
  return acc;
}

std::vector<double> lla_weights(const PenaltySpec& spec, const std::vector<double>& delta) {
  if (spec.family != PenaltyFamily::scad && spec.family != PenaltyFamily::mcp) {
    throw input_error("adaptive weights are defined for scad/mcp only");
  }
  std::vector<double> w(delta.size());
  for (std::size_t j = 0; j < delta.size(); ++j) {
    w[j] = penalty_deriv(spec, std::fabs(delta[j]));
  }
  return w;
}

}  // namespace tobit
