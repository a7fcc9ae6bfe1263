#pragma once
#include <cstddef>
#include <string>
#include <vector>

namespace tobit {

enum class PenaltyFamily { lasso, weighted_lasso, scad, mcp };

std::string family_name(PenaltyFamily f);
PenaltyFamily family_from_name(const std::string& name);

struct PenaltySpec {
  PenaltyFamily family = PenaltyFamily::lasso;
  double lambda = 0.0;
  double a = 0.0;                // concavity parameter, scad/mcp only
  std::vector<double> weights;   // weighted_lasso only, nonnegative, length p

  static PenaltySpec lasso(double lambda);
  static PenaltySpec weighted_lasso(double lambda, std::vector<double> weights);
  static PenaltySpec scad(double lambda, double a = 3.0);
  static PenaltySpec mcp(double lambda, double a = 3.0);

  // Enforces lambda >= 0, a > 2 for scad, a > 1 for mcp, and weight
  // shape/sign for the weighted lasso. Throws input_error.
  void validate(std::size_t p) const;
};

// P'_lambda(t) for t >= 0. Nonnegative, nonincreasing, equals lambda at 0
// and vanishes for t >= a * lambda (scad/mcp).
double penalty_deriv(const PenaltySpec& spec, double t);

// P_lambda(t) for t >= 0, the exact piecewise integral of penalty_deriv.
double penalty_value(const PenaltySpec& spec, double t);

// Sum of the penalty over a slope vector (weights applied if present).
double penalty_total(const PenaltySpec& spec, const std::vector<double>& delta);

// Adaptive weights w_j = P'_lambda(|delta_j|) for the next linearized
// solve. Defined for scad/mcp only.
std::vector<double> lla_weights(const PenaltySpec& spec, const std::vector<double>& delta);

}  // namespace tobit
