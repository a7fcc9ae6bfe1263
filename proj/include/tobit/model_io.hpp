#pragma once
#include <string>
#include <vector>

#include "tobit/types.hpp"

namespace tobit {

// Fitted model persisted as a single self-describing JSON document with an
// explicit schema version. Serialization is deterministic (sorted keys,
// shortest round-trip number formatting), so write -> read -> write is
// byte-identical.
struct ModelFile {
  int schema_version = 1;
  std::string family;  // lasso / weighted_lasso / scad / mcp / ls_*
  double lambda = 0.0;
  double a = 0.0;
  double beta0 = 0.0;
  std::vector<double> beta;  // raw predictor scale
  double sigma = 1.0;
  double censor_shift = 0.0;
  Standardization standardization;
  std::vector<std::string> column_names;
  double objective = 0.0;
  double kkt_residual = 0.0;
  int cycles = 0;
  bool converged = true;

  NaturalParams natural() const { return {beta0, beta, sigma}; }

  std::string to_json() const;
  static ModelFile from_json(const std::string& text);

  void save(const std::string& path) const;
  static ModelFile load(const std::string& path);
};

}  // namespace tobit
