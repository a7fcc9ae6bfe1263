#pragma once
#include <stdexcept>
#include <string>

namespace tobit {

// Malformed or inconsistent input (bad CSV, missing column, response below
// the censoring threshold). CLI exit code 2.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Structurally unusable data (all observations censored, zero-variance
// column, degenerate restricted design). CLI exit code 3.
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tobit
