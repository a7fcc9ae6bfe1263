#pragma once
#include <cstddef>
#include <utility>
#include <vector>

#include "tobit/types.hpp"

namespace tobit {

// Left-censored regression data. The response is stored shifted so the
// censoring threshold is zero: y[i] >= 0 and y[i] == 0 exactly for the
// censored rows. Rows are kept partitioned with the censored block first,
// so the two likelihood terms run over contiguous ranges of each column.
class Dataset {
 public:
  // x is column-major with n rows and p columns, rows in caller order.
  // y_raw is the raw response; rows with y_raw < censor_value are
  // rejected (input_error). Fails with data_error when no row is
  // uncensored.
  static Dataset from_raw(std::vector<double> x_colmajor, std::size_t n, std::size_t p,
                          const std::vector<double>& y_raw, double censor_value);

  // Same but y is already shifted and partition-ready rows are detected
  // from y > 0. Used by the generators and fold splitting.
  static Dataset from_shifted(std::vector<double> x_colmajor, std::size_t n, std::size_t p,
                              std::vector<double> y_shifted, double censor_shift);

  std::size_t n_rows() const { return n_; }
  std::size_t n_cols() const { return p_; }
  std::size_t n_censored() const { return n0_; }
  std::size_t n_uncensored() const { return n1_; }
  double censor_shift() const { return censor_shift_; }

  const double* col(std::size_t j) const { return x_.data() + j * n_; }
  const std::vector<double>& y() const { return y_; }
  // Uncensored responses, contiguous.
  const double* y_uncensored() const { return y_.data() + n0_; }

  // Row i of the internal order as a dense vector (for predictions).
  void copy_row(std::size_t i, double* out) const;

  // Subset by internal row indices (ascending); preserves the partition.
  Dataset subset(const std::vector<std::size_t>& rows) const;

  std::vector<double>& mutable_x() { return x_; }

 private:
  Dataset() = default;
  std::size_t n_ = 0, p_ = 0, n0_ = 0, n1_ = 0;
  double censor_shift_ = 0.0;
  std::vector<double> x_;  // column-major, censored rows first
  std::vector<double> y_;
};

// Returns a standardized copy together with the applied transform.
// Throws data_error naming the column when a column has zero variance.
std::pair<Dataset, Standardization> standardize(const Dataset& data);

// In-place variant used by the solvers.
Standardization standardize_in_place(Dataset& data);

}  // namespace tobit
