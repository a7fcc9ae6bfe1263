#include "tobit/dataset.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "tobit/errors.hpp"
#include "tobit/kernels.hpp"

namespace tobit {

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw input_error(std::string("non-finite value in ") + what);
  }
}

}  // namespace

Dataset Dataset::from_raw(std::vector<double> x_colmajor, std::size_t n, std::size_t p,
                          const std::vector<double>& y_raw, double censor_value) {
  if (y_raw.size() != n || x_colmajor.size() != n * p) {
    throw input_error("design matrix / response shape mismatch");
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double yi = y_raw[i] - censor_value;
    if (!std::isfinite(yi)) throw input_error("non-finite response at row " + std::to_string(i + 1));
    if (yi < 0.0) {
      throw input_error("response below censoring threshold at row " + std::to_string(i + 1));
    }
    y[i] = yi;
  }
  return from_shifted(std::move(x_colmajor), n, p, std::move(y), censor_value);
}

Dataset Dataset::from_shifted(std::vector<double> x_colmajor, std::size_t n, std::size_t p,
                              std::vector<double> y_shifted, double censor_shift) {
  check_finite(x_colmajor, "design matrix");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(y_shifted[i] >= 0.0)) {
      throw input_error("shifted response must be nonnegative (row " + std::to_string(i + 1) +
                        ")");
    }
  }
  // Partition: censored rows (y == 0) first, preserving relative order.
  std::vector<std::size_t> order;
  order.reserve(n);
  std::size_t n0 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(y_shifted[i] > 0.0)) {
      order.push_back(i);
      ++n0;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (y_shifted[i] > 0.0) order.push_back(i);
  }
  const std::size_t n1 = n - n0;
  if (n1 == 0) throw data_error("every observation is censored; scale is unidentifiable");

  Dataset out;
  out.n_ = n;
  out.p_ = p;
  out.n0_ = n0;
  out.n1_ = n1;
  out.censor_shift_ = censor_shift;
  out.y_.resize(n);
  out.x_.resize(n * p);
  for (std::size_t i = 0; i < n; ++i) out.y_[i] = y_shifted[order[i]];
  for (std::size_t j = 0; j < p; ++j) {
    const double* src = x_colmajor.data() + j * n;
    double* dst = out.x_.data() + j * n;
    for (std::size_t i = 0; i < n; ++i) dst[i] = src[order[i]];
  }
  return out;
}

void Dataset::copy_row(std::size_t i, double* out) const {
  for (std::size_t j = 0; j < p_; ++j) out[j] = x_[j * n_ + i];
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset out;
  const std::size_t m = rows.size();
  out.n_ = m;
  out.p_ = p_;
  out.censor_shift_ = censor_shift_;
  out.y_.resize(m);
  out.x_.resize(m * p_);
  std::size_t n0 = 0;
  for (std::size_t i = 0; i < m; ++i) {
    out.y_[i] = y_[rows[i]];
    if (!(out.y_[i] > 0.0)) ++n0;
  }
  out.n0_ = n0;
  out.n1_ = m - n0;
  if (out.n1_ == 0) throw data_error("subset has no uncensored observation");
  for (std::size_t j = 0; j < p_; ++j) {
    const double* src = x_.data() + j * n_;
    double* dst = out.x_.data() + j * m;
    for (std::size_t i = 0; i < m; ++i) dst[i] = src[rows[i]];
  }
  return out;
}

Standardization standardize_in_place(Dataset& data) {
  const std::size_t n = data.n_rows();
  const std::size_t p = data.n_cols();
  Standardization s;
  s.mean.resize(p);
  s.scale.resize(p);
  std::vector<double>& x = data.mutable_x();
  for (std::size_t j = 0; j < p; ++j) {
    double* col = x.data() + j * n;
    const double mu = kernels::sum(col, n) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) col[i] -= mu;
    const double ms = kernels::sum_sq(col, n) / static_cast<double>(n);
    if (ms <= 0.0) {
      throw data_error("column " + std::to_string(j + 1) + " has zero variance");
    }
    const double sd = std::sqrt(ms);
    for (std::size_t i = 0; i < n; ++i) col[i] /= sd;
    s.mean[j] = mu;
    s.scale[j] = sd;
  }
  return s;
}

std::pair<Dataset, Standardization> standardize(const Dataset& data) {
  Dataset copy = data;
  Standardization s = standardize_in_place(copy);
  return {std::move(copy), std::move(s)};
}

}  // namespace tobit
