#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tobit/kernels.hpp"

using namespace tobit;

namespace {

std::vector<double> randn(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar and dispatched kernels agree") {
  std::mt19937_64 rng(7);
  const kernels::Ops& ref = kernels::scalar_ops();
  const kernels::Ops& act = kernels::active_ops();
  for (std::size_t n : {0u, 1u, 2u, 5u, 8u, 33u, 100u, 1000u}) {
    std::vector<double> a = randn(rng, n), b = randn(rng, n);
    const double tol = 1e-12 * (1.0 + static_cast<double>(n));
    CHECK(std::fabs(ref.dot(a.data(), b.data(), n) - act.dot(a.data(), b.data(), n)) <= tol);
    CHECK(std::fabs(ref.sum(a.data(), n) - act.sum(a.data(), n)) <= tol);
    CHECK(std::fabs(ref.sum_sq(a.data(), n) - act.sum_sq(a.data(), n)) <= tol);
    std::vector<double> y1 = randn(rng, n), y2 = y1;
    ref.axpy(1.37, a.data(), y1.data(), n);
    act.axpy(1.37, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));
  }
}

TEST_CASE("kernel backend selection") {
  const std::string original = kernels::backend_name();
  kernels::select_backend("scalar");
  CHECK(std::string(kernels::backend_name()) == "scalar");
  kernels::select_backend("auto");
  CHECK_THROWS(kernels::select_backend("neon"));
  // auto restores the platform default
  CHECK(std::string(kernels::backend_name()) == original);
}

TEST_CASE("dot matches a simple reference on known input") {
  const std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::vector<double> b{9, 8, 7, 6, 5, 4, 3, 2, 1};
  CHECK(kernels::dot(a.data(), b.data(), 9) == doctest::Approx(165.0));
  CHECK(kernels::sum(a.data(), 9) == doctest::Approx(45.0));
  CHECK(kernels::sum_sq(a.data(), 9) == doctest::Approx(285.0));
}
