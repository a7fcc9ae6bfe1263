#pragma once
#include <cstddef>
#include <string>

namespace tobit::kernels {

// Dense inner-loop primitives used by the coordinate-descent sweeps.
// A scalar reference implementation always exists; on x86-64 an AVX2+FMA
// variant is selected at runtime when the CPU supports it. The two
// variants are equivalence-tested against each other.
struct Ops {
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*sum_sq)(const double* a, std::size_t n);
  const char* name;
};

const Ops& scalar_ops();

// Currently active table (AVX2 if available, unless overridden).
const Ops& active_ops();

// Force a backend by name: "scalar", "avx2" or "auto". Throws
// std::invalid_argument for unknown names or an unavailable backend.
void select_backend(const std::string& name);

const char* backend_name();

inline double dot(const double* a, const double* b, std::size_t n) {
  return active_ops().dot(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active_ops().axpy(alpha, x, y, n);
}
inline double sum(const double* a, std::size_t n) { return active_ops().sum(a, n); }
inline double sum_sq(const double* a, std::size_t n) { return active_ops().sum_sq(a, n); }

}  // namespace tobit::kernels
