#include "tobit/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace tobit::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();  // kernels_avx2.cpp
#endif

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}

double sum_sq_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

constexpr Ops kScalarOps{dot_scalar, axpy_scalar, sum_scalar, sum_sq_scalar, "scalar"};

#if defined(__x86_64__) || defined(_M_X64)
bool cpu_has_avx2() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#else
bool cpu_has_avx2() { return false; }
#endif

const Ops* avx2_table() {
#if defined(__x86_64__) || defined(_M_X64)
  return &avx2_ops();
#else
  return nullptr;
#endif
}

std::atomic<const Ops*> g_active{nullptr};

const Ops* pick_default() {
  if (cpu_has_avx2()) {
    if (const Ops* t = avx2_table()) return t;
  }
  return &kScalarOps;
}

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

const Ops& active_ops() {
  const Ops* t = g_active.load(std::memory_order_acquire);
  if (!t) {
    t = pick_default();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void select_backend(const std::string& name) {
  if (name == "auto") {
    g_active.store(pick_default(), std::memory_order_release);
  } else if (name == "scalar") {
    g_active.store(&kScalarOps, std::memory_order_release);
  } else if (name == "avx2") {
    if (!cpu_has_avx2()) throw std::invalid_argument("avx2 backend not supported on this CPU");
    g_active.store(avx2_table(), std::memory_order_release);
  } else {
    throw std::invalid_argument("unknown kernel backend: " + name);
  }
}

const char* backend_name() { return active_ops().name; }

}  // namespace tobit::kernels
