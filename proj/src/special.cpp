#include "tobit/special.hpp"

#include <cmath>

namespace tobit {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2*pi)
constexpr double kSqrt2OverPi = 0.7978845608028653559;  // sqrt(2/pi)
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrtPi = 0.5641895835477562869;
constexpr double kLogSqrt2Pi = 0.9189385332046727418;  // log(sqrt(2*pi))

// Direct product is safe up to z = 25: exp(625) and erfc(25) are both
// normalized doubles. Beyond that the asymptotic series converges to full
// precision in a dozen terms.
double erfcx_large(double z) {
  const double r = 1.0 / (2.0 * z * z);
  double term = 1.0;
  double s = 1.0;
  for (int k = 1; k <= 12; ++k) {
    term *= -(2 * k - 1) * r;
    s += term;
    if (std::fabs(term) < 1e-20 * std::fabs(s)) break;
  }
  return s * kInvSqrtPi / z;
}

// Asymptotic pieces for the far left tail of g and h. For t = -s >= 20,
// w approximates t * Phi(-t) / phi(t) and d = 1 - w, both free of
// cancellation. Then g(-t) = t / w and h(-t) = t^2 * d / w^2.
struct TailSeries {
  double w;
  double d;
};

TailSeries mills_tail(double t) {
  const double r = 1.0 / (t * t);
  double term = 1.0;
  double w = 1.0;
  double d = 0.0;
  for (int k = 1; k <= 16; ++k) {
    term *= -(2 * k - 1) * r;
    w += term;
    d -= term;
    if (std::fabs(term) < 1e-20) break;
  }
  return {w, d};
}

}  // namespace

double norm_pdf(double s) { return kInvSqrt2Pi * std::exp(-0.5 * s * s); }

double norm_cdf(double s) { return 0.5 * std::erfc(-s * kInvSqrt2); }

double erfcx_pos(double z) {
  if (z >= 25.0) return erfcx_large(z);
  return std::exp(z * z) * std::erfc(z);
}

double inv_mills(double s) {
  if (s < 0.0) {
    if (s <= -20.0) {
      const TailSeries ts = mills_tail(-s);
      return -s / ts.w;
    }
    return kSqrt2OverPi / erfcx_pos(-s * kInvSqrt2);
  }
  // Phi(s) >= 1/2 here, no tail trouble; underflow of phi for s > 38.6
  // reflects the true magnitude of the result.
  return norm_pdf(s) / norm_cdf(s);
}

double hazard(double s) {
  if (s <= -20.0) {
    const TailSeries ts = mills_tail(-s);
    return s * s * ts.d / (ts.w * ts.w);
  }
  const double g = inv_mills(s);
  return g * (s + g);
}

double norm_logcdf(double s) {
  if (s >= 0.0) {
    // log(1 - Q) with Q the upper tail; avoids rounding Phi to 1.
    return std::log1p(-0.5 * std::erfc(s * kInvSqrt2));
  }
  if (s >= -1.0) {
    return std::log(norm_cdf(s));
  }
  // log Phi = log phi - log g in the tail.
  return -0.5 * s * s - kLogSqrt2Pi - std::log(inv_mills(s));
}

}  // namespace tobit
