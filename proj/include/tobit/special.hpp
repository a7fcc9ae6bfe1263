#pragma once

namespace tobit {

// Standard normal density and distribution function.
double norm_pdf(double s);
double norm_cdf(double s);

// log Phi(s), evaluated in log space so the left tail never underflows.
double norm_logcdf(double s);

// Scaled complementary error function exp(z^2) * erfc(z) for z >= 0.
double erfcx_pos(double z);

// Inverse Mills ratio g(s) = phi(s) / Phi(s).
//
// Strictly positive and strictly decreasing. The left tail is computed
// through erfcx so that values like g(-300) = 300.0033... come out to full
// precision instead of 0/0. For s beyond roughly 38.6 the true value drops
// below the smallest subnormal double and the function returns 0.
double inv_mills(double s);

// h(s) = g(s) * (s + g(s)), the curvature weight of a censored
// observation. Lies strictly inside (0, 1); equals -g'(s).
double hazard(double s);

}  // namespace tobit
