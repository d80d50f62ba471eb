#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"

namespace minorext {

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112353;
inline constexpr double kLogSqrt2Pi = 0.9189385332046727417803297364056176;
inline constexpr double kSqrt2 = 1.4142135623730950488016887242096981;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Log-gamma for positive arguments (thin wrapper so the backend is swappable).
inline double log_gamma(double x) {
  if (!(x > 0.0)) fail_domain("log_gamma: requires x > 0");
  return std::lgamma(x);
}

namespace detail {

// Regularized lower incomplete gamma P(a,x) by series expansion, valid for
// x < a+1. Numerical Recipes style, tolerance 1e-12.
inline double gamma_p_series(double a, double x) {
  const double gln = std::lgamma(a);
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-12)
      return sum * std::exp(-x + a * std::log(x) - gln);
  }
  fail_domain("gamma_p: series did not converge");
}

// Regularized upper incomplete gamma Q(a,x) by continued fraction with
// modified Lentz evaluation, valid for x >= a+1.
// https://en.wikipedia.org/wiki/Lentz%27s_algorithm
inline double gamma_q_contfrac(double a, double x) {
  const double gln = std::lgamma(a);
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-12)
      return std::exp(-x + a * std::log(x) - gln) * h;
  }
  fail_domain("gamma_q: continued fraction did not converge");
}

}  // namespace detail

// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a).
inline double gamma_p(double a, double x) {
  if (!(a > 0.0)) fail_domain("gamma_p: requires a > 0");
  if (x < 0.0) fail_domain("gamma_p: requires x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::gamma_p_series(a, x);
  return 1.0 - detail::gamma_q_contfrac(a, x);
}

inline double gamma_q(double a, double x) {
  if (!(a > 0.0)) fail_domain("gamma_q: requires a > 0");
  if (x < 0.0) fail_domain("gamma_q: requires x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_contfrac(a, x);
}

// Chi-square CDF with n degrees of freedom.
inline double chi2_cdf(double x, double n) {
  if (!(n > 0.0)) fail_domain("chi2_cdf: requires n > 0");
  if (x <= 0.0) return 0.0;
  return gamma_p(n / 2.0, x / 2.0);
}

// Chi-square log-pdf with n degrees of freedom.
inline double chi2_log_pdf(double x, double n) {
  if (!(n > 0.0)) fail_domain("chi2_log_pdf: requires n > 0");
  if (x <= 0.0) return -kInf;
  return (n / 2.0 - 1.0) * std::log(x) - x / 2.0 - (n / 2.0) * std::log(2.0) -
         std::lgamma(n / 2.0);
}

// Standard normal CDF.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

// Standard normal log-pdf.
inline double norm_log_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

namespace detail {

// Mills ratio P(N>x)/phi(x) as the continued fraction
// 1/(x + 1/(x + 2/(x + 3/(...)))), evaluated backward with fixed depth;
// accurate to full double precision for x >= 8.
inline double mills_ratio_cf(double x) {
  double t = 0.0;
  for (int k = 64; k >= 1; --k) t = static_cast<double>(k) / (x + t);
  return 1.0 / (x + t);
}

}  // namespace detail

// Log of the standard normal upper tail, accurate for all x (erfc branch for
// moderate x, continued-fraction branch past the erfc underflow region).
inline double log_norm_sf(double x) {
  if (x <= 8.0) return std::log(0.5 * std::erfc(x / kSqrt2));
  return norm_log_pdf(x) + std::log(detail::mills_ratio_cf(x));
}

// First-order asymptotic of log_norm_sf: -x^2/2 - log(x) - log(sqrt(2*pi)).
inline double log_norm_sf_asymptotic(double x) {
  return -0.5 * x * x - std::log(x) - kLogSqrt2Pi;
}

// log(exp(a) + exp(b)) without overflow; -inf inputs behave as zero terms.
inline double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// exp() clamped at 1, mapping a log-space probability bound into [0,1].
inline double clamped_exp(double logv) {
  if (logv >= 0.0) return 1.0;
  return std::exp(logv);
}

}  // namespace minorext
