#pragma once

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "special.hpp"

namespace minorext {

enum class Side { max, min };

// Cramer rate function for the mean of i.i.d. chi-square(1) variables:
// I(s) = (s - 1 - log s)/2 for s > 0, +inf otherwise.
inline double rate_I(double s) {
  if (s <= 0.0) return kInf;
  return 0.5 * (s - 1.0 - std::log(s));
}

// Sharp sparse-recovery threshold: t/(4-t) on 0 < t < 4/3, sqrt((t-1)/t)
// for t >= 4/3 (continuous at t = 4/3).
inline double b_star(double t) {
  if (!(t > 0.0)) fail_input("b_star: requires t > 0");
  if (t < 4.0 / 3.0) return t / (4.0 - t);
  return std::sqrt((t - 1.0) / t);
}

// First-order predictor for the extreme eigenvalue statistics over size-m
// principal minors.
//   wishart max: n + 2*sqrt(n*m*log p);  min: n - 2*sqrt(n*m*log p)
//   wigner  max: sqrt((4(m-1) + 2*eta) * log p);  min: its negation
inline double predict_extreme_wishart(double n, long m, double p, Side side) {
  if (!(p >= 2.0) || m < 1 || !(n >= 1.0))
    fail_input("predict_extreme_wishart: need n >= 1, m >= 1, p >= 2");
  const double dev = 2.0 * std::sqrt(n * double(m) * std::log(p));
  return side == Side::max ? n + dev : n - dev;
}

inline double predict_extreme_wigner(long m, double p, double eta, Side side) {
  if (!(p >= 2.0) || m < 1) fail_input("predict_extreme_wigner: need m >= 1, p >= 2");
  if (!(eta >= 0.0 && eta <= 2.0)) fail_input("predict_extreme_wigner: eta in [0,2]");
  const double v = (4.0 * double(m - 1) + 2.0 * eta) * std::log(p);
  const double mag = std::sqrt(std::max(v, 0.0));
  return side == Side::max ? mag : -mag;
}

struct EpsTau {
  double epsilon;
  double tau;
};

// epsilon = t / sqrt(4 m log p); tau = (1 - epsilon) * sqrt(4 log p / m),
// which equals sqrt(4 log p / m) - t/m.
inline EpsTau epsilon_tau(long m, double p, double t) {
  if (m < 1 || !(p >= 3.0) || !(t >= 0.0))
    fail_input("epsilon_tau: need m >= 1, p >= 3, t >= 0");
  const double lp = std::log(p);
  const double eps = t / std::sqrt(4.0 * double(m) * lp);
  const double tau = (1.0 - eps) * std::sqrt(4.0 * lp / double(m));
  return {eps, tau};
}

// Log-space bound on P(lambda_1 >= x or lambda_m <= -x) for an m x m Wigner
// block: -x^2/4 + kappa*m*log(x), valid for x > 4*sqrt(m), m >= 2. kappa is
// an existential constant; 3 is the working default.
inline double wigner_lambda1_tail_log_bound(double x, long m, double kappa = 3.0) {
  if (m < 2) fail_domain("wigner_lambda1_tail_log_bound: m >= 2 required");
  if (!(kappa > 0.0)) fail_domain("wigner_lambda1_tail_log_bound: kappa > 0");
  if (!(x > 4.0 * std::sqrt(double(m))))
    fail_domain("wigner_lambda1_tail_log_bound: x > 4*sqrt(m) required");
  return -x * x / 4.0 + kappa * double(m) * std::log(x);
}

// Moderate-deviation bound for an m x m Wigner block with diagonal variance
// eta: P(lambda_1 >= x) <= (m^1.5 log m / delta^m) *
// exp(-(x - 2 r delta)^2 / (2 (eta-2)/m + 4)) + 2 exp(-r^2/8), for r >= 4m,
// delta in (0,1), x > 2 r delta + 1. Returned in probability space.
inline double mdp_eta_tail_bound(double x, long m, double eta, double r, double delta) {
  if (m < 2) fail_domain("mdp_eta_tail_bound: m >= 2 required");
  if (!(eta >= 0.0 && eta <= 2.0)) fail_domain("mdp_eta_tail_bound: eta in [0,2]");
  if (!(r >= 4.0 * double(m))) fail_domain("mdp_eta_tail_bound: r >= 4m required");
  if (!(delta > 0.0 && delta < 1.0)) fail_domain("mdp_eta_tail_bound: delta in (0,1)");
  if (!(x > 2.0 * r * delta + 1.0))
    fail_domain("mdp_eta_tail_bound: x > 2 r delta + 1 required");
  const double denom = 2.0 * (eta - 2.0) / double(m) + 4.0;
  const double dev = x - 2.0 * r * delta;
  const double log_term1 = 1.5 * std::log(double(m)) + std::log(std::log(double(m))) -
                           double(m) * std::log(delta) - dev * dev / denom;
  const double log_term2 = std::log(2.0) - r * r / 8.0;
  return std::exp(log_sum_exp(log_term1, log_term2));
}

struct MdpOptimum {
  double r = 0.0;
  double delta = 0.0;
  double bound = kInf;
};

// Grid search over the free parameters of mdp_eta_tail_bound:
// r in {4m * 2^j : j = 0..10}, delta in {2^-1 .. 2^-20}.
inline MdpOptimum mdp_eta_tail_bound_opt(double x, long m, double eta) {
  MdpOptimum best;
  for (int j = 0; j <= 10; ++j) {
    const double r = 4.0 * double(m) * std::ldexp(1.0, j);
    for (int k = 1; k <= 20; ++k) {
      const double delta = std::ldexp(1.0, -k);
      if (!(x > 2.0 * r * delta + 1.0)) continue;
      const double b = mdp_eta_tail_bound(x, m, eta, r, delta);
      if (b < best.bound) best = {r, delta, b};
    }
  }
  if (best.bound == kInf)
    fail_domain("mdp_eta_tail_bound_opt: no feasible (r,delta) on the grid");
  return best;
}

// Moderate-deviation bound for the extreme eigenvalues of an m x m Wishart
// block, in log space. Upper side bounds P((lambda_1 - n)/n >= y); lower side
// bounds P((lambda_m - n)/n <= -y):
//   log[ 2 exp(-n I(1 +- (y -+ 2dmr)) + kappa m log(1/d)) + 2 exp(-m n I(r)) ]
// valid for r >= 1, 0 < d < 1/2, y > 2dmr. An I() argument <= 0 makes that
// term vanish.
inline double wishart_moderate_log_bound(double y, double n, long m, double r,
                                         double d, double kappa, Side side) {
  if (!(r >= 1.0)) fail_domain("wishart_moderate_log_bound: r >= 1 required");
  if (!(d > 0.0 && d < 0.5))
    fail_domain("wishart_moderate_log_bound: d in (0, 1/2) required");
  const double shift = 2.0 * d * double(m) * r;
  if (!(y > shift)) fail_domain("wishart_moderate_log_bound: y > 2dmr required");
  if (!(kappa > 0.0)) fail_domain("wishart_moderate_log_bound: kappa > 0");
  const double s = side == Side::max ? 1.0 + y - shift : 1.0 - y + shift;
  const double i1 = rate_I(s);
  const double log_term1 =
      i1 == kInf ? -kInf
                 : std::log(2.0) - n * i1 + kappa * double(m) * std::log(1.0 / d);
  const double log_term2 = std::log(2.0) - double(m) * n * rate_I(r);
  return log_sum_exp(log_term1, log_term2);
}

struct LogPhiBar {
  double exact;
  double asymptotic;
};

// Standard normal upper-tail log-probability, exact and first-order
// asymptotic (-x^2/2 - log x - log sqrt(2 pi)).
inline LogPhiBar log_phi_bar(double x) {
  return {log_norm_sf(x), log_norm_sf_asymptotic(x)};
}

// e^{-x} bounds P(chi2_n - n <= -2 sqrt(n x)) for every n (Gaussian-style
// lower tail bound for chi-square).
inline double chi2_lower_tail_bound(double x) {
  if (!(x > 0.0)) fail_input("chi2_lower_tail_bound: x > 0 required");
  return std::exp(-x);
}

struct LogBinomBracket {
  double exact;
  double lower;
  double upper;
};

// log C(p,m) with the elementary bracket
// m log p - m log m <= log C(p,m) <= m log p + m - m log m.
inline LogBinomBracket log_binomial_with_bounds(long p, long m) {
  if (m < 1 || m > p) fail_input("log_binomial_with_bounds: need 1 <= m <= p");
  const double dp = double(p), dm = double(m);
  const double exact =
      std::lgamma(dp + 1.0) - std::lgamma(dm + 1.0) - std::lgamma(dp - dm + 1.0);
  const double lower = dm * std::log(dp) - dm * std::log(dm);
  return {exact, lower, lower + dm};
}

// log of (p-m)!^2 / (p! (p-2m)!), strictly negative for 2m < p.
inline double overlap_ratio_log(long p, long m) {
  if (!(2 * m < p)) fail_domain("overlap_ratio_log: requires 2m < p");
  if (m < 1) fail_domain("overlap_ratio_log: requires m >= 1");
  const double dp = double(p), dm = double(m);
  return 2.0 * std::lgamma(dp - dm + 1.0) - std::lgamma(dp + 1.0) -
         std::lgamma(dp - 2.0 * dm + 1.0);
}

struct MaxLValue {
  long argmax_l;
  double value;
};

// max over integer l in [1, m-1] of (2m - l) - ((2m^2 - l^2)/m)(1-eps)^2.
// The maximum is always at l = 1, giving (2m-1) - (2m - 1/m)(1-eps)^2.
inline MaxLValue max_l_value(long m, double epsilon) {
  if (m < 2) fail_input("max_l_value: m >= 2 required");
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail_input("max_l_value: epsilon in (0,1)");
  const double dm = double(m);
  const double se = (1.0 - epsilon) * (1.0 - epsilon);
  return {1, (2.0 * dm - 1.0) - (2.0 * dm - 1.0 / dm) * se};
}

// Brute-force companion for max_l_value (test oracle).
inline double max_l_value_bruteforce(long m, double epsilon) {
  const double dm = double(m);
  const double se = (1.0 - epsilon) * (1.0 - epsilon);
  double best = -kInf;
  for (long l = 1; l <= m - 1; ++l) {
    const double dl = double(l);
    best = std::max(best, (2.0 * dm - dl) - ((2.0 * dm * dm - dl * dl) / dm) * se);
  }
  return best;
}

struct AssumptionDiagnostics {
  double rho1;    // m loglog(p) / (log p)^{1/3}
  double rho2;    // m (log n)^{3/2} (log p)^{1/2} / n^{1/4}
  double xi_p;    // logloglog p
  double omega_n; // sqrt(m / log p) * xi_p * log n
};

// Finite-sample size ratios for the slowly-varying regime assumptions.
// These are reported as diagnostics only; the asymptotic conditions have no
// finite cutoff.
inline AssumptionDiagnostics assumption_diagnostics(double n, double p, long m) {
  if (m < 1 || !(n >= 3.0)) fail_input("assumption_diagnostics: need m >= 1, n >= 3");
  const double ee = std::exp(std::exp(1.0));
  if (!(p > ee)) fail_domain("assumption_diagnostics: p > e^e required");
  const double lp = std::log(p);
  const double llp = std::log(lp);
  const double ln = std::log(n);
  AssumptionDiagnostics d{};
  d.rho1 = double(m) * llp / std::cbrt(lp);
  d.rho2 = double(m) * std::pow(ln, 1.5) * std::sqrt(lp) / std::pow(n, 0.25);
  d.xi_p = std::log(llp);
  d.omega_n = std::sqrt(double(m) / lp) * d.xi_p * ln;
  return d;
}

}  // namespace minorext
