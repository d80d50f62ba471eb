#pragma once

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "special.hpp"

namespace minorext {

// Multivariate gamma function in log space:
// log Gamma_m(a) = (m(m-1)/4) log pi + sum_{j=1..m} log Gamma(a - (j-1)/2).
inline double log_multivariate_gamma(long m, double a) {
  if (m < 1) fail_input("log_multivariate_gamma: m >= 1 required");
  if (!(a > 0.5 * double(m - 1)))
    fail_domain("log_multivariate_gamma: a > (m-1)/2 required");
  double s = 0.25 * double(m) * double(m - 1) * std::log(M_PI);
  for (long j = 1; j <= m; ++j) s += std::lgamma(a - 0.5 * double(j - 1));
  return s;
}

// Normalizing constants (log space) for the eigenvalue and matrix densities:
//   c_{m,n}: ordered-eigenvalue density of an n-sample Wishart block
//   C(m,n) : constant collected after centering mu = n + sqrt(n) v
//   c_m    : ordered-eigenvalue density of the Gaussian orthogonal block
//   A(m,n) : standardized Wishart matrix density constant
//   B(m)   : Gaussian orthogonal matrix density constant
// C(m,n) -> c_m and A(m,n) -> B(m) as n grows with m fixed.
struct GammaConstants {
  double log_c_mn;
  double log_C_mn;
  double log_c_m;
  double log_A_mn;
  double log_B_m;
};

// log c_m: ordered-eigenvalue density constant of the m x m Gaussian
// orthogonal block; m! 2^{-m} 2^{-m(m-1)/4} pi^{-m/2} prod Gamma(3/2)/Gamma(1+j/2).
inline double log_wigner_eig_const(long m) {
  if (m < 1) fail_input("log_wigner_eig_const: m >= 1 required");
  const double dm = double(m);
  double s = std::lgamma(dm + 1.0) - dm * std::log(2.0) -
             (dm * (dm - 1.0) / 4.0) * std::log(2.0) - (dm / 2.0) * std::log(M_PI);
  for (long j = 1; j <= m; ++j)
    s += std::lgamma(1.5) - std::lgamma(1.0 + 0.5 * double(j));
  return s;
}

inline GammaConstants gamma_constants(long m, double n) {
  if (m < 1 || !(n > double(m))) fail_input("gamma_constants: need 1 <= m < n");
  const double dm = double(m);
  const double log_gamma_3_2 = std::lgamma(1.5);

  double log_c_mn = std::lgamma(dm + 1.0) - (n * dm / 2.0) * std::log(2.0);
  for (long j = 1; j <= m; ++j)
    log_c_mn += log_gamma_3_2 - std::lgamma(1.0 + 0.5 * double(j)) -
                std::lgamma(0.5 * (n - dm + double(j)));

  // n^{m/2} e^{-nm/2} n^{m(n-m+1)/2 - m} n^{m(m-1)/4} c_{m,n}
  const double n_exponent =
      dm / 2.0 + dm * (n - dm + 1.0) / 2.0 - dm + dm * (dm - 1.0) / 4.0;
  const double log_C_mn = n_exponent * std::log(n) - n * dm / 2.0 + log_c_mn;

  const double log_c_m = log_wigner_eig_const(m);

  const double log_A_mn = (dm * (dm + 1.0) / 4.0 + dm * (n - dm - 1.0) / 2.0) *
                              std::log(n) -
                          n * dm / 2.0 - (n * dm / 2.0) * std::log(2.0) -
                          log_multivariate_gamma(m, n / 2.0);

  const double log_B_m =
      -(dm * (dm + 1.0) / 4.0) * kLog2Pi - (dm / 2.0) * std::log(2.0);

  return {log_c_mn, log_C_mn, log_c_m, log_A_mn, log_B_m};
}

namespace detail {

// Strictly descending check; ties and order violations are density-zero.
inline bool strictly_descending(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i - 1] > v[i])) return false;
  return true;
}

inline double log_vandermonde(const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < v.size(); ++j)
    for (std::size_t i = j + 1; i < v.size(); ++i) s += std::log(v[j] - v[i]);
  return s;
}

}  // namespace detail

// Ordered-eigenvalue log density of an m x m Gaussian orthogonal block
// (diagonal variance 2): log c_m - (1/4) sum lambda^2 + sum log differences.
// Outside the ordered region the density is zero: returns -inf.
inline double log_wigner_eig_density(const std::vector<double>& lambda, long m) {
  if (lambda.empty() || long(lambda.size()) != m)
    fail_input("log_wigner_eig_density: length mismatch");
  if (!detail::strictly_descending(lambda)) return -kInf;
  double s = log_wigner_eig_const(m);
  for (double v : lambda) s -= 0.25 * v * v;
  return s + detail::log_vandermonde(lambda);
}

// Ordered-eigenvalue log density of an m x m Wishart block with n samples.
inline double log_wishart_eig_density(const std::vector<double>& mu, long m, double n) {
  if (mu.empty() || long(mu.size()) != m)
    fail_input("log_wishart_eig_density: length mismatch");
  if (!(n > double(m) - 1.0)) fail_input("log_wishart_eig_density: n > m-1 required");
  if (!detail::strictly_descending(mu) || !(mu.back() > 0.0)) return -kInf;
  // c_{m,n} only needs n > m-1, a weaker guard than gamma_constants' n > m
  const double dm = double(m);
  double s = std::lgamma(dm + 1.0) - (n * dm / 2.0) * std::log(2.0);
  for (long j = 1; j <= m; ++j)
    s += std::lgamma(1.5) - std::lgamma(1.0 + 0.5 * double(j)) -
         std::lgamma(0.5 * (n - dm + double(j)));
  for (double v : mu) {
    s -= 0.5 * v;
    s += (0.5 * (n - dm + 1.0) - 1.0) * std::log(v);
  }
  return s + detail::log_vandermonde(mu);
}

// Log density of v = (mu - n)/sqrt(n) for mu a Wishart eigenvalue vector,
// written in the centered form
//   log C(m,n) - (sqrt(n)/2) sum v_i + ((n-m-1)/2) sum log(1 + v_i/sqrt(n))
//   + sum log differences,
// supported on v_1 > ... > v_m > -sqrt(n). The change-of-variables identity
// g_{n,m}(v) = n^{m/2} f_{m,n}(n + sqrt(n) v) is exercised by tests.
inline double log_shifted_wishart_eig_density(const std::vector<double>& v, long m,
                                              double n) {
  if (v.empty() || long(v.size()) != m)
    fail_input("log_shifted_wishart_eig_density: length mismatch");
  if (!(n > double(m))) fail_input("log_shifted_wishart_eig_density: n > m required");
  const double sqn = std::sqrt(n);
  if (!detail::strictly_descending(v) || !(v.back() > -sqn)) return -kInf;
  const GammaConstants gc = gamma_constants(m, n);
  double s = gc.log_C_mn;
  for (double x : v) {
    s -= 0.5 * sqn * x;
    s += 0.5 * (n - double(m) - 1.0) * std::log1p(x / sqn);
  }
  return s + detail::log_vandermonde(v);
}

// log g_{n,m}(v) - log f_m(v): how far the centered Wishart eigenvalue law
// is from the Gaussian orthogonal one. Valid for ||v||_inf <= (2/3) sqrt(n).
inline double log_eig_density_ratio(const std::vector<double>& v, long m, double n) {
  if (v.empty() || long(v.size()) != m)
    fail_input("log_eig_density_ratio: length mismatch");
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  if (!(vmax <= (2.0 / 3.0) * std::sqrt(n)))
    fail_domain("log_eig_density_ratio: ||v||_inf <= (2/3) sqrt(n) required");
  if (!detail::strictly_descending(v)) fail_domain("log_eig_density_ratio: v not descending");
  return log_shifted_wishart_eig_density(v, m, n) - log_wigner_eig_density(v, m);
}

struct MatrixDensities {
  double wishart_shifted;  // density of (W - n I)/sqrt(n) at w
  double goe;              // Gaussian orthogonal density at w
  double ratio;            // difference of the two logs
};

// Matrix-level log densities at a symmetric m x m point w:
//   standardized Wishart: log A(m,n) + ((n-m-1)/2) log|I + w/sqrt(n)|
//                         - (sqrt(n)/2) tr(w)
//   Gaussian orthogonal:  log B(m) - tr(w^2)/4
inline MatrixDensities log_matrix_densities(const SymMatrix& w, double n) {
  const long m = long(w.dim());
  if (!(n > double(m))) fail_input("log_matrix_densities: n > m required");
  const GammaConstants gc = gamma_constants(m, n);
  const double sqn = std::sqrt(n);

  double tr = 0.0, tr2 = 0.0;
  for (long i = 0; i < m; ++i) {
    tr += w(i, i);
    for (long j = 0; j < m; ++j) tr2 += w(i, j) * w(j, i);
  }

  double wish = -kInf;
  SymMatrix shifted(w.dim());
  for (long i = 0; i < m; ++i)
    for (long j = i; j < m; ++j)
      shifted.set(i, j, (i == j ? 1.0 : 0.0) + w(i, j) / sqn);
  try {
    const double ld = log_det_psd(shifted);
    wish = gc.log_A_mn + 0.5 * (n - double(m) - 1.0) * ld - 0.5 * sqn * tr;
  } catch (const Error&) {
    wish = -kInf;  // outside the support of the shifted law
  }

  const double goe = gc.log_B_m - 0.25 * tr2;
  const double ratio = wish == -kInf ? -kInf : wish - goe;
  return {wish, goe, ratio};
}

}  // namespace minorext
