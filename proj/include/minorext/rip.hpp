#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "asymptotics.hpp"
#include "ensembles.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "minors.hpp"
#include "rng.hpp"

namespace minorext {

// n x p matrix with i.i.d. N(0, 1/n) entries; drawn as standard normals and
// scaled, so the raw draws match sample_gaussian_matrix bit for bit.
inline Matrix sample_sensing_matrix(long n, long p, RngStream& rng) {
  if (n < 1 || p < 1) fail_input("sample_sensing_matrix: n, p >= 1 required");
  Matrix X = sample_gaussian_matrix(n, p, rng);
  const double inv = 1.0 / std::sqrt(double(n));
  for (long i = 0; i < n; ++i) {
    double* row = X.row(i);
    for (long j = 0; j < p; ++j) row[j] *= inv;
  }
  return X;
}

struct RipExtremes {
  double lambda_max = 0.0;  // max over |S| = k of lambda_1(X_S^T X_S)
  double lambda_min = 0.0;  // min over |S| = k of lambda_k(X_S^T X_S)
};

inline RipExtremes rip_extremes(const Matrix& X, long k, Strategy strategy) {
  const SymMatrix W = gram_matrix(X);
  RipExtremes e;
  try {
    e.lambda_max = max_minor_lambda1(W, k, strategy).value;
    e.lambda_min = min_minor_lambdam(W, k, strategy).value;
  } catch (const Error& err) {
    if (err.kind() == ErrKind::capacity)
      fail_capacity(std::string(err.what()) +
                    "; strategy greedy gives a sampled lower bound");
    throw;
  }
  return e;
}

// delta_k = max(lambda_max(k) - 1, 1 - lambda_min(k))
inline double exact_rip_constant(const Matrix& X, long k, Strategy strategy) {
  const RipExtremes e = rip_extremes(X, k, strategy);
  return std::max(e.lambda_max - 1.0, 1.0 - e.lambda_min);
}

// asymptotic size of delta_m for an n x p Gaussian design
inline double predicted_delta(long n, long p, long m) {
  if (n < 2 || p < 2) fail_input("predicted_delta: n, p >= 2 required");
  if (m < 1 || m > p) fail_input("predicted_delta: 1 <= m <= p required");
  return 2.0 * std::sqrt(double(m) * std::log(double(p)) / double(n));
}

// recovery guarantee holds iff delta_{t k} < b*(t), strictly
inline bool check_recovery_condition(double delta_tk, double t) {
  return delta_tk < b_star(t);
}

// smallest n with predicted delta_{tk} <= (1 - margin) * b*(t)
inline long design_min_n(double p, long k, double t, double margin) {
  if (!(p >= 2.0) || k < 1) fail_input("design_min_n: p >= 2, k >= 1 required");
  if (!(margin >= 0.0 && margin < 1.0)) fail_input("design_min_n: margin in [0,1)");
  const double tk = t * double(k);
  const double r = tk - std::round(tk);
  if (std::abs(r) > 1e-9) fail_input("design_min_n: t*k must be an integer");
  const double m = std::round(tk);
  if (m < 1.0) fail_input("design_min_n: t*k >= 1 required");
  const double b = b_star(t);
  const double target = (1.0 - margin) * b;
  const double n = 4.0 * m * std::log(double(p)) / (target * target);
  return (long)std::ceil(n - 1e-9);
}

struct RipReport {
  long n = 0, p = 0, k = 0;
  double t = 0.0;
  long m = 0;  // t * k
  bool has_exact = false;
  double delta_exact = 0.0;
  double lambda_max_k = 0.0;
  double lambda_min_k = 0.0;
  double delta_predicted = 0.0;
  double b_star_t = 0.0;
  bool recovery_pass = false;
};

inline RipReport build_rip_report(long n, long p, long k, double t,
                                  std::uint64_t seed, bool compute_exact = true,
                                  Strategy strategy = Strategy::branch_and_bound) {
  if (n < 1 || p < 2 || k < 1) fail_input("build_rip_report: n >= 1, p >= 2, k >= 1");
  if (!(t >= 1.0)) fail_input("build_rip_report: t >= 1 required");
  const double tk = t * double(k);
  if (std::abs(tk - std::round(tk)) > 1e-9)
    fail_input("build_rip_report: t*k must be an integer");
  const long m = (long)std::llround(tk);
  if (m > p) fail_input("build_rip_report: t*k <= p required");

  RipReport rep;
  rep.n = n;
  rep.p = p;
  rep.k = k;
  rep.t = t;
  rep.m = m;
  rep.delta_predicted = predicted_delta(n, p, m);
  rep.b_star_t = b_star(t);

  if (compute_exact) {
    RngStream rng = RngStream::root(seed);
    const Matrix X = sample_sensing_matrix(n, p, rng);
    const RipExtremes e = rip_extremes(X, m, strategy);
    rep.has_exact = true;
    rep.lambda_max_k = e.lambda_max;
    rep.lambda_min_k = e.lambda_min;
    rep.delta_exact = std::max(e.lambda_max - 1.0, 1.0 - e.lambda_min);
    rep.recovery_pass = check_recovery_condition(rep.delta_exact, t);
  } else {
    rep.recovery_pass = check_recovery_condition(rep.delta_predicted, t);
  }
  return rep;
}

}  // namespace minorext
