#pragma once

#include <cmath>
#include <string>

#include "errors.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace minorext {

// Ensemble parameters. Wishart: W = X^T X with X an n x p matrix of i.i.d.
// standard normals. Wigner: symmetric p x p, independent upper-triangle
// Gaussians, off-diagonal variance 1, diagonal variance eta in [0,2].
struct EnsembleSpec {
  enum class Kind { wishart, wigner };
  Kind kind = Kind::wigner;
  long n = 0;       // wishart only
  long p = 0;
  double eta = 2.0; // wigner only

  static EnsembleSpec wishart(long n, long p) {
    EnsembleSpec s;
    s.kind = Kind::wishart;
    s.n = n;
    s.p = p;
    s.validate();
    return s;
  }

  static EnsembleSpec wigner(long p, double eta) {
    EnsembleSpec s;
    s.kind = Kind::wigner;
    s.p = p;
    s.eta = eta;
    s.validate();
    return s;
  }

  void validate() const {
    if (p < 1) fail_input("EnsembleSpec: p >= 1 required");
    if (kind == Kind::wishart) {
      if (n < 1) fail_input("EnsembleSpec: wishart needs n >= 1");
    } else {
      if (!(eta >= 0.0 && eta <= 2.0))
        fail_input("EnsembleSpec: wigner needs eta in [0,2]");
    }
  }

  std::string kind_name() const {
    return kind == Kind::wishart ? "wishart" : "wigner";
  }
};

inline Matrix sample_gaussian_matrix(long n, long p, RngStream& rng) {
  if (n < 1 || p < 1) fail_input("sample_gaussian_matrix: n,p >= 1 required");
  Matrix X(static_cast<std::size_t>(n), static_cast<std::size_t>(p));
  for (double& v : X.data) v = rng.next_normal();
  return X;
}

inline SymMatrix gram_matrix(const Matrix& X) {
  const std::size_t n = X.rows, p = X.cols;
  std::vector<double> w(p * p, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const double* x = X.row(r);
    for (std::size_t i = 0; i < p; ++i) {
      const double xi = x[i];
      double* wi = w.data() + i * p;
      for (std::size_t j = i; j < p; ++j) wi[j] += xi * x[j];
    }
  }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < i; ++j) w[i * p + j] = w[j * p + i];
  return SymMatrix::from_flat(p, w);
}

inline SymMatrix sample_wishart(long n, long p, RngStream& rng) {
  if (n < 1 || p < 1) fail_input("sample_wishart: n,p >= 1 required");
  const Matrix X = sample_gaussian_matrix(n, p, rng);
  return gram_matrix(X);
}

inline SymMatrix sample_wigner(long p, double eta, RngStream& rng) {
  if (p < 1) fail_input("sample_wigner: p >= 1 required");
  if (!(eta >= 0.0 && eta <= 2.0)) fail_input("sample_wigner: eta in [0,2] required");
  const double diag_sd = std::sqrt(eta);
  SymMatrix W(static_cast<std::size_t>(p));
  for (long i = 0; i < p; ++i) {
    W.set(i, i, diag_sd * rng.next_normal());
    for (long j = i + 1; j < p; ++j) W.set(i, j, rng.next_normal());
  }
  return W;
}

inline SymMatrix sample_ensemble(const EnsembleSpec& spec, RngStream& rng) {
  spec.validate();
  if (spec.kind == EnsembleSpec::Kind::wishart)
    return sample_wishart(spec.n, spec.p, rng);
  return sample_wigner(spec.p, spec.eta, rng);
}

}  // namespace minorext
