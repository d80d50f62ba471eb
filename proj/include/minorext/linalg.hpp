#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace minorext {

// Dense rectangular matrix, row-major. Used for Gaussian data matrices X.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }
  double* row(std::size_t i) { return data.data() + i * cols; }
};

// Dense symmetric matrix. Full k*k storage; construction mirrors the upper
// triangle so entries[i][j] == entries[j][i] holds exactly.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t k) : k_(k), a_(k * k, 0.0) {
    if (k == 0) fail_input("SymMatrix: dimension must be >= 1");
  }

  // Builds from row-major data; the upper triangle wins.
  static SymMatrix from_flat(std::size_t k, const std::vector<double>& flat) {
    if (flat.size() != k * k) fail_input("SymMatrix::from_flat: size mismatch");
    SymMatrix m(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) {
        const double v = flat[i * k + j];
        m.a_[i * k + j] = v;
        m.a_[j * k + i] = v;
      }
    return m;
  }

  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t k = rows.size();
    if (k == 0) fail_input("SymMatrix::from_rows: empty");
    std::vector<double> flat;
    flat.reserve(k * k);
    for (const auto& r : rows) {
      if (r.size() != k) fail_input("SymMatrix::from_rows: ragged rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return from_flat(k, flat);
  }

  static SymMatrix identity(std::size_t k) {
    SymMatrix m(k);
    for (std::size_t i = 0; i < k; ++i) m.a_[i * k + i] = 1.0;
    return m;
  }

  static SymMatrix diag(const std::vector<double>& d) {
    SymMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.a_[i * d.size() + i] = d[i];
    return m;
  }

  std::size_t dim() const { return k_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * k_ + j]; }

  void set(std::size_t i, std::size_t j, double v) {
    a_[i * k_ + j] = v;
    a_[j * k_ + i] = v;
  }

  const double* row(std::size_t i) const { return a_.data() + i * k_; }
  const std::vector<double>& flat() const { return a_; }

  SymMatrix negated() const {
    SymMatrix m(k_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = -a_[i];
    return m;
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < k_; ++i) t += a_[i * k_ + i];
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
  }

  bool all_finite() const {
    for (double v : a_)
      if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  std::size_t k_;
  std::vector<double> a_;
};

// Eigendecomposition result; values sorted descending, vectors (when
// present) stored row-major with column c the eigenvector of values[c].
struct Spectrum {
  std::vector<double> values;
  std::vector<double> vectors;  // empty when not requested
  std::size_t dim = 0;

  bool has_vectors() const { return !vectors.empty(); }
  double vec(std::size_t i, std::size_t c) const { return vectors[i * dim + c]; }
};

namespace detail {

// One cyclic Jacobi pass over the strict upper triangle of a (k x k,
// row-major, symmetric); v accumulates rotations when non-null.
// https://en.wikipedia.org/wiki/Jacobi_eigenvalue_algorithm
inline void jacobi_sweep(double* a, double* v, std::size_t k) {
  for (std::size_t p = 0; p + 1 < k; ++p) {
    for (std::size_t q = p + 1; q < k; ++q) {
      const double apq = a[p * k + q];
      if (apq == 0.0) continue;
      const double app = a[p * k + p];
      const double aqq = a[q * k + q];
      const double theta = (aqq - app) / (2.0 * apq);
      const double t = (theta >= 0.0)
                           ? 1.0 / (theta + std::sqrt(theta * theta + 1.0))
                           : 1.0 / (theta - std::sqrt(theta * theta + 1.0));
      const double c = 1.0 / std::sqrt(t * t + 1.0);
      const double s = t * c;
      const double tau = s / (1.0 + c);

      a[p * k + p] = app - t * apq;
      a[q * k + q] = aqq + t * apq;
      a[p * k + q] = 0.0;
      a[q * k + p] = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        if (i == p || i == q) continue;
        const double aip = a[i * k + p];
        const double aiq = a[i * k + q];
        a[i * k + p] = aip - s * (aiq + tau * aip);
        a[i * k + q] = aiq + s * (aip - tau * aiq);
        a[p * k + i] = a[i * k + p];
        a[q * k + i] = a[i * k + q];
      }
      if (v) {
        for (std::size_t i = 0; i < k; ++i) {
          const double vip = v[i * k + p];
          const double viq = v[i * k + q];
          v[i * k + p] = vip - s * (viq + tau * vip);
          v[i * k + q] = viq + s * (vip - tau * viq);
        }
      }
    }
  }
}

inline double offdiag_mass(const double* a, std::size_t k) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) s += a[i * k + j] * a[i * k + j];
  return std::sqrt(2.0 * s);
}

// In-place Jacobi on a row-major symmetric buffer. Returns eigenvalues on
// the diagonal of a; rotations accumulated into v when non-null.
inline void jacobi_eigh(double* a, double* v, std::size_t k) {
  if (v) {
    std::fill(v, v + k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) v[i * k + i] = 1.0;
  }
  if (k == 1) return;
  double fro = 0.0;
  for (std::size_t i = 0; i < k * k; ++i) fro += a[i] * a[i];
  fro = std::sqrt(fro);
  const double tol = 1e-13 * (1.0 + fro);
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (offdiag_mass(a, k) < tol) return;
    jacobi_sweep(a, v, k);
  }
  if (offdiag_mass(a, k) >= tol)
    fail_domain("eigh: Jacobi did not converge in 100 sweeps; residual=" +
                std::to_string(offdiag_mass(a, k)));
}

}  // namespace detail

inline Spectrum eigh(const SymMatrix& A, bool want_vectors = true) {
  if (!A.all_finite()) fail_input("eigh: non-finite entry");
  const std::size_t k = A.dim();
  std::vector<double> a = A.flat();
  std::vector<double> v;
  if (want_vectors) v.resize(k * k);
  detail::jacobi_eigh(a.data(), want_vectors ? v.data() : nullptr, k);

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * k + x] > a[y * k + y];
  });

  Spectrum s;
  s.dim = k;
  s.values.resize(k);
  for (std::size_t c = 0; c < k; ++c) s.values[c] = a[order[c] * k + order[c]];
  if (want_vectors) {
    s.vectors.resize(k * k);
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t i = 0; i < k; ++i)
        s.vectors[i * k + c] = v[i * k + order[c]];
  }
  return s;
}

inline SymMatrix principal_minor(const SymMatrix& A, const std::vector<std::size_t>& S) {
  if (S.empty()) fail_input("principal_minor: empty index set");
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (S[i] >= A.dim()) fail_input("principal_minor: index out of range");
    if (i > 0 && S[i] <= S[i - 1])
      fail_input("principal_minor: indices must be strictly increasing");
  }
  SymMatrix m(S.size());
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = i; j < S.size(); ++j) m.set(i, j, A(S[i], S[j]));
  return m;
}

// (1/k) * sum of all entries; a lower bound on the largest eigenvalue
// (Rayleigh quotient at the all-ones vector).
inline double avg_sum_lower_bound(const SymMatrix& A) {
  double s = 0.0;
  for (double v : A.flat()) s += v;
  return s / static_cast<double>(A.dim());
}

inline double spectral_norm(const SymMatrix& A) {
  const Spectrum s = eigh(A, /*want_vectors=*/false);
  return std::max(std::abs(s.values.front()), std::abs(s.values.back()));
}

// Log-determinant of a positive definite matrix via Cholesky.
inline double log_det_psd(const SymMatrix& A) {
  const std::size_t k = A.dim();
  std::vector<double> L(k * k, 0.0);
  const auto& a = A.flat();
  double logdet = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i * k + j];
      for (std::size_t t = 0; t < j; ++t) s -= L[i * k + t] * L[j * k + t];
      if (i == j) {
        if (s <= 0.0) fail_domain("log_det_psd: matrix not positive definite");
        L[i * k + i] = std::sqrt(s);
        logdet += std::log(s);  // accumulates log(L_ii^2)
      } else {
        L[i * k + j] = s / L[j * k + j];
      }
    }
  }
  return logdet;
}

// ---------------------------------------------------------------------------
// Matrix text format: first line "k", then k whitespace-separated rows of
// k decimal floats. The writer emits 17 significant digits so values
// round-trip exactly.

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_matrix_text(std::ostream& os, const SymMatrix& A) {
  const std::size_t k = A.dim();
  os << k << "\n";
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (j) os << ' ';
      os << format_g17(A(i, j));
    }
    os << "\n";
  }
}

inline SymMatrix read_matrix_text(std::istream& is) {
  long long k = 0;
  if (!(is >> k) || k < 1) fail_input("matrix text: bad dimension line");
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(k * k));
  for (long long i = 0; i < k * k; ++i) {
    double v;
    if (!(is >> v)) fail_input("matrix text: expected " + std::to_string(k * k) + " values");
    flat.push_back(v);
  }
  return SymMatrix::from_flat(static_cast<std::size_t>(k), flat);
}

}  // namespace minorext
