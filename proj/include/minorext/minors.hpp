#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace minorext {

enum class Strategy { enumerate, branch_and_bound, greedy };

inline std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::enumerate: return "enumerate";
    case Strategy::branch_and_bound: return "branch_and_bound";
    case Strategy::greedy: return "greedy";
  }
  return "?";
}

inline Strategy strategy_from_name(const std::string& s) {
  if (s == "enumerate") return Strategy::enumerate;
  if (s == "branch_and_bound") return Strategy::branch_and_bound;
  if (s == "greedy") return Strategy::greedy;
  fail_input("unknown strategy: " + s);
}

struct SubsetExtremeResult {
  double value = 0.0;
  std::vector<std::size_t> subset;  // sorted original indices, |subset| == m
  std::uint64_t nodes_explored = 0;
  Strategy strategy = Strategy::enumerate;
};

namespace detail {

inline constexpr double kInfBound = 1e300;

inline double log_binom(double p, double m) {
  return std::lgamma(p + 1.0) - std::lgamma(m + 1.0) - std::lgamma(p - m + 1.0);
}

// Largest eigenvalue of the 2x2 symmetric matrix [[a, b], [b, c]].
inline double lambda1_2x2(double a, double c, double b) {
  const double half_sum = 0.5 * (a + c);
  const double half_diff = 0.5 * (a - c);
  return half_sum + std::hypot(half_diff, b);
}

// Largest eigenvalue of the minor rows/cols `idx` of the row-major symmetric
// buffer `base` with stride `stride`. `scratch` must hold m*m doubles.
inline double lambda1_minor(const double* base, std::size_t stride,
                            const std::size_t* idx, std::size_t m,
                            std::vector<double>& scratch) {
  if (m == 1) return base[idx[0] * stride + idx[0]];
  if (m == 2) {
    const std::size_t i = idx[0], j = idx[1];
    return lambda1_2x2(base[i * stride + i], base[j * stride + j],
                       base[i * stride + j]);
  }
  scratch.assign(m * m, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c)
      scratch[r * m + c] = base[idx[r] * stride + idx[c]];
  jacobi_eigh(scratch.data(), nullptr, m);
  double mx = scratch[0];
  for (std::size_t r = 1; r < m; ++r) mx = std::max(mx, scratch[r * m + r]);
  return mx;
}

// Depth-first branch-and-bound over the index-increasing subset tree.
// Candidates are pre-sorted by diagonal entry descending, so the candidate
// pool at any node is a contiguous suffix of the sorted order. Each node is
// pruned against the incumbent using an admissible upper bound on
// lambda_1(W_S) over all completions S:
//   * a Gershgorin-style bound: for each row i of the chosen-plus-pool set,
//     diag(i) + sum of |offdiag| over chosen rows + sum of the largest
//     remaining |offdiag| entries any completion could still add; the
//     largest eigenvalue of every completion is at most the max over rows
//     (row-sum bound on the spectral radius);
//   * for small pools, lambda_1 of the chosen-plus-pool minor, an upper
//     bound for every completion by Cauchy interlacing. Full-pool
//     eigenvalues are not affordable at every node for large p, which is
//     why the Gershgorin screen runs first.
// The incumbent is initialized from the greedy heuristic and ties are broken
// toward the lexicographically smallest subset in original index order.
class BranchAndBound {
 public:
  BranchAndBound(const SymMatrix& A, std::size_t m)
      : p_(A.dim()), m_(m), order_(p_), B_(p_ * p_) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t x, std::size_t y) { return A(x, x) > A(y, y); });
    for (std::size_t t = 0; t < p_; ++t)
      for (std::size_t u = 0; u < p_; ++u) B_[t * p_ + u] = A(order_[t], order_[u]);
  }

  void run(double incumbent_value, std::vector<std::size_t> incumbent_subset) {
    best_ = incumbent_value;
    best_subset_ = std::move(incumbent_subset);
    P_.clear();
    dfs(0);
  }

  double best() const { return best_; }
  const std::vector<std::size_t>& best_subset() const { return best_subset_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  static constexpr double kPruneEps = 1e-12;
  static constexpr std::size_t kPoolEigCap = 32;

  void dfs(std::size_t t) {
    ++nodes_;
    const std::size_t q = m_ - P_.size();
    if (q == 0) {
      update_incumbent();
      return;
    }
    if (!P_.empty()) {
      const double bound = node_bound(t, q);
      if (bound <= best_ + kPruneEps) return;
    }
    for (std::size_t c = t; c + q <= p_; ++c) {
      P_.push_back(c);
      dfs(c + 1);
      P_.pop_back();
    }
  }

  void update_incumbent() {
    const double v = lambda1_minor(B_.data(), p_, P_.data(), m_, scratch_);
    std::vector<std::size_t> orig(m_);
    for (std::size_t i = 0; i < m_; ++i) orig[i] = order_[P_[i]];
    std::sort(orig.begin(), orig.end());
    if (v > best_ || (v == best_ && orig < best_subset_)) {
      best_ = v;
      best_subset_ = std::move(orig);
    }
  }

  // Sum of the k largest |row[u]| over pool columns u in [t, p), optionally
  // skipping column `skip`.
  double sum_top_abs(const double* row, std::size_t t, std::size_t k,
                     std::size_t skip) {
    if (k == 0) return 0.0;
    if (k == 1) {
      double mx = 0.0;
      for (std::size_t u = t; u < p_; ++u)
        if (u != skip) mx = std::max(mx, std::abs(row[u]));
      return mx;
    }
    topbuf_.clear();
    for (std::size_t u = t; u < p_; ++u)
      if (u != skip) topbuf_.push_back(std::abs(row[u]));
    if (topbuf_.size() <= k)
      return std::accumulate(topbuf_.begin(), topbuf_.end(), 0.0);
    std::nth_element(topbuf_.begin(), topbuf_.begin() + k - 1, topbuf_.end(),
                     std::greater<double>());
    return std::accumulate(topbuf_.begin(), topbuf_.begin() + k, 0.0);
  }

  double node_bound(std::size_t t, std::size_t q) {
    double bound = -kInfBound;
    for (std::size_t a : P_) {
      const double* row = B_.data() + a * p_;
      double s = row[a];
      for (std::size_t b : P_)
        if (b != a) s += std::abs(row[b]);
      s += sum_top_abs(row, t, q, p_);
      bound = std::max(bound, s);
    }
    for (std::size_t j = t; j < p_; ++j) {
      const double* row = B_.data() + j * p_;
      double s = row[j];
      for (std::size_t b : P_) s += std::abs(row[b]);
      s += sum_top_abs(row, t, q - 1, j);
      bound = std::max(bound, s);
    }
    if (bound <= best_ + kPruneEps) return bound;
    const std::size_t pool = p_ - t;
    if (P_.size() + pool <= kPoolEigCap) {
      idxbuf_.assign(P_.begin(), P_.end());
      std::sort(idxbuf_.begin(), idxbuf_.end());
      for (std::size_t j = t; j < p_; ++j) idxbuf_.push_back(j);
      const double interlace = lambda1_minor(B_.data(), p_, idxbuf_.data(),
                                             idxbuf_.size(), scratch_);
      bound = std::min(bound, interlace);
    }
    return bound;
  }

  std::size_t p_, m_;
  std::vector<std::size_t> order_;
  std::vector<double> B_;
  std::vector<std::size_t> P_;
  double best_ = -kInfBound;
  std::vector<std::size_t> best_subset_;
  std::uint64_t nodes_ = 0;
  std::vector<double> scratch_, topbuf_;
  std::vector<std::size_t> idxbuf_;
};

inline void check_m(const SymMatrix& A, std::size_t m) {
  if (m < 1 || m > A.dim())
    fail_input("minor search: m must satisfy 1 <= m <= dim");
}

}  // namespace detail

// Greedy heuristic: start from the largest diagonal entry, then repeatedly
// add the index that maximizes lambda_1 of the grown minor. Lower bound on
// the exact maximum; ties go to the smallest index.
inline SubsetExtremeResult greedy_max(const SymMatrix& A, std::size_t m) {
  detail::check_m(A, m);
  const std::size_t p = A.dim();
  std::uint64_t nodes = 0;
  std::vector<std::size_t> chosen;
  std::size_t arg = 0;
  for (std::size_t i = 1; i < p; ++i)
    if (A(i, i) > A(arg, arg)) arg = i;
  chosen.push_back(arg);
  double value = A(arg, arg);
  ++nodes;

  std::vector<double> scratch;
  std::vector<std::size_t> trial;
  const std::vector<double>& flat = A.flat();
  while (chosen.size() < m) {
    double best_v = -detail::kInfBound;
    std::size_t best_c = p;
    for (std::size_t c = 0; c < p; ++c) {
      if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
      trial = chosen;
      trial.push_back(c);
      std::sort(trial.begin(), trial.end());
      const double v =
          detail::lambda1_minor(flat.data(), p, trial.data(), trial.size(), scratch);
      ++nodes;
      if (v > best_v) {
        best_v = v;
        best_c = c;
      }
    }
    chosen.push_back(best_c);
    value = best_v;
  }
  std::sort(chosen.begin(), chosen.end());
  return {value, chosen, nodes, Strategy::greedy};
}

// Maximum of lambda_1(A_S) over all index sets |S| = m.
inline SubsetExtremeResult max_minor_lambda1(const SymMatrix& A, std::size_t m,
                                             Strategy strategy) {
  detail::check_m(A, m);
  const std::size_t p = A.dim();

  if (strategy == Strategy::greedy) return greedy_max(A, m);

  if (strategy == Strategy::enumerate) {
    const double count = std::exp(detail::log_binom(double(p), double(m)));
    if (count > 1e7)
      fail_capacity("enumerate: C(dim,m) exceeds 1e7 subsets; use branch_and_bound");
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<double> scratch;
    const std::vector<double>& flat = A.flat();
    double best = -detail::kInfBound;
    std::vector<std::size_t> best_subset;
    std::uint64_t nodes = 0;
    for (;;) {
      const double v = detail::lambda1_minor(flat.data(), p, idx.data(), m, scratch);
      ++nodes;
      if (v > best) {  // lexicographic order of visit => first hit wins ties
        best = v;
        best_subset = idx;
      }
      // advance the combination odometer
      std::size_t i = m;
      while (i > 0 && idx[i - 1] == p - m + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
    return {best, best_subset, nodes, Strategy::enumerate};
  }

  // branch and bound, warm-started from the greedy incumbent
  SubsetExtremeResult seed = greedy_max(A, m);
  detail::BranchAndBound bb(A, m);
  bb.run(seed.value, seed.subset);
  return {bb.best(), bb.best_subset(), seed.nodes_explored + bb.nodes(),
          Strategy::branch_and_bound};
}

// Minimum of lambda_min(A_S) over all |S| = m, via lambda_min(B) = -lambda_1(-B).
inline SubsetExtremeResult min_minor_lambdam(const SymMatrix& A, std::size_t m,
                                             Strategy strategy) {
  SubsetExtremeResult r = max_minor_lambda1(A.negated(), m, strategy);
  r.value = -r.value;
  return r;
}

// Exhaustive maximum over all subset sizes 1..m (test oracle; small dims).
inline double max_minor_lambda1_all_sizes(const SymMatrix& A, std::size_t m) {
  detail::check_m(A, m);
  double total = 0.0;
  for (std::size_t s = 1; s <= m; ++s)
    total += std::exp(detail::log_binom(double(A.dim()), double(s)));
  if (total > 1e7) fail_capacity("max_minor_lambda1_all_sizes: too many subsets");
  double best = -detail::kInfBound;
  for (std::size_t s = 1; s <= m; ++s)
    best = std::max(best, max_minor_lambda1(A, s, Strategy::enumerate).value);
  return best;
}

// Maximum of lambda_1(A_S) over all |S| <= m. Equal to the |S| = m maximum by
// Cauchy interlacing, so this delegates; debug builds cross-check small dims.
inline SubsetExtremeResult max_minor_lambda1_upto(const SymMatrix& A, std::size_t m,
                                                  Strategy strategy) {
  SubsetExtremeResult r = max_minor_lambda1(A, m, strategy);
#ifndef NDEBUG
  if (A.dim() <= 12 && strategy != Strategy::greedy) {
    const double all = max_minor_lambda1_all_sizes(A, m);
    if (std::abs(all - r.value) > 1e-9)
      fail_domain("max_minor_lambda1_upto: interlacing cross-check failed");
  }
#endif
  return r;
}

}  // namespace minorext
