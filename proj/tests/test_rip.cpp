#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <minorext/rip.hpp>

using Catch::Approx;
using namespace minorext;

namespace {

// Exhaustive restricted-isometry constant: scan every size-k column subset.
double brute_force_delta(const Matrix& X, long k) {
  const SymMatrix W = gram_matrix(X);
  const std::size_t p = W.dim();
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  double worst = 0.0;
  for (;;) {
    const Spectrum s = eigh(principal_minor(W, idx), false);
    worst = std::max(worst, s.values.front() - 1.0);
    worst = std::max(worst, 1.0 - s.values.back());
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == p - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < std::size_t(k); ++j) idx[j] = idx[j - 1] + 1;
  }
  return worst;
}

}  // namespace

TEST_CASE("restricted isometry constant of a hand-checked 2 x 2 frame") {
  Matrix X(2, 2);
  X(0, 0) = 1.0;
  X(0, 1) = 0.5;
  X(1, 0) = 0.0;
  X(1, 1) = std::sqrt(0.75);
  const SymMatrix W = gram_matrix(X);
  REQUIRE(W(0, 0) == Approx(1.0).margin(1e-15));
  REQUIRE(W(1, 1) == Approx(1.0).margin(1e-15));
  REQUIRE(W(0, 1) == Approx(0.5).margin(1e-15));
  REQUIRE(exact_rip_constant(X, 2, Strategy::enumerate) ==
          Approx(0.5).margin(1e-12));
  REQUIRE(exact_rip_constant(X, 1, Strategy::enumerate) ==
          Approx(0.0).margin(1e-12));
}

TEST_CASE("orthonormal columns have zero isometry defect") {
  Matrix X(3, 3);
  for (int i = 0; i < 3; ++i) X(i, i) = 1.0;
  for (long k = 1; k <= 3; ++k)
    REQUIRE(exact_rip_constant(X, k, Strategy::branch_and_bound) ==
            Approx(0.0).margin(1e-12));
}

TEST_CASE("subset search agrees with exhaustive scan on random designs") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RngStream rng = RngStream::root(seed);
    const Matrix X = sample_sensing_matrix(15, 8, rng);
    for (long k = 1; k <= 4; ++k) {
      const double direct = brute_force_delta(X, k);
      REQUIRE(exact_rip_constant(X, k, Strategy::branch_and_bound) ==
              Approx(direct).margin(1e-10));
      REQUIRE(exact_rip_constant(X, k, Strategy::enumerate) ==
              Approx(direct).margin(1e-10));
    }
  }
}

TEST_CASE("isometry constants grow with the sparsity level") {
  RngStream rng = RngStream::root(44);
  const Matrix X = sample_sensing_matrix(30, 10, rng);
  double prev = 0.0;
  for (long k = 1; k <= 5; ++k) {
    const double d = exact_rip_constant(X, k, Strategy::branch_and_bound);
    REQUIRE(d >= prev - 1e-12);
    prev = d;
  }
}

TEST_CASE("quadratic form on sparse unit vectors stays within the constant") {
  RngStream rng = RngStream::root(7);
  const long n = 40, p = 12;
  constexpr int k = 3;
  const Matrix X = sample_sensing_matrix(n, p, rng);
  const SymMatrix W = gram_matrix(X);
  const double delta = exact_rip_constant(X, k, Strategy::branch_and_bound);

  RngStream beta_rng = RngStream::root(8);
  for (int trial = 0; trial < 10000; ++trial) {
    // uniform size-k support
    std::size_t s[k];
    std::size_t chosen = 0;
    for (std::size_t j = 0; j < std::size_t(p) && chosen < std::size_t(k); ++j) {
      const double need = double(std::size_t(k) - chosen), left = double(p - long(j));
      if (beta_rng.next_unit() < need / left) s[chosen++] = j;
    }
    double b[k];
    double norm2 = 0.0;
    for (int i = 0; i < k; ++i) {
      b[i] = beta_rng.next_normal();
      norm2 += b[i] * b[i];
    }
    double quad = 0.0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) quad += b[i] * W(s[i], s[j]) * b[j];
    REQUIRE(std::abs(quad / norm2 - 1.0) <= delta + 1e-9);
  }
}

TEST_CASE("predicted isometry constant") {
  REQUIRE(predicted_delta(400, 100, 8) == Approx(0.6069708624).margin(1e-8));
  REQUIRE(predicted_delta(60, 20, 4) == Approx(0.8937879842).margin(1e-8));
  REQUIRE_THROWS_AS(predicted_delta(1, 100, 2), Error);
  REQUIRE_THROWS_AS(predicted_delta(400, 1, 1), Error);
  REQUIRE_THROWS_AS(predicted_delta(400, 100, 0), Error);
  REQUIRE_THROWS_AS(predicted_delta(400, 100, 101), Error);
}

TEST_CASE("recovery condition is a strict threshold") {
  REQUIRE(check_recovery_condition(0.5, 2.0));
  REQUIRE_FALSE(check_recovery_condition(0.71, 2.0));
  REQUIRE(check_recovery_condition(0.0, 5.0));
  REQUIRE_FALSE(check_recovery_condition(b_star(2.0), 2.0));
}

TEST_CASE("design size for a target recovery guarantee") {
  REQUIRE(design_min_n(1000.0, 5, 2.0, 0.0) == 553);
  REQUIRE(design_min_n(M_E, 1, 1.0, 0.0) == 36);
  // halving the usable threshold quadruples the required sample size
  const long n0 = design_min_n(1000.0, 5, 2.0, 0.0);
  const long n5 = design_min_n(1000.0, 5, 2.0, 0.5);
  REQUIRE(n5 <= 4 * n0);
  REQUIRE(n5 >= 4 * n0 - 3);
  REQUIRE_THROWS_AS(design_min_n(1000.0, 3, 1.5, 0.0), Error);  // t*k = 4.5
  REQUIRE(design_min_n(1000.0, 2, 1.5, 0.0) > 0);               // t*k = 3
  REQUIRE_THROWS_AS(design_min_n(1.5, 2, 2.0, 0.0), Error);
  REQUIRE_THROWS_AS(design_min_n(1000.0, 2, 2.0, 1.0), Error);
}

TEST_CASE("isometry reports are internally consistent") {
  const RipReport r = build_rip_report(30, 10, 2, 2.0, 5);
  REQUIRE(r.m == 4);
  REQUIRE(r.has_exact);
  REQUIRE(r.delta_exact ==
          std::max(r.lambda_max_k - 1.0, 1.0 - r.lambda_min_k));
  REQUIRE(r.recovery_pass == (r.delta_exact < b_star(2.0)));
  REQUIRE(r.delta_predicted == predicted_delta(30, 10, 4));
  REQUIRE(r.b_star_t == b_star(2.0));

  const RipReport q = build_rip_report(30, 10, 2, 2.0, 5, false);
  REQUIRE_FALSE(q.has_exact);
  REQUIRE(q.recovery_pass == (q.delta_predicted < b_star(2.0)));

  REQUIRE_THROWS_AS(build_rip_report(30, 10, 3, 1.5, 5), Error);  // t*k = 4.5
  REQUIRE_THROWS_AS(build_rip_report(30, 10, 6, 2.0, 5), Error);  // t*k > p
}

TEST_CASE("sensing matrices are scaled standard normal draws") {
  RngStream r1 = RngStream::root(42);
  RngStream r2 = RngStream::root(42);
  const Matrix S = sample_sensing_matrix(5, 4, r1);
  const Matrix G = sample_gaussian_matrix(5, 4, r2);
  const double inv = 1.0 / std::sqrt(5.0);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 4; ++j) REQUIRE(S(i, j) == G(i, j) * inv);
}

TEST_CASE("sensing matrix columns have unit norm on average") {
  const long n = 100, p = 5;
  double acc = 0.0;
  long cnt = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    RngStream rng = RngStream::root(1000 + seed);
    const Matrix X = sample_sensing_matrix(n, p, rng);
    for (long j = 0; j < p; ++j) {
      double s = 0.0;
      for (long i = 0; i < n; ++i) s += X(i, j) * X(i, j);
      acc += s;
      ++cnt;
    }
  }
  REQUIRE(acc / double(cnt) == Approx(1.0).margin(0.02));
}

TEST_CASE("oversized exhaustive searches suggest the sampled fallback") {
  RngStream rng = RngStream::root(3);
  const Matrix X = sample_sensing_matrix(10, 60, rng);
  try {
    rip_extremes(X, 8, Strategy::enumerate);
    FAIL("expected a capacity error");
  } catch (const Error& e) {
    REQUIRE(e.kind() == ErrKind::capacity);
    REQUIRE(std::string(e.what()).find("sampled lower bound") != std::string::npos);
  }
}
