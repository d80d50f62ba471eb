#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <minorext/asymptotics.hpp>

using Catch::Approx;
using namespace minorext;

TEST_CASE("rate function I") {
  REQUIRE(rate_I(1.0) == 0.0);
  REQUIRE(rate_I(2.0) == Approx(0.5 - 0.5 * std::log(2.0)).margin(1e-15));
  REQUIRE(rate_I(2.0) == Approx(0.15342640972002733).margin(1e-14));
  REQUIRE(rate_I(1.42) == Approx(0.03467155).margin(1e-7));
  REQUIRE(rate_I(0.0) == kInf);
  REQUIRE(rate_I(-3.0) == kInf);
  for (double s : {0.2, 0.7, 1.3, 4.0}) REQUIRE(rate_I(s) > 0.0);
}

TEST_CASE("recovery threshold b*") {
  REQUIRE(b_star(1.0) == Approx(1.0 / 3.0).margin(1e-15));
  REQUIRE(b_star(2.0) == Approx(0.7071067811865476).margin(1e-16));
  // the two branches agree at t = 4/3
  REQUIRE(b_star(4.0 / 3.0) == Approx(0.5).margin(1e-12));
  REQUIRE(b_star(4.0 / 3.0 - 1e-9) == Approx(0.5).margin(1e-8));
  REQUIRE(b_star(100.0) == Approx(std::sqrt(0.99)).margin(1e-12));
  REQUIRE_THROWS_AS(b_star(0.0), Error);
  REQUIRE_THROWS_AS(b_star(-1.0), Error);
}

TEST_CASE("wishart extreme eigenvalue predictor") {
  const double v = predict_extreme_wishart(5000.0, 2, 200.0, Side::max);
  REQUIRE(v == Approx(5460.36148).margin(1e-4));
  const double lo = predict_extreme_wishart(5000.0, 2, 200.0, Side::min);
  REQUIRE(lo == Approx(5000.0 - 460.36148).margin(1e-4));
  REQUIRE(v - 5000.0 == Approx(5000.0 - lo).margin(1e-9));
}

TEST_CASE("wigner extreme eigenvalue predictor") {
  REQUIRE(predict_extreme_wigner(2, 100.0, 2.0, Side::max) ==
          Approx(6.0697).margin(1e-4));
  REQUIRE(predict_extreme_wigner(2, 100.0, 2.0, Side::min) ==
          Approx(-6.0697).margin(1e-4));
  // eta=2 collapses to 2 sqrt(m log p)
  REQUIRE(predict_extreme_wigner(3, 50.0, 2.0, Side::max) ==
          Approx(2.0 * std::sqrt(3.0 * std::log(50.0))).margin(1e-12));
  // eta=0 drops the diagonal contribution
  REQUIRE(predict_extreme_wigner(2, 1024.0, 0.0, Side::max) ==
          Approx(std::sqrt(4.0 * std::log(1024.0))).margin(1e-12));
}

TEST_CASE("epsilon and tau at m=2, p=100, t=1") {
  const EpsTau et = epsilon_tau(2, 100.0, 1.0);
  REQUIRE(et.epsilon == Approx(0.1647524).margin(1e-6));
  REQUIRE(et.tau == Approx(2.5348539).margin(1e-6));
  // algebraic identity: tau = sqrt(4 log p / m) - t/m
  REQUIRE(et.tau ==
          Approx(std::sqrt(4.0 * std::log(100.0) / 2.0) - 0.5).margin(1e-12));
}

TEST_CASE("wigner single-minor tail bound") {
  const double lb = wigner_lambda1_tail_log_bound(10.0, 2, 3.0);
  REQUIRE(lb == Approx(-25.0 + 6.0 * std::log(10.0)).margin(1e-12));
  REQUIRE(lb == Approx(-11.18449).margin(1e-4));
  REQUIRE(std::exp(lb) == Approx(1.3888e-5).epsilon(1e-3));
  // domain: x must exceed 4 sqrt(m) and m >= 2
  REQUIRE_THROWS_AS(wigner_lambda1_tail_log_bound(5.65, 2, 3.0), Error);
  REQUIRE_THROWS_AS(wigner_lambda1_tail_log_bound(10.0, 1, 3.0), Error);
  REQUIRE_NOTHROW(wigner_lambda1_tail_log_bound(5.66, 2, 3.0));
  // monotone decreasing in x over the domain
  REQUIRE(wigner_lambda1_tail_log_bound(12.0, 2, 3.0) < lb);
}

TEST_CASE("eta-dependent deviation bound at a hand-checked point") {
  const double b = mdp_eta_tail_bound(5.0, 2, 0.0, 8.0, 0.1);
  REQUIRE(b == Approx(0.6062).margin(2e-3));
  REQUIRE_THROWS_AS(mdp_eta_tail_bound(5.0, 2, 0.0, 7.0, 0.1), Error);   // r < 4m
  REQUIRE_THROWS_AS(mdp_eta_tail_bound(5.0, 2, 0.0, 8.0, 1.0), Error);   // delta
  REQUIRE_THROWS_AS(mdp_eta_tail_bound(2.5, 2, 0.0, 8.0, 0.1), Error);   // x small
}

TEST_CASE("optimized eta bound matches its own grid evaluation") {
  const MdpOptimum o = mdp_eta_tail_bound_opt(20.0, 2, 2.0);
  REQUIRE(o.bound > 0.0);
  REQUIRE(o.bound <=
          mdp_eta_tail_bound(20.0, 2, 2.0, o.r, o.delta) + 1e-15);
  // a larger threshold gives a smaller optimized bound
  const MdpOptimum o2 = mdp_eta_tail_bound_opt(30.0, 2, 2.0);
  REQUIRE(o2.bound <= o.bound + 1e-15);
  // no feasible grid point when the threshold is tiny
  REQUIRE_THROWS_AS(mdp_eta_tail_bound_opt(1.0, 2, 2.0), Error);
}

TEST_CASE("wishart moderate deviation bound at a hand-checked point") {
  const double lb =
      wishart_moderate_log_bound(0.5, 1e4, 2, 2.0, 0.01, 3.0, Side::max);
  REQUIRE(lb == Approx(-318.391).margin(2e-2));
  // lower side at the same parameters: s = 1 - y + 2dmr = 0.58
  const double lo =
      wishart_moderate_log_bound(0.5, 1e4, 2, 2.0, 0.01, 3.0, Side::min);
  const double s_lo = 1.0 - 0.5 + 2.0 * 0.01 * 2.0 * 2.0;
  REQUIRE(lo == Approx(std::log(2.0) - 1e4 * rate_I(s_lo) +
                       6.0 * std::log(100.0))
                    .margin(1e-6));
  REQUIRE_THROWS_AS(
      wishart_moderate_log_bound(0.05, 1e4, 2, 2.0, 0.01, 3.0, Side::max),
      Error);  // y <= 2dmr
  REQUIRE_THROWS_AS(
      wishart_moderate_log_bound(0.5, 1e4, 2, 0.5, 0.01, 3.0, Side::max),
      Error);  // r < 1
  REQUIRE_THROWS_AS(
      wishart_moderate_log_bound(0.5, 1e4, 2, 2.0, 0.6, 3.0, Side::max),
      Error);  // d >= 1/2
}

TEST_CASE("normal tail log-probabilities") {
  const LogPhiBar r0 = log_phi_bar(0.0);
  REQUIRE(r0.exact == Approx(std::log(0.5)).margin(1e-14));
  const LogPhiBar r_196 = log_phi_bar(1.96);
  REQUIRE(r_196.exact == Approx(-3.68896).margin(1e-4));
  const LogPhiBar r10 = log_phi_bar(10.0);
  REQUIRE(r10.exact == Approx(-53.23128).margin(1e-3));
  REQUIRE(r10.asymptotic == Approx(-53.221524).margin(1e-5));
  REQUIRE(r10.exact < r10.asymptotic);
}

TEST_CASE("chi-square lower tail bound") {
  REQUIRE(chi2_lower_tail_bound(16.0) == Approx(1.1254e-7).epsilon(1e-3));
  REQUIRE(chi2_lower_tail_bound(1.0) == Approx(std::exp(-1.0)).margin(1e-15));
  REQUIRE_THROWS_AS(chi2_lower_tail_bound(0.0), Error);
  REQUIRE_THROWS_AS(chi2_lower_tail_bound(-1.0), Error);
}

TEST_CASE("binomial coefficient log bracket") {
  const LogBinomBracket b = log_binomial_with_bounds(5, 2);
  REQUIRE(b.exact == Approx(std::log(10.0)).margin(1e-12));
  REQUIRE(b.lower == Approx(2.0 * std::log(2.5)).margin(1e-12));
  REQUIRE(b.upper == Approx(b.lower + 2.0).margin(1e-12));
  for (long p = 1; p <= 200; ++p) {
    for (long m = 1; m <= p; m += (p > 40 ? 7 : 1)) {
      const LogBinomBracket br = log_binomial_with_bounds(p, m);
      REQUIRE(br.lower <= br.exact + 1e-9);
      REQUIRE(br.exact <= br.upper + 1e-9);
    }
  }
}

TEST_CASE("subset overlap ratio is negative in log space") {
  REQUIRE(overlap_ratio_log(3, 1) == Approx(std::log(2.0 / 3.0)).margin(1e-12));
  REQUIRE(overlap_ratio_log(5, 2) == Approx(std::log(0.3)).margin(1e-12));
  for (long p = 3; p <= 200; p += 3) {
    for (long m = 1; 2 * m < p; m += (p > 40 ? 5 : 1)) {
      REQUIRE(overlap_ratio_log(p, m) < 0.0);
    }
  }
  REQUIRE_THROWS_AS(overlap_ratio_log(4, 2), Error);
}

TEST_CASE("overlap exponent maximizer closed form") {
  const MaxLValue r = max_l_value(3, 0.5);
  REQUIRE(r.argmax_l == 1);
  REQUIRE(r.value == Approx(3.5833333333333333).margin(1e-12));
  for (long m = 2; m <= 50; ++m) {
    for (int i = 1; i <= 19; ++i) {
      const double eps = 0.05 * i;
      const MaxLValue c = max_l_value(m, eps);
      REQUIRE(c.value ==
              Approx(max_l_value_bruteforce(m, eps)).margin(1e-10));
    }
  }
}

TEST_CASE("asymptotic regime diagnostics") {
  const AssumptionDiagnostics d = assumption_diagnostics(1e6, 1e4, 2);
  REQUIRE(d.rho1 == Approx(2.11847).margin(2e-3));
  REQUIRE(d.rho2 == Approx(9.856).margin(5e-3));
  REQUIRE(d.xi_p == Approx(0.797655).margin(1e-5));
  REQUIRE(d.omega_n == Approx(5.13513).margin(1e-3));
  REQUIRE_THROWS_AS(assumption_diagnostics(1e6, 15.0, 2), Error);
  REQUIRE_NOTHROW(assumption_diagnostics(1e6, 16.0, 2));
}
