#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include <minorext/montecarlo.hpp>
#include <minorext/report_io.hpp>

using Catch::Approx;
using namespace minorext;

TEST_CASE("pairwise summation and summary statistics") {
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[i] = double(i + 1);
  REQUIRE(pairwise_sum(v.data(), v.size()) == 5050.0);

  const SummaryStats s = summarize({4.0, 1.0, 3.0, 2.0});
  REQUIRE(s.mean == Approx(2.5).margin(1e-15));
  REQUIRE(s.median == Approx(2.5).margin(1e-15));
  REQUIRE(s.variance == Approx(1.25).margin(1e-15));
  REQUIRE(s.min == 1.0);
  REQUIRE(s.max == 4.0);
}

TEST_CASE("truncated exponential moment") {
  REQUIRE(truncated_exp_moment({0.0, 0.0, 0.1}, 1.0, 0.5) == 0.0);
  REQUIRE(truncated_exp_moment({2.0}, 1.5, 1.0) ==
          Approx(std::exp(3.0)).margin(1e-12));
  REQUIRE(truncated_exp_moment({0.0, 1.0, 2.0}, 1.0, 0.5) ==
          Approx(3.369112642463232).margin(1e-12));
  // sign is ignored: the moment is a function of |z|
  REQUIRE(truncated_exp_moment({0.0, -1.0, -2.0}, 1.0, 0.5) ==
          Approx(3.369112642463232).margin(1e-12));
  REQUIRE_THROWS_AS(truncated_exp_moment({}, 1.0, 0.5), Error);
  REQUIRE_THROWS_AS(truncated_exp_moment({1.0}, 0.0, 0.5), Error);
  REQUIRE_THROWS_AS(truncated_exp_moment({1.0}, 1.0, -0.5), Error);
}

TEST_CASE("tail-integral identity on empirical laws") {
  REQUIRE(integral_identity_check({0.2, 0.7, 1.3}, 1.1, 0.5) < 1e-14);
  REQUIRE(integral_identity_check({0.5, 0.5, 2.0, 3.5}, 0.7, 0.5) < 1e-14);
  // everything below the cut: both sides vanish
  REQUIRE(integral_identity_check({0.1, 0.2}, 1.0, 0.5) == 0.0);
  REQUIRE_THROWS_AS(integral_identity_check({-0.1}, 1.0, 0.5), Error);
  REQUIRE_THROWS_AS(integral_identity_check({}, 1.0, 0.5), Error);
}

TEST_CASE("closed-form distribution of the size-1 statistic") {
  REQUIRE(closed_form_cdf_m1(EnsembleSpec::Kind::wigner, 0, 10, 2.0, 0.0) ==
          0.0009765625);
  REQUIRE(closed_form_cdf_m1(EnsembleSpec::Kind::wishart, 2, 3, 0.0,
                             2.0 * std::log(2.0)) == Approx(0.125).margin(1e-12));
  REQUIRE(closed_form_cdf_m1(EnsembleSpec::Kind::wigner, 0, 10, 2.0, 1e6) ==
          Approx(1.0).margin(1e-12));
  REQUIRE(closed_form_cdf_m1(EnsembleSpec::Kind::wishart, 5, 4, 0.0, -1.0) == 0.0);
  // eta = 0 degenerates to a point mass at zero
  REQUIRE(closed_form_cdf_m1(EnsembleSpec::Kind::wigner, 0, 7, 0.0, -0.1) == 0.0);
  REQUIRE(closed_form_cdf_m1(EnsembleSpec::Kind::wigner, 0, 7, 0.0, 0.0) == 1.0);
}

TEST_CASE("kolmogorov-smirnov distance") {
  auto ident = [](double x) { return x; };
  REQUIRE(ks_statistic({0.5}, ident) == Approx(0.5).margin(1e-15));
  REQUIRE(ks_statistic({0.25, 0.75}, ident) == Approx(0.25).margin(1e-15));
  REQUIRE_THROWS_AS(ks_statistic({}, ident), Error);
}

TEST_CASE("experiment configuration validation") {
  ExperimentConfig cfg;
  cfg.cells = {{0, 10}};
  cfg.reps = 5;
  REQUIRE_NOTHROW(cfg.validate());

  ExperimentConfig bad = cfg;
  bad.reps = 0;
  REQUIRE_THROWS_AS(bad.validate(), Error);
  bad = cfg;
  bad.m = 11;
  REQUIRE_THROWS_AS(bad.validate(), Error);
  bad = cfg;
  bad.cells = {{0, 1}};
  REQUIRE_THROWS_AS(bad.validate(), Error);
  bad = cfg;
  bad.kind = EnsembleSpec::Kind::wishart;
  bad.cells = {{0, 10}};
  REQUIRE_THROWS_AS(bad.validate(), Error);
  bad = cfg;
  bad.eta = 2.5;
  REQUIRE_THROWS_AS(bad.validate(), Error);
  bad = cfg;
  bad.alphas = {1.0, -1.0};
  REQUIRE_THROWS_AS(bad.validate(), Error);
  bad = cfg;
  bad.kappa = 0.0;
  REQUIRE_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("enumeration capacity is checked before sampling") {
  ExperimentConfig cfg;
  cfg.kind = EnsembleSpec::Kind::wigner;
  cfg.m = 5;
  cfg.cells = {{0, 200}};
  cfg.reps = 1;
  cfg.strategy = Strategy::enumerate;
  try {
    run_extreme_experiment(cfg);
    FAIL("expected a capacity error");
  } catch (const Error& e) {
    REQUIRE(e.kind() == ErrKind::capacity);
    REQUIRE(std::string(e.what()).find("p=200") != std::string::npos);
  }
}

TEST_CASE("single-repetition cells have degenerate summaries") {
  ExperimentConfig cfg;
  cfg.kind = EnsembleSpec::Kind::wigner;
  cfg.m = 2;
  cfg.cells = {{0, 6}};
  cfg.reps = 1;
  cfg.seed = 99;
  const ExperimentReport rep = run_extreme_experiment(cfg);
  REQUIRE(rep.cells.size() == 1);
  const SummaryStats& t = rep.cells[0].t_stat;
  REQUIRE(t.variance == 0.0);
  REQUIRE(t.min == t.max);
  REQUIRE(t.mean == t.min);
  REQUIRE(t.median == t.min);
}

TEST_CASE("size-1 statistics match their closed-form laws") {
  const double ks_cut = 0.05;
  {
    ExperimentConfig cfg;
    cfg.kind = EnsembleSpec::Kind::wigner;
    cfg.m = 1;
    cfg.cells = {{0, 10}};
    cfg.reps = 2000;
    cfg.seed = 12345;
    cfg.keep_samples = true;
    const ExperimentReport rep = run_extreme_experiment(cfg);
    const double ks = ks_statistic(rep.cells[0].samples_T, [&](double x) {
      return closed_form_cdf_m1(EnsembleSpec::Kind::wigner, 0, 10, 2.0, x);
    });
    REQUIRE(ks < ks_cut);
    // min statistic: by symmetry -V is distributed like T
    std::vector<double> neg;
    for (double v : rep.cells[0].samples_V) neg.push_back(-v);
    const double ks_min = ks_statistic(neg, [&](double x) {
      return closed_form_cdf_m1(EnsembleSpec::Kind::wigner, 0, 10, 2.0, x);
    });
    REQUIRE(ks_min < ks_cut);
  }
  {
    ExperimentConfig cfg;
    cfg.kind = EnsembleSpec::Kind::wishart;
    cfg.m = 1;
    cfg.cells = {{20, 10}};
    cfg.reps = 2000;
    cfg.seed = 777;
    cfg.keep_samples = true;
    const ExperimentReport rep = run_extreme_experiment(cfg);
    const double ks = ks_statistic(rep.cells[0].samples_T, [&](double x) {
      return closed_form_cdf_m1(EnsembleSpec::Kind::wishart, 20, 10, 0.0, x);
    });
    REQUIRE(ks < ks_cut);
  }
}

TEST_CASE("experiment reports are reproducible and internally consistent") {
  ExperimentConfig cfg;
  cfg.kind = EnsembleSpec::Kind::wigner;
  cfg.m = 2;
  cfg.cells = {{0, 8}, {0, 12}};
  cfg.reps = 50;
  cfg.seed = 2024;
  cfg.alphas = {1.0, 0.5};
  cfg.deltas = {0.5, 1.5};
  cfg.keep_samples = true;

  const ExperimentReport r1 = run_extreme_experiment(cfg, 1);
  const ExperimentReport r3 = run_extreme_experiment(cfg, 3);
  REQUIRE(report_to_json_string(r1) == report_to_json_string(r3));
  REQUIRE(report_to_csv(r1) == report_to_csv(r3));

  for (const CellReport& c : r1.cells) {
    REQUIRE(c.integral_identity_residual < 1e-10);
    REQUIRE(c.z_max.variance >= 0.0);
    REQUIRE(c.v_stat.min <= c.v_stat.max);
    REQUIRE(c.t_stat.min <= c.t_stat.median);
    REQUIRE(c.t_stat.median <= c.t_stat.max);
    // truncation can only lose mass against the plain moment
    for (const MomentRow& mr : c.moments) {
      for (const ExpMomentRow& er : c.exp_moments) {
        if (er.alpha == mr.alpha) {
          REQUIRE(mr.trunc_zmax <= er.plain_zmax + 1e-12);
          REQUIRE(mr.trunc_zmin <= er.plain_zmin + 1e-12);
        }
      }
    }
    for (const ExceedRow& ex : c.exceed) {
      REQUIRE(ex.p_zmax >= 0.0);
      REQUIRE(ex.p_zmax <= 1.0);
      REQUIRE(ex.p_zmin >= 0.0);
      REQUIRE(ex.p_zmin <= 1.0);
    }
    REQUIRE(c.moments.size() == cfg.alphas.size() * cfg.deltas.size());
    REQUIRE(c.exp_moments.size() == cfg.alphas.size());
    REQUIRE(c.exceed.size() == cfg.deltas.size());
    REQUIRE(c.tails.size() == 3);
  }
}

TEST_CASE("tail rows carry the union bound only where it applies") {
  {
    // m = 1 blocks: the per-block bound needs m >= 2
    ExperimentConfig cfg;
    cfg.kind = EnsembleSpec::Kind::wigner;
    cfg.m = 1;
    cfg.cells = {{0, 16}};
    cfg.reps = 20;
    const ExperimentReport rep = run_extreme_experiment(cfg);
    for (const TailRow& tr : rep.cells[0].tails) REQUIRE_FALSE(tr.bound_valid);
  }
  {
    ExperimentConfig cfg;
    cfg.kind = EnsembleSpec::Kind::wigner;
    cfg.m = 2;
    cfg.cells = {{0, 16}};
    cfg.reps = 20;
    const ExperimentReport rep = run_extreme_experiment(cfg);
    const double dev = 2.0 * std::sqrt(2.0 * std::log(16.0));
    for (const TailRow& tr : rep.cells[0].tails) {
      REQUIRE(tr.bound_valid);
      REQUIRE(tr.x == Approx(dev + tr.t).margin(1e-12));
      REQUIRE(tr.log_union_bound ==
              Approx(2.0 * std::log(16.0) +
                     wigner_lambda1_tail_log_bound(tr.x, 2, cfg.kappa))
                  .margin(1e-12));
    }
  }
  {
    ExperimentConfig cfg;
    cfg.kind = EnsembleSpec::Kind::wishart;
    cfg.m = 1;
    cfg.cells = {{20, 10}};
    cfg.reps = 20;
    const ExperimentReport rep = run_extreme_experiment(cfg);
    for (const TailRow& tr : rep.cells[0].tails) {
      REQUIRE(tr.bound_valid);
      REQUIRE(std::isfinite(tr.log_union_bound));
      REQUIRE(tr.freq >= 0.0);
      REQUIRE(tr.freq <= 1.0);
    }
  }
}

TEST_CASE("convergence diagnostics across a p-grid") {
  ExperimentReport rep;
  rep.config.m = 1;
  rep.config.deltas = {0.5};
  rep.config.alphas = {1.0};
  for (long p : {16L, 64L, 256L}) {
    CellReport c;
    c.n = 0;
    c.p = p;
    c.m = 1;
    c.z_max.variance = 1.0 / double(p);
    ExpMomentRow er;
    er.alpha = 1.0;
    er.plain_zmax = 1.0 + 1.0 / double(p);
    er.power_zmax = 0.5 / double(p);
    c.exp_moments = {er};
    ExceedRow ex;
    ex.delta = 0.5;
    ex.p_zmax = 0.1 / double(p);
    c.exceed = {ex};
    rep.cells.push_back(c);
  }
  const TrendTable t = convergence_diagnostics(rep, 1.0);
  REQUIRE(t.p == std::vector<long>{16, 64, 256});
  REQUIRE(t.exp_nonincreasing);
  REQUIRE(t.power_nonincreasing);
  REQUIRE(t.var_nonincreasing);
  REQUIRE(t.exceed_nonincreasing);
  REQUIRE(t.exp_endpoint_decrease);
  REQUIRE(t.power_endpoint_decrease);
  REQUIRE(t.var_endpoint_decrease);
  REQUIRE(t.exceed_endpoint_decrease);

  REQUIRE_THROWS_AS(convergence_diagnostics(rep, 2.0), Error);  // unknown alpha
  ExperimentReport single = rep;
  single.cells.resize(1);
  REQUIRE_THROWS_AS(convergence_diagnostics(single, 1.0), Error);
  ExperimentReport mixed = rep;
  mixed.cells[1].n = 5;
  REQUIRE_THROWS_AS(convergence_diagnostics(mixed, 1.0), Error);
}
