#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "asymptotics.hpp"
#include "ensembles.hpp"
#include "errors.hpp"
#include "minors.hpp"
#include "rng.hpp"
#include "special.hpp"

namespace minorext {

struct GridCell {
  long n = 0;  // ignored for wigner cells
  long p = 0;
};

struct ExperimentConfig {
  EnsembleSpec::Kind kind = EnsembleSpec::Kind::wigner;
  double eta = 2.0;
  long m = 1;
  std::vector<GridCell> cells;
  long reps = 1;
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::branch_and_bound;
  double kappa = 3.0;
  std::vector<double> alphas{1.0};
  std::vector<double> deltas{0.5};
  bool keep_samples = false;

  void validate() const {
    if (reps < 1) fail_input("ExperimentConfig: reps >= 1 required");
    if (m < 1) fail_input("ExperimentConfig: m >= 1 required");
    if (cells.empty()) fail_input("ExperimentConfig: at least one grid cell");
    if (!(kappa > 0.0)) fail_input("ExperimentConfig: kappa > 0 required");
    for (const auto& c : cells) {
      if (c.p < 2) fail_input("ExperimentConfig: cells need p >= 2");
      if (m > c.p) fail_input("ExperimentConfig: cells need m <= p");
      if (kind == EnsembleSpec::Kind::wishart && c.n < 1)
        fail_input("ExperimentConfig: wishart cells need n >= 1");
    }
    if (kind == EnsembleSpec::Kind::wigner && !(eta >= 0.0 && eta <= 2.0))
      fail_input("ExperimentConfig: eta in [0,2] required");
    for (double a : alphas)
      if (!(a > 0.0)) fail_input("ExperimentConfig: alphas must be > 0");
    for (double d : deltas)
      if (!(d > 0.0)) fail_input("ExperimentConfig: deltas must be > 0");
  }
};

struct SummaryStats {
  double mean = 0.0;
  double median = 0.0;
  double variance = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct MomentRow {
  double alpha = 0.0;
  double delta = 0.0;
  double trunc_zmax = 0.0;  // E[e^{alpha |Z|} 1{|Z| >= delta}]
  double trunc_zmin = 0.0;
};

struct ExpMomentRow {
  double alpha = 0.0;
  double plain_zmax = 0.0;  // E e^{alpha |Z|}
  double power_zmax = 0.0;  // E |Z|^alpha
  double plain_zmin = 0.0;
  double power_zmin = 0.0;
};

struct ExceedRow {
  double delta = 0.0;
  double p_zmax = 0.0;  // P(|Z| >= delta)
  double p_zmin = 0.0;
};

struct TailRow {
  double t = 0.0;
  double x = 0.0;     // threshold on the raw statistic scale
  double freq = 0.0;  // empirical exceedance frequency
  bool bound_valid = false;
  double log_union_bound = 0.0;  // log(p^m * per-block bound)
};

struct CellReport {
  long n = 0;
  long p = 0;
  long m = 0;
  SummaryStats t_stat, v_stat, z_max, z_min, ratio_max;
  std::vector<MomentRow> moments;
  std::vector<ExpMomentRow> exp_moments;
  std::vector<ExceedRow> exceed;
  std::vector<TailRow> tails;
  double integral_identity_residual = 0.0;
  std::vector<double> samples_T, samples_V;  // populated when keep_samples
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string generator;
  double wall_time_sec = 0.0;  // never serialized; reports stay byte-stable
  std::vector<CellReport> cells;
};

// Pairwise summation in fixed order, so aggregation is deterministic and
// does not depend on worker count.
inline double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

inline SummaryStats summarize(const std::vector<double>& samples) {
  SummaryStats s;
  const std::size_t n = samples.size();
  s.mean = pairwise_sum(samples.data(), n) / double(n);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = samples[i] - s.mean;
    d[i] = c * c;
  }
  s.variance = pairwise_sum(d.data(), n) / double(n);
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = (n % 2 == 1) ? sorted[n / 2]
                          : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return s;
}

// (1/N) sum e^{alpha |z_i|} 1{|z_i| >= delta}.
inline double truncated_exp_moment(const std::vector<double>& samples, double alpha,
                                   double delta) {
  if (samples.empty()) fail_input("truncated_exp_moment: empty sample");
  if (!(alpha > 0.0 && delta > 0.0))
    fail_input("truncated_exp_moment: alpha, delta > 0 required");
  std::vector<double> terms(samples.size(), 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double a = std::abs(samples[i]);
    if (a >= delta) terms[i] = std::exp(alpha * a);
  }
  return pairwise_sum(terms.data(), terms.size()) / double(terms.size());
}

// Checks E[e^{aZ} 1{Z>=d}] = e^{ad} P(Z>=d) + a * int_d^inf e^{at} P(Z>t) dt
// on the empirical law of nonnegative samples; the integral is evaluated
// exactly piecewise between order statistics, so the residual is rounding
// error only.
inline double integral_identity_check(const std::vector<double>& samples, double alpha,
                                      double delta) {
  if (samples.empty()) fail_input("integral_identity_check: empty sample");
  if (!(alpha > 0.0 && delta > 0.0))
    fail_input("integral_identity_check: alpha, delta > 0 required");
  for (double v : samples)
    if (v < 0.0) fail_input("integral_identity_check: samples must be >= 0");

  std::vector<double> z = samples;
  std::sort(z.begin(), z.end());
  const std::size_t n = z.size();

  long double lhs = 0.0L;
  for (double v : z)
    if (v >= delta) lhs += std::exp((long double)(alpha * v));
  lhs /= (long double)n;

  // survivor counts: P(Z >= delta) uses a closed inequality
  std::size_t idx = std::lower_bound(z.begin(), z.end(), delta) - z.begin();
  long double rhs = std::exp((long double)(alpha * delta)) *
                    (long double)(n - idx) / (long double)n;

  // integral over [delta, max): P(Z > t) is constant between order stats
  long double acc = 0.0L;
  double lo = delta;
  for (std::size_t i = idx; i < n; ++i) {
    const double hi = z[i];
    if (hi > lo) {
      const long double surv = (long double)(n - i) / (long double)n;
      acc += surv * (std::exp((long double)(alpha * hi)) -
                     std::exp((long double)(alpha * lo)));
      lo = hi;
    } else if (hi > delta) {
      lo = hi;
    }
  }
  rhs += acc;  // alpha * int e^{at} P dt, with the alpha absorbed by d/dt e^{at}
  return std::abs((double)(lhs - rhs));
}

// CDF of the m=1 statistic: max over p independent scalar blocks.
inline double closed_form_cdf_m1(EnsembleSpec::Kind kind, long n, long p, double eta,
                                 double x) {
  if (p < 1) fail_input("closed_form_cdf_m1: p >= 1 required");
  if (kind == EnsembleSpec::Kind::wigner) {
    if (!(eta >= 0.0 && eta <= 2.0)) fail_input("closed_form_cdf_m1: eta in [0,2]");
    if (eta == 0.0) return x < 0.0 ? 0.0 : 1.0;
    return std::pow(norm_cdf(x / std::sqrt(eta)), double(p));
  }
  if (n < 1) fail_input("closed_form_cdf_m1: n >= 1 required");
  if (x <= 0.0) return 0.0;
  return std::pow(chi2_cdf(x, double(n)), double(p));
}

// Kolmogorov-Smirnov sup distance between an empirical sample and a CDF.
template <typename Cdf>
inline double ks_statistic(std::vector<double> samples, Cdf&& F) {
  if (samples.empty()) fail_input("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = F(samples[i]);
    d = std::max(d, std::abs(double(i + 1) / n - f));
    d = std::max(d, std::abs(double(i) / n - f));
  }
  return d;
}

namespace detail {

struct Centering {
  double pred_max = 0.0;  // predictor for the max statistic
  double pred_min = 0.0;
  double scale = 1.0;     // raw -> centered divisor ((T - n)/sqrt(n) for wishart)
  double origin = 0.0;    // n for wishart, 0 for wigner
};

inline Centering make_centering(const ExperimentConfig& cfg, const GridCell& cell) {
  Centering c;
  if (cfg.kind == EnsembleSpec::Kind::wishart) {
    const double dev = 2.0 * std::sqrt(double(cfg.m) * std::log(double(cell.p)));
    c.origin = double(cell.n);
    c.scale = std::sqrt(double(cell.n));
    c.pred_max = dev;
    c.pred_min = -dev;
  } else {
    c.origin = 0.0;
    c.scale = 1.0;
    c.pred_max = predict_extreme_wigner(cfg.m, double(cell.p), cfg.eta, Side::max);
    c.pred_min = predict_extreme_wigner(cfg.m, double(cell.p), cfg.eta, Side::min);
  }
  return c;
}

}  // namespace detail

inline ExperimentReport run_extreme_experiment(const ExperimentConfig& cfg,
                                               int workers = 1) {
  cfg.validate();
  if (workers < 1) fail_input("run_extreme_experiment: workers >= 1 required");
  const auto t0 = std::chrono::steady_clock::now();

  // capacity pre-check so failures name the offending cell
  if (cfg.strategy == Strategy::enumerate) {
    for (const auto& cell : cfg.cells) {
      const double cnt =
          std::exp(detail::log_binom(double(cell.p), double(cfg.m)));
      if (cnt > 1e7)
        fail_capacity("run_extreme_experiment: enumerate capacity exceeded at cell (n=" +
                      std::to_string(cell.n) + ", p=" + std::to_string(cell.p) + ")");
    }
  }

  ExperimentReport report;
  report.config = cfg;
  report.generator = generator_name();
  const RngStream root = RngStream::root(cfg.seed);

  for (std::size_t ci = 0; ci < cfg.cells.size(); ++ci) {
    const GridCell cell = cfg.cells[ci];
    const RngStream cell_stream = derive_stream(root, ci);
    const long reps = cfg.reps;
    std::vector<double> T(reps), V(reps);

    auto run_range = [&](long lo, long hi) {
      for (long r = lo; r < hi; ++r) {
        RngStream rs = derive_stream(cell_stream, std::uint64_t(r));
        const SymMatrix W = cfg.kind == EnsembleSpec::Kind::wishart
                                ? sample_wishart(cell.n, cell.p, rs)
                                : sample_wigner(cell.p, cfg.eta, rs);
        T[r] = max_minor_lambda1(W, cfg.m, cfg.strategy).value;
        V[r] = min_minor_lambdam(W, cfg.m, cfg.strategy).value;
      }
    };

    if (workers == 1 || reps == 1) {
      run_range(0, reps);
    } else {
      const int nw = int(std::min<long>(workers, reps));
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errs(nw);
      const long chunk = (reps + nw - 1) / nw;
      for (int w = 0; w < nw; ++w) {
        const long lo = w * chunk;
        const long hi = std::min<long>(reps, lo + chunk);
        pool.emplace_back([&, lo, hi, w] {
          try {
            run_range(lo, hi);
          } catch (...) {
            errs[w] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    }

    const detail::Centering cen = detail::make_centering(cfg, cell);
    std::vector<double> zmax(reps), zmin(reps), ratio(reps);
    for (long r = 0; r < reps; ++r) {
      const double tc = (T[r] - cen.origin) / cen.scale;
      const double vc = (V[r] - cen.origin) / cen.scale;
      zmax[r] = tc - cen.pred_max;
      zmin[r] = vc - cen.pred_min;
      ratio[r] = cen.pred_max != 0.0
                     ? tc / cen.pred_max
                     : std::numeric_limits<double>::quiet_NaN();
    }

    CellReport cr;
    cr.n = cell.n;
    cr.p = cell.p;
    cr.m = cfg.m;
    cr.t_stat = summarize(T);
    cr.v_stat = summarize(V);
    cr.z_max = summarize(zmax);
    cr.z_min = summarize(zmin);
    cr.ratio_max = summarize(ratio);

    for (double a : cfg.alphas) {
      for (double d : cfg.deltas) {
        MomentRow row;
        row.alpha = a;
        row.delta = d;
        row.trunc_zmax = truncated_exp_moment(zmax, a, d);
        row.trunc_zmin = truncated_exp_moment(zmin, a, d);
        cr.moments.push_back(row);
      }
      ExpMomentRow er;
      er.alpha = a;
      std::vector<double> buf(reps);
      for (long r = 0; r < reps; ++r) buf[r] = std::exp(a * std::abs(zmax[r]));
      er.plain_zmax = pairwise_sum(buf.data(), buf.size()) / double(reps);
      for (long r = 0; r < reps; ++r) buf[r] = std::pow(std::abs(zmax[r]), a);
      er.power_zmax = pairwise_sum(buf.data(), buf.size()) / double(reps);
      for (long r = 0; r < reps; ++r) buf[r] = std::exp(a * std::abs(zmin[r]));
      er.plain_zmin = pairwise_sum(buf.data(), buf.size()) / double(reps);
      for (long r = 0; r < reps; ++r) buf[r] = std::pow(std::abs(zmin[r]), a);
      er.power_zmin = pairwise_sum(buf.data(), buf.size()) / double(reps);
      cr.exp_moments.push_back(er);
    }
    for (double d : cfg.deltas) {
      ExceedRow ex;
      ex.delta = d;
      long cmax = 0, cmin = 0;
      for (long r = 0; r < reps; ++r) {
        if (std::abs(zmax[r]) >= d) ++cmax;
        if (std::abs(zmin[r]) >= d) ++cmin;
      }
      ex.p_zmax = double(cmax) / double(reps);
      ex.p_zmin = double(cmin) / double(reps);
      cr.exceed.push_back(ex);
    }

    // exceedance of the raw max statistic past predictor + t, against the
    // p^m union bound evaluated at kappa
    for (double t : {1.0, 2.0, 3.0}) {
      TailRow tr;
      tr.t = t;
      const double dev = 2.0 * std::sqrt(double(cfg.m) * std::log(double(cell.p)));
      if (cfg.kind == EnsembleSpec::Kind::wigner) {
        tr.x = dev + t;
        long c = 0;
        for (long r = 0; r < reps; ++r)
          if (T[r] >= tr.x) ++c;
        tr.freq = double(c) / double(reps);
        if (cfg.m >= 2 && tr.x > 4.0 * std::sqrt(double(cfg.m))) {
          tr.bound_valid = true;
          tr.log_union_bound =
              double(cfg.m) * std::log(double(cell.p)) +
              wigner_lambda1_tail_log_bound(tr.x, cfg.m, cfg.kappa);
        }
      } else {
        tr.x = double(cell.n) + std::sqrt(double(cell.n)) * (dev + t);
        long c = 0;
        for (long r = 0; r < reps; ++r)
          if (T[r] >= tr.x) ++c;
        tr.freq = double(c) / double(reps);
        const double y = (dev + t) / std::sqrt(double(cell.n));
        const double r_param = 2.0, d_param = 0.01;
        if (y > 2.0 * d_param * double(cfg.m) * r_param) {
          tr.bound_valid = true;
          tr.log_union_bound =
              double(cfg.m) * std::log(double(cell.p)) +
              wishart_moderate_log_bound(y, double(cell.n), cfg.m, r_param,
                                         d_param, cfg.kappa, Side::max);
        }
      }
      cr.tails.push_back(tr);
    }

    std::vector<double> absz(reps);
    for (long r = 0; r < reps; ++r) absz[r] = std::abs(zmax[r]);
    cr.integral_identity_residual =
        integral_identity_check(absz, cfg.alphas.front(), cfg.deltas.front());

    if (cfg.keep_samples) {
      cr.samples_T = T;
      cr.samples_V = V;
    }
    report.cells.push_back(std::move(cr));
  }

  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

// Per-cell convergence diagnostics across a p-grid: E e^{alpha |Z|},
// E |Z|^alpha, Var(Z), P(|Z| >= delta), with advisory monotone-trend flags
// toward the limits 1, 0, 0, 0.
struct TrendTable {
  double alpha = 0.0;
  double delta = 0.0;
  std::vector<long> p;
  std::vector<double> exp_moment, power_moment, var_z, exceed_prob;
  bool exp_nonincreasing = false, power_nonincreasing = false,
       var_nonincreasing = false, exceed_nonincreasing = false;
  bool exp_endpoint_decrease = false, power_endpoint_decrease = false,
       var_endpoint_decrease = false, exceed_endpoint_decrease = false;
};

inline TrendTable convergence_diagnostics(const ExperimentReport& report,
                                          double alpha) {
  if (report.cells.size() < 2)
    fail_input("convergence_diagnostics: need >= 2 cells");
  const long n0 = report.cells.front().n;
  for (const auto& c : report.cells) {
    if (c.m != report.config.m || c.n != n0)
      fail_input("convergence_diagnostics: cells must share (n, m)");
  }
  TrendTable t;
  t.alpha = alpha;
  t.delta = report.config.deltas.front();
  for (const auto& c : report.cells) {
    const ExpMomentRow* row = nullptr;
    for (const auto& er : c.exp_moments)
      if (er.alpha == alpha) row = &er;
    if (!row) fail_input("convergence_diagnostics: alpha not in config.alphas");
    t.p.push_back(c.p);
    t.exp_moment.push_back(row->plain_zmax);
    t.power_moment.push_back(row->power_zmax);
    t.var_z.push_back(c.z_max.variance);
    t.exceed_prob.push_back(c.exceed.front().p_zmax);
  }
  auto nonincreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] > v[i - 1]) return false;
    return true;
  };
  auto endpoint = [](const std::vector<double>& v) { return v.back() < v.front(); };
  t.exp_nonincreasing = nonincreasing(t.exp_moment);
  t.power_nonincreasing = nonincreasing(t.power_moment);
  t.var_nonincreasing = nonincreasing(t.var_z);
  t.exceed_nonincreasing = nonincreasing(t.exceed_prob);
  t.exp_endpoint_decrease = endpoint(t.exp_moment);
  t.power_endpoint_decrease = endpoint(t.power_moment);
  t.var_endpoint_decrease = endpoint(t.var_z);
  t.exceed_endpoint_decrease = endpoint(t.exceed_prob);
  return t;
}

}  // namespace minorext
