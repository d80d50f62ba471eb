#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <minorext/minorext.hpp>
#include <minorext/report_io.hpp>

namespace mx = minorext;
using ordered_json = nlohmann::ordered_json;

namespace {

int error_exit(const mx::Error& e) {
  const char* kind = e.kind() == mx::ErrKind::input     ? "input"
                     : e.kind() == mx::ErrKind::domain  ? "domain"
                                                        : "capacity";
  ordered_json j;
  j["error"] = ordered_json{{"kind", kind}, {"message", e.what()}};
  std::cerr << j.dump() << "\n";
  return e.kind() == mx::ErrKind::input ? 1 : 2;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    mx::fail_input("mc config: bad numeric value for " + what + ": '" + s + "'");
  }
}

long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    mx::fail_input("mc config: bad integer value for " + what + ": '" + s + "'");
  }
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    mx::fail_input("mc config: bad unsigned value for " + what + ": '" + s + "'");
  }
}

// flat key=value config; '#' starts a comment line
mx::ExperimentConfig parse_mc_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) mx::fail_input("mc: cannot open config file '" + path + "'");
  mx::ExperimentConfig cfg;
  bool saw_alphas = false, saw_deltas = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      mx::fail_input("mc config line " + std::to_string(lineno) +
                     ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key == "ensemble") {
      if (val == "wishart")
        cfg.kind = mx::EnsembleSpec::Kind::wishart;
      else if (val == "wigner")
        cfg.kind = mx::EnsembleSpec::Kind::wigner;
      else
        mx::fail_input("mc config: ensemble must be wishart or wigner");
    } else if (key == "eta") {
      cfg.eta = parse_real(val, "eta");
    } else if (key == "m") {
      cfg.m = parse_int(val, "m");
    } else if (key == "cells") {
      cfg.cells.clear();
      for (const auto& tok : split(val, ',')) {
        mx::GridCell c;
        const std::string tt = trim(tok);
        const auto colon = tt.find(':');
        if (colon == std::string::npos) {
          c.p = parse_int(tt, "cells");
        } else {
          c.n = parse_int(trim(tt.substr(0, colon)), "cells");
          c.p = parse_int(trim(tt.substr(colon + 1)), "cells");
        }
        cfg.cells.push_back(c);
      }
    } else if (key == "reps") {
      cfg.reps = parse_int(val, "reps");
    } else if (key == "seed") {
      cfg.seed = parse_u64(val, "seed");
    } else if (key == "strategy") {
      cfg.strategy = mx::strategy_from_name(val);
    } else if (key == "kappa") {
      cfg.kappa = parse_real(val, "kappa");
    } else if (key == "alphas") {
      saw_alphas = true;
      cfg.alphas.clear();
      for (const auto& tok : split(val, ','))
        cfg.alphas.push_back(parse_real(trim(tok), "alphas"));
    } else if (key == "deltas") {
      saw_deltas = true;
      cfg.deltas.clear();
      for (const auto& tok : split(val, ','))
        cfg.deltas.push_back(parse_real(trim(tok), "deltas"));
    } else if (key == "keep_samples") {
      if (val == "1" || val == "true")
        cfg.keep_samples = true;
      else if (val == "0" || val == "false")
        cfg.keep_samples = false;
      else
        mx::fail_input("mc config: keep_samples must be 0/1/true/false");
    } else {
      mx::fail_input("mc config: unknown key '" + key + "'");
    }
  }
  if (!saw_alphas) cfg.alphas = {1.0};
  if (!saw_deltas) cfg.deltas = {0.5};
  return cfg;
}

mx::Side side_of(const std::string& s) {
  if (s == "max") return mx::Side::max;
  if (s == "min") return mx::Side::min;
  mx::fail_input("--side must be max or min");
}

struct TailFlags {
  std::string fn;
  std::string side = "max";
  std::map<std::string, double> num;

  double need(const std::string& k) const {
    const auto it = num.find(k);
    if (it == num.end())
      mx::fail_input("tails: --" + k + " required for --fn " + fn);
    return it->second;
  }
  double get(const std::string& k, double dflt) const {
    const auto it = num.find(k);
    return it == num.end() ? dflt : it->second;
  }
};

ordered_json run_tails(const TailFlags& f) {
  ordered_json out;
  const std::string& fn = f.fn;
  if (fn == "b_star") {
    out["value"] = mx::b_star(f.need("t"));
  } else if (fn == "rate_I") {
    out["value"] = mx::rate_I(f.need("s"));
  } else if (fn == "predict_wishart") {
    out["value"] = mx::predict_extreme_wishart(
        f.need("n"), (long)f.need("m"), f.need("p"), side_of(f.side));
  } else if (fn == "predict_wigner") {
    out["value"] = mx::predict_extreme_wigner(
        (long)f.need("m"), f.need("p"), f.get("eta", 2.0), side_of(f.side));
  } else if (fn == "epsilon_tau") {
    const auto et = mx::epsilon_tau((long)f.need("m"), f.need("p"), f.need("t"));
    out["epsilon"] = et.epsilon;
    out["tau"] = et.tau;
  } else if (fn == "wigner_tail") {
    const double lb = mx::wigner_lambda1_tail_log_bound(
        f.need("x"), (long)f.need("m"), f.get("kappa", 3.0));
    out["log_value"] = lb;
    out["value"] = mx::clamped_exp(lb);
  } else if (fn == "mdp_eta_tail") {
    out["value"] = mx::mdp_eta_tail_bound(f.need("x"), (long)f.need("m"),
                                          f.need("eta"), f.need("r"),
                                          f.need("delta"));
  } else if (fn == "mdp_eta_tail_opt") {
    const auto o =
        mx::mdp_eta_tail_bound_opt(f.need("x"), (long)f.need("m"), f.need("eta"));
    out["value"] = o.bound;
    out["r"] = o.r;
    out["delta"] = o.delta;
  } else if (fn == "wishart_moderate") {
    const double lb = mx::wishart_moderate_log_bound(
        f.need("y"), f.need("n"), (long)f.need("m"), f.get("r", 2.0),
        f.get("d", 0.01), f.get("kappa", 3.0), side_of(f.side));
    out["log_value"] = lb;
    out["value"] = mx::clamped_exp(lb);
  } else if (fn == "log_phi_bar") {
    const auto r = mx::log_phi_bar(f.need("x"));
    out["value"] = r.exact;
    out["asymptotic"] = r.asymptotic;
  } else if (fn == "chi2_lower_tail") {
    out["value"] = mx::chi2_lower_tail_bound(f.need("x"));
  } else if (fn == "log_binom_bracket") {
    const auto b =
        mx::log_binomial_with_bounds((long)f.need("p"), (long)f.need("m"));
    out["lower"] = b.lower;
    out["value"] = b.exact;
    out["upper"] = b.upper;
  } else if (fn == "overlap_ratio_log") {
    out["value"] = mx::overlap_ratio_log((long)f.need("p"), (long)f.need("m"));
  } else if (fn == "max_l") {
    const auto r = mx::max_l_value((long)f.need("m"), f.need("epsilon"));
    out["l"] = r.argmax_l;
    out["value"] = r.value;
  } else if (fn == "assumptions") {
    const auto a =
        mx::assumption_diagnostics(f.need("n"), f.need("p"), (long)f.need("m"));
    out["rho1"] = a.rho1;
    out["rho2"] = a.rho2;
    out["xi_p"] = a.xi_p;
    out["omega_n"] = a.omega_n;
  } else {
    mx::fail_input("tails: unknown --fn '" + fn + "'");
  }
  return out;
}

ordered_json run_density_selftest() {
  std::vector<std::tuple<std::string, double, double, bool, bool>> rows;
  // name, value, tol, pass, has_tol
  auto add = [&](const std::string& name, double value, double tol) {
    rows.emplace_back(name, value, tol, value < tol, true);
  };
  auto add_flag = [&](const std::string& name, double value, bool pass) {
    rows.emplace_back(name, value, 0.0, pass, false);
  };
  const auto normal02_logpdf = [](double x) {
    return -0.25 * x * x - 0.5 * std::log(4.0 * M_PI);
  };

  double worst = 0.0;
  for (double x = 0.5; x <= 30.0; x += 0.5)
    worst = std::max(worst, std::abs(mx::log_wishart_eig_density({x}, 1, 12.0) -
                                     mx::chi2_log_pdf(x, 12.0)));
  add("m1_wishart_eig_vs_chi2", worst, 1e-10);

  worst = 0.0;
  for (double x = -5.0; x <= 5.0; x += 0.25)
    worst = std::max(worst, std::abs(mx::log_wigner_eig_density({x}, 1) -
                                     normal02_logpdf(x)));
  add("m1_wigner_eig_vs_normal", worst, 1e-10);

  worst = 0.0;
  for (double x = -5.0; x <= 5.0; x += 0.25) {
    mx::SymMatrix w = mx::SymMatrix::diag({x});
    worst = std::max(worst, std::abs(mx::log_matrix_densities(w, 100.0).goe -
                                     normal02_logpdf(x)));
  }
  add("m1_goe_matrix_vs_normal", worst, 1e-10);

  {
    const auto rule = mx::gauss_legendre(80);
    const double L = 12.0;
    double integral = 0.0;
    for (int i = 0; i < 80; ++i) {
      const auto [x, wx] = mx::map_node(rule, i, -L, L);
      double inner = 0.0;
      for (int j = 0; j < 80; ++j) {
        const auto [y, wy] = mx::map_node(rule, j, -L, x);
        inner += wy * std::exp(mx::log_wigner_eig_density({x, y}, 2));
      }
      integral += wx * inner;
    }
    add("wigner_m2_normalization_abs_err", std::abs(integral - 1.0), 1e-3);
  }

  const std::vector<double> ngrid = {1e2, 1e3, 1e4, 1e5, 1e6};
  for (long m = 1; m <= 3; ++m) {
    std::vector<double> cgap, abgap;
    for (double n : ngrid) {
      const auto gc = mx::gamma_constants(m, n);
      cgap.push_back(std::abs(gc.log_C_mn - gc.log_c_m));
      abgap.push_back(std::abs(gc.log_A_mn - gc.log_B_m));
    }
    auto decreasing = [](const std::vector<double>& v) {
      for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
      return true;
    };
    add_flag("c_const_trend_m" + std::to_string(m), cgap.back(), decreasing(cgap));
    add_flag("ab_const_trend_m" + std::to_string(m), abgap.back(),
             decreasing(abgap));
    if (m == 2) {
      add("c_gap_m2_n1e4", cgap[2], 0.05);
      add("c_gap_m2_n1e6", cgap[4], 0.005);
    }
  }

  {
    const double n = 50.0;
    const std::vector<double> v = {0.7, 0.1, -0.4};
    std::vector<double> mu;
    for (double vi : v) mu.push_back(n + std::sqrt(n) * vi);
    const double lhs = mx::log_shifted_wishart_eig_density(v, 3, n);
    const double rhs =
        1.5 * std::log(n) + mx::log_wishart_eig_density(mu, 3, n);
    add("jacobian_identity_residual", std::abs(lhs - rhs), 1e-12);
  }

  {
    std::vector<double> r;
    for (double n : {1e2, 1e4, 1e6})
      r.push_back(std::abs(mx::log_eig_density_ratio({0.0}, 1, n)));
    add_flag("eig_ratio_trend_m1", r.back(), r[0] > r[1] && r[1] > r[2]);
    const double r2a = std::abs(mx::log_eig_density_ratio({1.0, -1.0}, 2, 1e2));
    const double r2b = std::abs(mx::log_eig_density_ratio({1.0, -1.0}, 2, 1e6));
    add_flag("eig_ratio_trend_m2", r2b, r2b < r2a);
  }

  {
    const mx::SymMatrix w1 = mx::SymMatrix::diag({0.0});
    const double d = mx::log_matrix_densities(w1, 1e6).wishart_shifted;
    const double logB1 = mx::gamma_constants(1, 100.0).log_B_m;
    add("shifted_density_m1_limit", std::abs(d - logB1), 0.01);

    mx::SymMatrix w2(2);
    const double g = mx::log_matrix_densities(w2, 100.0).goe;
    const double logB2 = mx::gamma_constants(2, 100.0).log_B_m;
    add("goe_zero_m2_equals_logB2", std::abs(g - logB2), 1e-12);
  }

  ordered_json checks = ordered_json::array();
  bool all_pass = true;
  for (const auto& [name, value, tol, pass, has_tol] : rows) {
    ordered_json row;
    row["name"] = name;
    row["value"] = value;
    if (has_tol)
      row["tol"] = tol;
    else
      row["tol"] = nullptr;
    row["pass"] = pass;
    all_pass = all_pass && pass;
    checks.push_back(std::move(row));
  }
  ordered_json out;
  out["checks"] = std::move(checks);
  out["all_pass"] = all_pass;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extreme eigenvalues of principal minors: sampling, search, "
               "bounds, and RIP estimation"};
  app.require_subcommand(1);

  // sample
  auto* c_sample = app.add_subcommand("sample", "draw one matrix, write text");
  std::string s_ens;
  long s_n = 0, s_p = 0;
  double s_eta = 2.0;
  std::uint64_t s_seed = 0;
  c_sample->add_option("--ensemble", s_ens, "wishart | wigner")
      ->required()
      ->check(CLI::IsMember({"wishart", "wigner"}));
  auto* s_n_opt = c_sample->add_option("--n", s_n, "rows (wishart)");
  c_sample->add_option("--p", s_p, "dimension")->required();
  c_sample->add_option("--eta", s_eta, "wigner diagonal variance");
  c_sample->add_option("--seed", s_seed, "rng seed");

  // extreme
  auto* c_ext = app.add_subcommand("extreme", "extreme eigenvalue over minors");
  std::string e_ens, e_mode = "max", e_strategy = "branch_and_bound";
  long e_n = 0, e_p = 0, e_m = 1;
  double e_eta = 2.0;
  std::uint64_t e_seed = 0;
  c_ext->add_option("--ensemble", e_ens, "wishart | wigner")
      ->required()
      ->check(CLI::IsMember({"wishart", "wigner"}));
  auto* e_n_opt = c_ext->add_option("--n", e_n, "rows (wishart)");
  c_ext->add_option("--p", e_p, "dimension")->required();
  c_ext->add_option("--m", e_m, "minor size")->required();
  c_ext->add_option("--eta", e_eta, "wigner diagonal variance");
  c_ext->add_option("--mode", e_mode, "max | min")
      ->check(CLI::IsMember({"max", "min"}));
  c_ext->add_option("--strategy", e_strategy, "search strategy")
      ->check(CLI::IsMember({"enumerate", "branch_and_bound", "greedy"}));
  c_ext->add_option("--seed", e_seed, "rng seed");

  // mc
  auto* c_mc = app.add_subcommand("mc", "replication experiment from config");
  std::string m_config, m_out_json, m_out_csv;
  int m_workers = 1;
  c_mc->add_option("--config", m_config, "flat key=value config file")->required();
  c_mc->add_option("--out-json", m_out_json, "JSON report path (default stdout)");
  c_mc->add_option("--out-csv", m_out_csv, "CSV report path");
  c_mc->add_option("--workers", m_workers, "worker threads");

  // tails
  auto* c_tails = app.add_subcommand("tails", "evaluate a bound or predictor");
  TailFlags tf;
  c_tails->add_option("--fn", tf.fn, "function name")->required();
  c_tails->add_option("--side", tf.side, "max | min");
  static const char* tail_names[] = {"t", "s",     "x", "y",     "n",
                                     "p", "m",     "eta", "r",   "d",
                                     "delta", "kappa", "epsilon"};
  constexpr int n_tail_flags = 13;
  double tail_vals[n_tail_flags];
  CLI::Option* tail_opts[n_tail_flags];
  for (int i = 0; i < n_tail_flags; ++i)
    tail_opts[i] = c_tails->add_option(std::string("--") + tail_names[i],
                                       tail_vals[i], "numeric argument");

  // density-selftest
  auto* c_dens =
      app.add_subcommand("density-selftest", "density oracle residual table");

  // rip
  auto* c_rip = app.add_subcommand("rip", "restricted isometry constants");
  long r_n = 0, r_p = 0, r_k = 0;
  double r_t = 2.0, r_margin = 0.1;
  std::uint64_t r_seed = 0;
  bool r_design_only = false, r_no_exact = false;
  std::string r_strategy = "branch_and_bound";
  auto* r_n_opt = c_rip->add_option("--n", r_n, "measurement rows");
  c_rip->add_option("--p", r_p, "signal dimension")->required();
  c_rip->add_option("--k", r_k, "sparsity")->required();
  c_rip->add_option("--t", r_t, "aspect (t*k integer)");
  c_rip->add_option("--seed", r_seed, "rng seed");
  c_rip->add_option("--margin", r_margin, "design safety margin in [0,1)");
  c_rip->add_flag("--design-only", r_design_only, "only compute minimum n");
  c_rip->add_flag("--no-exact", r_no_exact, "skip exact minor search");
  c_rip->add_option("--strategy", r_strategy, "search strategy")
      ->check(CLI::IsMember({"enumerate", "branch_and_bound", "greedy"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_sample->parsed()) {
      mx::EnsembleSpec spec;
      if (s_ens == "wishart") {
        if (s_n_opt->count() == 0) mx::fail_input("sample: --n required for wishart");
        spec = mx::EnsembleSpec::wishart(s_n, s_p);
      } else {
        spec = mx::EnsembleSpec::wigner(s_p, s_eta);
      }
      spec.validate();
      mx::RngStream rng = mx::RngStream::root(s_seed);
      const mx::SymMatrix W = mx::sample_ensemble(spec, rng);
      std::cerr << "log: sample ensemble=" << spec.kind_name() << " n=" << spec.n
                << " p=" << spec.p << " eta=" << spec.eta << " seed=" << s_seed
                << "\n";
      mx::write_matrix_text(std::cout, W);
      return 0;
    }

    if (c_ext->parsed()) {
      mx::EnsembleSpec spec;
      if (e_ens == "wishart") {
        if (e_n_opt->count() == 0) mx::fail_input("extreme: --n required for wishart");
        spec = mx::EnsembleSpec::wishart(e_n, e_p);
      } else {
        spec = mx::EnsembleSpec::wigner(e_p, e_eta);
      }
      spec.validate();
      const mx::Strategy strat = mx::strategy_from_name(e_strategy);
      mx::RngStream rng = mx::RngStream::root(e_seed);
      const mx::SymMatrix W = mx::sample_ensemble(spec, rng);
      const mx::SubsetExtremeResult res =
          e_mode == "max" ? mx::max_minor_lambda1(W, e_m, strat)
                          : mx::min_minor_lambdam(W, e_m, strat);
      ordered_json cfg;
      cfg["ensemble"] = e_ens;
      if (e_ens == "wishart") cfg["n"] = spec.n;
      cfg["p"] = spec.p;
      cfg["m"] = e_m;
      if (e_ens == "wigner") cfg["eta"] = spec.eta;
      cfg["mode"] = e_mode;
      cfg["strategy"] = e_strategy;
      cfg["seed"] = e_seed;
      ordered_json out;
      out["config"] = std::move(cfg);
      out["value"] = res.value;
      out["subset"] = res.subset;
      out["nodes_explored"] = res.nodes_explored;
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (c_mc->parsed()) {
      const mx::ExperimentConfig cfg = parse_mc_config(m_config);
      const mx::ExperimentReport rep = mx::run_extreme_experiment(cfg, m_workers);
      const std::string js = mx::report_to_json_string(rep);
      if (m_out_json.empty()) {
        std::cout << js;
      } else {
        std::ofstream out(m_out_json);
        if (!out) mx::fail_input("mc: cannot write '" + m_out_json + "'");
        out << js;
      }
      if (!m_out_csv.empty()) {
        std::ofstream out(m_out_csv);
        if (!out) mx::fail_input("mc: cannot write '" + m_out_csv + "'");
        out << mx::report_to_csv(rep);
      }
      std::cerr << "log: mc cells=" << cfg.cells.size() << " reps=" << cfg.reps
                << " workers=" << m_workers
                << " wall_time_sec=" << rep.wall_time_sec << "\n";
      return 0;
    }

    if (c_tails->parsed()) {
      for (int i = 0; i < n_tail_flags; ++i)
        if (tail_opts[i]->count() > 0) tf.num[tail_names[i]] = tail_vals[i];
      std::cout << run_tails(tf).dump(2) << "\n";
      return 0;
    }

    if (c_dens->parsed()) {
      const ordered_json out = run_density_selftest();
      std::cout << out.dump(2) << "\n";
      return out["all_pass"].get<bool>() ? 0 : 2;
    }

    if (c_rip->parsed()) {
      if (r_design_only) {
        const long min_n = mx::design_min_n(double(r_p), r_k, r_t, r_margin);
        ordered_json out;
        out["p"] = r_p;
        out["k"] = r_k;
        out["t"] = r_t;
        out["margin"] = r_margin;
        out["b_star_t"] = mx::b_star(r_t);
        out["min_n"] = min_n;
        std::cout << out.dump(2) << "\n";
        return 0;
      }
      if (r_n_opt->count() == 0)
        mx::fail_input("rip: --n required unless --design-only");
      const mx::RipReport rep =
          mx::build_rip_report(r_n, r_p, r_k, r_t, r_seed, !r_no_exact,
                               mx::strategy_from_name(r_strategy));
      std::cout << mx::rip_report_to_json(rep).dump(2) << "\n";
      return 0;
    }
  } catch (const mx::Error& e) {
    return error_exit(e);
  } catch (const std::exception& e) {
    ordered_json j;
    j["error"] = ordered_json{{"kind", "internal"}, {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    return 2;
  }
  return 0;
}
