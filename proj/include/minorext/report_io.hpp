#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "ensembles.hpp"
#include "minors.hpp"
#include "montecarlo.hpp"
#include "rip.hpp"

namespace minorext {

using ordered_json = nlohmann::ordered_json;

inline ordered_json config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["ensemble"] =
      cfg.kind == EnsembleSpec::Kind::wishart ? "wishart" : "wigner";
  j["eta"] = cfg.eta;
  j["m"] = cfg.m;
  ordered_json cells = ordered_json::array();
  for (const auto& c : cfg.cells) cells.push_back({{"n", c.n}, {"p", c.p}});
  j["cells"] = std::move(cells);
  j["reps"] = cfg.reps;
  j["seed"] = cfg.seed;
  j["strategy"] = strategy_name(cfg.strategy);
  j["kappa"] = cfg.kappa;
  j["alphas"] = cfg.alphas;
  j["deltas"] = cfg.deltas;
  return j;
}

inline ordered_json stats_to_json(const SummaryStats& s) {
  ordered_json j;
  j["mean"] = s.mean;
  j["median"] = s.median;
  j["variance"] = s.variance;
  j["min"] = s.min;
  j["max"] = s.max;
  return j;
}

inline ordered_json cell_to_json(const CellReport& c, bool with_samples) {
  ordered_json j;
  j["n"] = c.n;
  j["p"] = c.p;
  j["m"] = c.m;
  j["T"] = stats_to_json(c.t_stat);
  j["V"] = stats_to_json(c.v_stat);
  j["Z"] = stats_to_json(c.z_max);
  j["Zprime"] = stats_to_json(c.z_min);
  j["ratio"] = stats_to_json(c.ratio_max);
  ordered_json moments = ordered_json::array();
  for (const auto& r : c.moments)
    moments.push_back({{"alpha", r.alpha},
                       {"delta", r.delta},
                       {"trunc_zmax", r.trunc_zmax},
                       {"trunc_zmin", r.trunc_zmin}});
  j["truncated_moments"] = std::move(moments);
  ordered_json em = ordered_json::array();
  for (const auto& r : c.exp_moments)
    em.push_back({{"alpha", r.alpha},
                  {"exp_zmax", r.plain_zmax},
                  {"pow_zmax", r.power_zmax},
                  {"exp_zmin", r.plain_zmin},
                  {"pow_zmin", r.power_zmin}});
  j["exp_moments"] = std::move(em);
  ordered_json ex = ordered_json::array();
  for (const auto& r : c.exceed)
    ex.push_back({{"delta", r.delta}, {"p_zmax", r.p_zmax}, {"p_zmin", r.p_zmin}});
  j["exceedance"] = std::move(ex);
  ordered_json tails = ordered_json::array();
  for (const auto& r : c.tails) {
    ordered_json tj;
    tj["t"] = r.t;
    tj["x"] = r.x;
    tj["freq"] = r.freq;
    if (r.bound_valid)
      tj["log_union_bound"] = r.log_union_bound;
    else
      tj["log_union_bound"] = nullptr;
    tails.push_back(std::move(tj));
  }
  j["tails"] = std::move(tails);
  j["integral_identity_residual"] = c.integral_identity_residual;
  if (with_samples) {
    j["samples_T"] = c.samples_T;
    j["samples_V"] = c.samples_V;
  }
  return j;
}

inline ordered_json report_to_json(const ExperimentReport& rep) {
  ordered_json j;
  j["config"] = config_to_json(rep.config);
  j["generator"] = rep.generator;
  ordered_json cells = ordered_json::array();
  for (const auto& c : rep.cells)
    cells.push_back(cell_to_json(c, rep.config.keep_samples));
  j["cells"] = std::move(cells);
  return j;
}

inline std::string report_to_json_string(const ExperimentReport& rep) {
  return report_to_json(rep).dump(2) + "\n";
}

namespace detail {

inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string csv_tag(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace detail

// long format: n,p,m,metric,value
inline std::string report_to_csv(const ExperimentReport& rep) {
  std::string out = "n,p,m,metric,value\n";
  auto emit = [&](const CellReport& c, const std::string& metric, double v) {
    out += std::to_string(c.n) + "," + std::to_string(c.p) + "," +
           std::to_string(c.m) + "," + metric + "," + detail::csv_num(v) + "\n";
  };
  auto emit_stats = [&](const CellReport& c, const std::string& name,
                        const SummaryStats& s) {
    emit(c, name + ".mean", s.mean);
    emit(c, name + ".median", s.median);
    emit(c, name + ".variance", s.variance);
    emit(c, name + ".min", s.min);
    emit(c, name + ".max", s.max);
  };
  for (const auto& c : rep.cells) {
    emit_stats(c, "T", c.t_stat);
    emit_stats(c, "V", c.v_stat);
    emit_stats(c, "Z", c.z_max);
    emit_stats(c, "Zprime", c.z_min);
    emit_stats(c, "ratio", c.ratio_max);
    for (const auto& r : c.moments) {
      const std::string tag =
          "[alpha=" + detail::csv_tag(r.alpha) + ",delta=" + detail::csv_tag(r.delta) + "]";
      emit(c, "trunc" + tag + ".zmax", r.trunc_zmax);
      emit(c, "trunc" + tag + ".zmin", r.trunc_zmin);
    }
    for (const auto& r : c.exp_moments) {
      const std::string tag = "[alpha=" + detail::csv_tag(r.alpha) + "]";
      emit(c, "exp" + tag + ".zmax", r.plain_zmax);
      emit(c, "pow" + tag + ".zmax", r.power_zmax);
      emit(c, "exp" + tag + ".zmin", r.plain_zmin);
      emit(c, "pow" + tag + ".zmin", r.power_zmin);
    }
    for (const auto& r : c.exceed) {
      const std::string tag = "[delta=" + detail::csv_tag(r.delta) + "]";
      emit(c, "exceed" + tag + ".zmax", r.p_zmax);
      emit(c, "exceed" + tag + ".zmin", r.p_zmin);
    }
    for (const auto& r : c.tails) {
      const std::string tag = "[t=" + detail::csv_tag(r.t) + "]";
      emit(c, "tail" + tag + ".x", r.x);
      emit(c, "tail" + tag + ".freq", r.freq);
      if (r.bound_valid) emit(c, "tail" + tag + ".log_union_bound", r.log_union_bound);
    }
    emit(c, "integral_identity_residual", c.integral_identity_residual);
  }
  return out;
}

inline ordered_json rip_report_to_json(const RipReport& r) {
  ordered_json j;
  j["n"] = r.n;
  j["p"] = r.p;
  j["k"] = r.k;
  j["t"] = r.t;
  j["m"] = r.m;
  if (r.has_exact) {
    j["delta_exact"] = r.delta_exact;
    j["lambda_max_k"] = r.lambda_max_k;
    j["lambda_min_k"] = r.lambda_min_k;
  } else {
    j["delta_exact"] = nullptr;
    j["lambda_max_k"] = nullptr;
    j["lambda_min_k"] = nullptr;
  }
  j["delta_predicted"] = r.delta_predicted;
  j["b_star_t"] = r.b_star_t;
  j["recovery_pass"] = r.recovery_pass;
  return j;
}

}  // namespace minorext
