#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nullflow/numsim.hpp"

namespace nullflow {

/// Column header for a saved time: "t=" followed by %.6g.
inline std::string time_header(double t) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "t=%.6g", t);
  return buf;
}

inline std::string format_value(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Header "sigma,t=...,t=...", then one row per node.
inline void write_columns(const std::filesystem::path& file, const std::vector<double>& sigma,
                          const std::vector<double>& times, const std::vector<std::vector<double>>& columns) {
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  os << "sigma";
  for (double t : times) os << ',' << time_header(t);
  os << '\n';
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    os << format_value(sigma[i]);
    for (const auto& c : columns) os << ',' << format_value(c[i]);
    os << '\n';
  }
}

/// k1.csv and k2.csv.
inline void write_curvature_csv(const std::filesystem::path& dir, const Trajectory& tr) {
  std::vector<double> times;
  std::vector<std::vector<double>> c1, c2;
  for (const auto& f : tr.frames) {
    times.push_back(f.t);
    c1.push_back(f.k1);
    c2.push_back(f.k2);
  }
  const std::vector<double>& sigma = tr.frames.front().sigma;
  write_columns(dir / "k1.csv", sigma, times, c1);
  write_columns(dir / "k2.csv", sigma, times, c2);
}

/// gamma0.csv ... gamma3.csv, one file per coordinate of the curve.
inline void write_curve_csv(const std::filesystem::path& dir, const NlieResult& r) {
  std::vector<double> times;
  for (const auto& f : r.trajectory.frames) times.push_back(f.t);
  for (int c = 0; c < 4; ++c) {
    std::vector<std::vector<double>> cols;
    for (const auto& path : r.curves) {
      std::vector<double> col;
      for (const auto& n : path.nodes) col.push_back(n.gamma[c]);
      cols.push_back(std::move(col));
    }
    write_columns(dir / ("gamma" + std::to_string(c) + ".csv"), r.curves.front().sigma, times, cols);
  }
}

inline nlohmann::json config_json(const SimConfig& cfg) {
  return {{"a", cfg.a},
          {"eps1", cfg.eps1},
          {"eps2", cfg.eps2},
          {"grid_points", cfg.grid_points},
          {"domain_length", cfg.domain_length},
          {"sigma0", cfg.sigma0},
          {"dt", cfg.dt},
          {"t_end", cfg.t_end},
          {"stencil", cfg.stencil == Stencil::central4 ? "central4" : "central6"},
          {"output_stride", cfg.output_stride},
          {"stability_constant", cfg.stability_constant}};
}

/// Config echo, time and mass series, stability data and any curve drifts.
inline nlohmann::json run_report(const SimConfig& cfg, const Trajectory& tr, const std::vector<FramePath>& curves = {}) {
  nlohmann::json j;
  j["config"] = config_json(cfg);
  std::vector<double> times;
  for (const auto& f : tr.frames) times.push_back(f.t);
  j["times"] = times;
  j["mass_k1"] = tr.mass_k1;
  j["mass_k2"] = tr.mass_k2;
  j["mass_drift_k1"] = tr.mass_drift(0);
  j["mass_drift_k2"] = tr.mass_drift(1);
  j["flow_order"] = tr.flow_order;
  j["stability_bound"] = std::isfinite(tr.stability_bound) ? nlohmann::json(tr.stability_bound) : nlohmann::json();
  j["dt_used"] = tr.dt_used;
  j["steps"] = tr.steps;
  if (!curves.empty()) {
    std::vector<double> gram, null, curv;
    for (const auto& c : curves) {
      gram.push_back(c.gram_drift);
      null.push_back(c.null_drift);
      curv.push_back(c.curvature_drift);
    }
    j["gram_drift"] = gram;
    j["null_drift"] = null;
    j["curvature_drift"] = curv;
  }
  return j;
}

}  // namespace nullflow
