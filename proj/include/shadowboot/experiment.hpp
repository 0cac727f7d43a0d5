#ifndef SHADOWBOOT_EXPERIMENT_HPP_
#define SHADOWBOOT_EXPERIMENT_HPP_

#include "shadowboot/bootstrap.hpp"
#include "shadowboot/config.hpp"
#include "shadowboot/csv.hpp"
#include "shadowboot/distfit.hpp"
#include "shadowboot/estimate.hpp"
#include "shadowboot/qsim.hpp"
#include "shadowboot/risk.hpp"
#include "shadowboot/shadow.hpp"
#include "shadowboot/snapshot_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

// Batch pipeline: simulate -> shadow -> estimates -> bootstrap -> risk ->
// curves, with every artifact written under one output directory.
//
// Files: run.json, snapshots.txt, estimates.csv, replicates_mean.csv,
// replicates_mom.csv, risk.csv, risk_summary.csv, bounds.csv, and per
// observable hist_<label>.csv, kde_<label>.csv, gauss_<label>.csv. A sweep
// adds sweep/replicates_mom_N<N>.csv. Every CSV starts with a
// "# shadowboot config_hash=... seeds" provenance line.

namespace shadowboot {

namespace fs = std::filesystem;
using Json = nlohmann::json;

inline std::string provenance(const ExperimentConfig &cfg) {
  std::string s = "shadowboot config_hash=" + cfg.hash();
  if (cfg.theta) {
    s += " theta=explicit";
  } else {
    s += " theta_seed=" + std::to_string(cfg.theta_seed);
  }
  s += " shadow_seed=" + std::to_string(cfg.shadow_seed) +
       " bootstrap_seed=" + std::to_string(cfg.bootstrap_seed);
  return s;
}

inline void write_text_file(const fs::path &path,
                            const std::function<void(std::ostream &)> &body) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  body(out);
  out.flush();
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

inline std::vector<PauliObservable>
observables_from_labels(const std::vector<std::string> &labels) {
  std::vector<PauliObservable> out;
  out.reserve(labels.size());
  for (const auto &l : labels) {
    out.push_back(PauliObservable::parse(l));
  }
  return out;
}

/// Gaussian approximation per observable, variance from 3^k - (point mean)^2.
/// The centre follows the scaling: `total` describes the sample mean, so it
/// is centred there; `per_group_median` describes MoM and uses the MoM point.
inline std::vector<GaussianApprox>
gaussian_params(std::span<const PauliObservable> observables,
                std::span<const double> point_mean,
                std::span<const double> point_mom, std::size_t N,
                const ExperimentConfig &cfg) {
  std::vector<GaussianApprox> out;
  for (std::size_t j = 0; j < observables.size(); ++j) {
    const double mu = cfg.gaussian_scaling == GaussianScaling::Total ? point_mean[j]
                                                                     : point_mom[j];
    out.push_back(gaussian_approx(observables[j], mu, point_mean[j], N, cfg.K,
                                  cfg.gaussian_scaling));
  }
  return out;
}

struct BoundRow {
  std::size_t N;
  std::size_t K;
  double epsilon;
  double delta;
  std::optional<double> min_error; // MoM replicate - exact, all observables
  std::optional<double> max_error;
  std::optional<double> p99_abs_error;
  std::optional<double> frac_within;
};

inline BoundRow bound_row(std::size_t N, std::size_t K, std::size_t M,
                          double max_norm_sq, const LabeledMatrix &mom,
                          const std::optional<std::vector<double>> &exact) {
  BoundRow r{N, K, epsilon_bound(N, max_norm_sq), implied_delta(M, K), {}, {},
             {}, {}};
  if (!exact) {
    return r;
  }
  std::vector<double> abs_err;
  double lo = INFINITY;
  double hi = -INFINITY;
  std::size_t within = 0;
  for (std::size_t b = 0; b < mom.rows(); ++b) {
    for (std::size_t j = 0; j < mom.cols(); ++j) {
      const double e = mom(b, j) - (*exact)[j];
      lo = std::min(lo, e);
      hi = std::max(hi, e);
      abs_err.push_back(std::abs(e));
      within += std::abs(e) <= r.epsilon ? 1 : 0;
    }
  }
  std::sort(abs_err.begin(), abs_err.end());
  r.min_error = lo;
  r.max_error = hi;
  r.p99_abs_error = quantile_sorted(abs_err, 0.99);
  r.frac_within = static_cast<double>(within) / static_cast<double>(abs_err.size());
  return r;
}

inline void write_bounds_csv(const fs::path &path, const std::string &prov,
                             const std::vector<BoundRow> &rows) {
  auto opt = [](const std::optional<double> &v) {
    return v ? format_double(*v) : std::string();
  };
  std::vector<std::vector<std::string>> cells;
  for (const auto &r : rows) {
    cells.push_back({std::to_string(r.N), std::to_string(r.K),
                     format_double(r.epsilon), format_double(r.delta),
                     opt(r.min_error), opt(r.max_error), opt(r.p99_abs_error),
                     opt(r.frac_within)});
  }
  write_text_file(path, [&](std::ostream &os) {
    write_csv(os, prov,
              {"N", "K", "epsilon", "delta", "min_error", "max_error",
               "p99_abs_error", "frac_within_epsilon"},
              cells);
  });
}

inline void write_replicates(const fs::path &dir, const std::string &prov,
                             const ReplicateSet &rs) {
  write_text_file(dir / "replicates_mean.csv", [&](std::ostream &os) {
    write_matrix_csv(os, prov, rs.mean_replicates);
  });
  write_text_file(dir / "replicates_mom.csv", [&](std::ostream &os) {
    write_matrix_csv(os, prov, rs.mom_replicates);
  });
}

inline void write_risk(const fs::path &dir, const std::string &prov,
                       const RiskReport &report) {
  std::vector<std::vector<std::string>> rows;
  for (const auto &r : report.rows) {
    const std::string a = format_double(r.alpha);
    rows.push_back({r.label, a, "bootstrap", format_double(r.bootstrap_evar),
                    format_double(r.bootstrap_es)});
    rows.push_back({r.label, a, "gaussian", format_double(r.gaussian_evar),
                    format_double(r.gaussian_es)});
  }
  write_text_file(dir / "risk.csv", [&](std::ostream &os) {
    write_csv(os, prov, {"observable", "alpha", "method", "EVaR", "ES"}, rows);
  });
  std::vector<std::vector<std::string>> summary;
  for (const auto &s : report.summary) {
    summary.push_back({s.measure, format_double(s.alpha),
                       format_double(s.mean_abs_diff),
                       format_double(s.std_abs_diff), s.std_defined ? "1" : "0"});
  }
  write_text_file(dir / "risk_summary.csv", [&](std::ostream &os) {
    write_csv(os, prov,
              {"measure", "alpha", "mean_abs_diff", "std_abs_diff", "std_defined"},
              summary);
  });
}

inline Json risk_json(const RiskReport &report) {
  Json rows = Json::array();
  for (const auto &r : report.rows) {
    rows.push_back({{"observable", r.label},
                    {"alpha", r.alpha},
                    {"bootstrap", {{"EVaR", r.bootstrap_evar}, {"ES", r.bootstrap_es}}},
                    {"gaussian", {{"EVaR", r.gaussian_evar}, {"ES", r.gaussian_es}}}});
  }
  Json summary = Json::array();
  for (const auto &s : report.summary) {
    summary.push_back({{"measure", s.measure},
                       {"alpha", s.alpha},
                       {"mean_abs_diff", s.mean_abs_diff},
                       {"std_abs_diff", s.std_abs_diff},
                       {"std_defined", s.std_defined}});
  }
  return {{"rows", rows}, {"summary", summary}};
}

/// hist/kde/gauss curve files from the MoM replicates. Returns the manifest
/// section listing written and skipped files.
inline Json write_curves(const fs::path &dir, const std::string &prov,
                         const LabeledMatrix &mom,
                         std::span<const GaussianApprox> gaussians,
                         const ExperimentConfig &cfg) {
  Json written = Json::array();
  Json skipped = Json::array();
  for (std::size_t j = 0; j < mom.cols(); ++j) {
    const std::string &label = mom.labels()[j];
    const auto col = mom.column(j);

    const Histogram h = histogram(col, cfg.bin_count);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      rows.push_back({format_double(h.edges[i]), format_double(h.edges[i + 1]),
                      std::to_string(h.counts[i])});
    }
    const std::string hist_name = "hist_" + label + ".csv";
    write_text_file(dir / hist_name, [&](std::ostream &os) {
      write_csv(os, prov, {"bin_lo", "bin_hi", "count"}, rows);
    });
    written.push_back(hist_name);

    auto write_curve = [&](const std::string &name, const DensityCurve &c) {
      std::vector<std::vector<std::string>> pts;
      for (std::size_t i = 0; i < c.grid.size(); ++i) {
        pts.push_back({format_double(c.grid[i]), format_double(c.density[i])});
      }
      write_text_file(dir / name, [&](std::ostream &os) {
        write_csv(os, prov, {"grid", "density"}, pts);
      });
      written.push_back(name);
    };

    const std::string kde_name = "kde_" + label + ".csv";
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    if (col.size() >= 2 && *lo != *hi) {
      write_curve(kde_name, kde_curve(col, cfg.grid_size));
    } else {
      skipped.push_back({{"file", kde_name}, {"reason", "replicates are constant"}});
    }
    const std::string gauss_name = "gauss_" + label + ".csv";
    if (gaussians[j].sigma > 0.0) {
      write_curve(gauss_name, gaussian_pdf_curve(gaussians[j], cfg.grid_size));
    } else {
      skipped.push_back({{"file", gauss_name}, {"reason", "sigma is zero"}});
    }
  }
  return {{"written", written}, {"skipped", skipped}};
}

inline Json config_json(const ExperimentConfig &cfg) {
  Json j = {{"n_qubits", cfg.n_qubits},
            {"N", cfg.N},
            {"K", cfg.K},
            {"B", cfg.B},
            {"alphas", cfg.alphas},
            {"observables", cfg.observables},
            {"gaussian_scaling", scaling_name(cfg.gaussian_scaling)},
            {"bin_count", cfg.bin_count},
            {"grid_size", cfg.grid_size},
            {"coverage", cfg.coverage},
            {"bound_epsilons", cfg.bound_epsilons},
            {"sweep_n", cfg.sweep_n}};
  if (cfg.theta) {
    j["theta"] = *cfg.theta;
  } else {
    j["theta_seed"] = cfg.theta_seed;
  }
  return j;
}

inline Json seeds_json(const ExperimentConfig &cfg) {
  Json j = {{"shadow_seed", cfg.shadow_seed},
            {"bootstrap_seed", cfg.bootstrap_seed}};
  j["theta_seed"] = cfg.theta ? Json(nullptr) : Json(cfg.theta_seed);
  return j;
}

inline Json load_manifest(const fs::path &dir) {
  const fs::path p = dir / "run.json";
  if (!fs::exists(p)) {
    return Json::object();
  }
  std::ifstream in(p);
  return Json::parse(in);
}

inline void save_manifest(const fs::path &dir, Json manifest,
                          const ExperimentConfig &cfg) {
  manifest["tool"] = "shadowboot";
  manifest["config"] = config_json(cfg);
  manifest["config_hash"] = cfg.hash();
  manifest["seeds"] = seeds_json(cfg);
  write_text_file(dir / "run.json",
                  [&](std::ostream &os) { os << manifest.dump(2) << '\n'; });
}

/// Everything downstream of the estimate matrix.
struct Analysis {
  ReplicateSet replicates;
  std::vector<GaussianApprox> gaussians;
  RiskReport risk;
};

inline Json bootstrap_json(const ReplicateSet &rs, const ExperimentConfig &cfg) {
  Json per = Json::array();
  for (std::size_t j = 0; j < rs.M(); ++j) {
    const auto mean_col = rs.mean_replicates.column(j);
    const auto mom_col = rs.mom_replicates.column(j);
    Json o = {{"observable", rs.labels()[j]},
              {"point_mean", rs.point_mean[j]},
              {"point_mom", rs.point_mom[j]},
              {"bias_mean", bootstrap_bias(mean_col, rs.point_mean[j])},
              {"bias_mom", bootstrap_bias(mom_col, rs.point_mom[j])}};
    if (rs.B() >= 2) {
      const auto [lo, hi] = percentile_interval(mom_col, cfg.coverage);
      o["se_mean"] = bootstrap_se(mean_col);
      o["se_mom"] = bootstrap_se(mom_col);
      o["interval_mom"] = {lo, hi};
    } else {
      o["se_mean"] = nullptr;
      o["se_mom"] = nullptr;
      o["interval_mom"] = nullptr;
    }
    per.push_back(o);
  }
  return {{"B", rs.B()}, {"K", cfg.K}, {"coverage", cfg.coverage},
          {"observables", per}};
}

inline Json gaussian_json(std::span<const GaussianApprox> gaussians,
                          const std::vector<std::string> &labels,
                          const ExperimentConfig &cfg) {
  Json params = Json::array();
  for (std::size_t j = 0; j < gaussians.size(); ++j) {
    params.push_back({{"observable", labels[j]},
                      {"mu", gaussians[j].mu},
                      {"sigma", gaussians[j].sigma}});
  }
  return {{"scaling", scaling_name(cfg.gaussian_scaling)}, {"params", params}};
}

/// Risk stage from MoM replicates and the point statistics of `em`.
inline std::pair<std::vector<GaussianApprox>, RiskReport>
risk_stage(const LabeledMatrix &em, const LabeledMatrix &mom,
           const ExperimentConfig &cfg) {
  if (em.labels() != mom.labels()) {
    throw std::invalid_argument("estimates and replicates have different columns");
  }
  const auto observables = observables_from_labels(em.labels());
  const auto [point_mean, point_mom] = point_statistics(em, cfg.K);
  auto gaussians = gaussian_params(observables, point_mean, point_mom, em.rows(), cfg);
  auto report = risk_comparison(mom, gaussians, cfg.alphas);
  return {std::move(gaussians), std::move(report)};
}

inline Analysis analyze(const EstimateMatrix &em, const ExperimentConfig &cfg,
                        const fs::path &dir, const std::string &prov,
                        Json &manifest, std::size_t threads) {
  Analysis a;
  a.replicates =
      bootstrap_replicates(em, {cfg.B, cfg.K, cfg.bootstrap_seed}, threads);
  write_replicates(dir, prov, a.replicates);
  manifest["bootstrap"] = bootstrap_json(a.replicates, cfg);

  std::tie(a.gaussians, a.risk) = risk_stage(em, a.replicates.mom_replicates, cfg);
  write_risk(dir, prov, a.risk);
  manifest["gaussian"] = gaussian_json(a.gaussians, em.labels(), cfg);
  manifest["risk"] = risk_json(a.risk);

  manifest["curves"] =
      write_curves(dir, prov, a.replicates.mom_replicates, a.gaussians, cfg);
  return a;
}

struct RunResult {
  std::vector<PauliObservable> observables;
  std::vector<double> theta;
  std::optional<std::vector<double>> exact;
  EstimateMatrix estimates;
  Analysis analysis;
  std::vector<BoundRow> bounds;
  Json manifest;
};

inline Json bounds_json(const std::vector<BoundRow> &rows, double max_norm_sq,
                        std::size_t M, const ExperimentConfig &cfg) {
  Json r = Json::array();
  for (const auto &b : rows) {
    Json o = {{"N", b.N}, {"K", b.K}, {"epsilon", b.epsilon}, {"delta", b.delta}};
    o["min_error"] = b.min_error ? Json(*b.min_error) : Json(nullptr);
    o["max_error"] = b.max_error ? Json(*b.max_error) : Json(nullptr);
    o["p99_abs_error"] = b.p99_abs_error ? Json(*b.p99_abs_error) : Json(nullptr);
    o["frac_within_epsilon"] = b.frac_within ? Json(*b.frac_within) : Json(nullptr);
    r.push_back(o);
  }
  Json required = Json::array();
  const double delta = implied_delta(M, cfg.K);
  for (double eps : cfg.bound_epsilons) {
    Json o = {{"epsilon", eps},
              {"N", required_K_N(M, std::min(delta, 0.999999), eps, max_norm_sq).N}};
    required.push_back(o);
  }
  return {{"max_shadow_norm_sq", max_norm_sq}, {"rows", r}, {"required_N", required}};
}

inline void finish_bounds(RunResult &res, const ExperimentConfig &cfg,
                          const fs::path &dir, const std::string &prov,
                          std::size_t N) {
  const double max_norm = max_shadow_norm_sq(res.observables);
  res.bounds.insert(res.bounds.begin(),
                    bound_row(N, cfg.K, res.observables.size(), max_norm,
                              res.analysis.replicates.mom_replicates, res.exact));
  std::sort(res.bounds.begin(), res.bounds.end(),
            [](const BoundRow &a, const BoundRow &b) { return a.N < b.N; });
  res.bounds.erase(std::unique(res.bounds.begin(), res.bounds.end(),
                               [](const BoundRow &a, const BoundRow &b) {
                                 return a.N == b.N;
                               }),
                   res.bounds.end());
  write_bounds_csv(dir / "bounds.csv", prov, res.bounds);
  res.manifest["bounds"] = bounds_json(res.bounds, max_norm, res.observables.size(), cfg);
}

/// Full pipeline from a simulated state. Output is a pure function of `cfg`;
/// `threads` only changes speed.
inline RunResult run_experiment(const ExperimentConfig &cfg, const fs::path &dir,
                                std::size_t threads = 0) {
  cfg.validate();
  fs::create_directories(dir);
  const std::string prov = provenance(cfg);

  RunResult res;
  res.manifest = Json::object();
  res.observables = cfg.observable_list();
  res.theta = cfg.theta ? *cfg.theta : draw_theta(cfg.n_qubits, cfg.theta_seed);
  const StateVector state = run_circuit(build_ansatz_circuit(cfg.n_qubits, res.theta));
  res.exact.emplace();
  for (const auto &o : res.observables) {
    res.exact->push_back(exact_expectation(state, o));
  }

  const ShadowSet shadow = sample_shadow(state, cfg.N, cfg.shadow_seed, threads);
  write_text_file(dir / "snapshots.txt",
                  [&](std::ostream &os) { write_snapshots(os, shadow); });
  res.estimates = estimate_matrix(shadow, res.observables, threads);
  write_text_file(dir / "estimates.csv", [&](std::ostream &os) {
    write_matrix_csv(os, prov, res.estimates);
  });

  res.manifest["theta"] = res.theta;
  Json exact = Json::object();
  for (std::size_t j = 0; j < res.observables.size(); ++j) {
    exact[res.observables[j].label()] = (*res.exact)[j];
  }
  res.manifest["exact_expectations"] = exact;
  res.manifest["observables"] = observable_labels(res.observables);
  res.manifest["N"] = cfg.N;

  res.analysis = analyze(res.estimates, cfg, dir, prov, res.manifest, threads);

  // Sweep: snapshot i depends only on (shadow_seed, i), so each sweep shadow
  // extends the shorter ones.
  Json sweep = Json::array();
  const double max_norm = max_shadow_norm_sq(res.observables);
  for (std::size_t n : cfg.sweep_n) {
    const ShadowSet s = sample_shadow(state, n, cfg.shadow_seed, threads);
    const EstimateMatrix em = estimate_matrix(s, res.observables, threads);
    const ReplicateSet rs =
        bootstrap_replicates(em, {cfg.B, cfg.K, cfg.bootstrap_seed}, threads);
    const std::string name = "sweep/replicates_mom_N" + std::to_string(n) + ".csv";
    write_text_file(dir / name, [&](std::ostream &os) {
      write_matrix_csv(os, prov, rs.mom_replicates);
    });
    res.bounds.push_back(bound_row(n, cfg.K, res.observables.size(), max_norm,
                                   rs.mom_replicates, res.exact));
    sweep.push_back({{"N", n}, {"file", name}});
  }
  res.manifest["sweep"] = sweep;

  finish_bounds(res, cfg, dir, prov, cfg.N);
  save_manifest(dir, res.manifest, cfg);
  return res;
}

/// Pipeline from an external snapshot file. There is no known state, so no
/// exact expectations and no bound error columns.
inline RunResult ingest_experiment(ExperimentConfig cfg, const fs::path &snapshots,
                                   const fs::path &dir, std::size_t threads = 0) {
  const ShadowSet shadow = read_snapshots_file(snapshots.string());
  if (shadow.n_qubits != cfg.n_qubits) {
    throw SnapshotFormatError(1,
                              "header n_qubits=" + std::to_string(shadow.n_qubits) +
                                  " does not match config n_qubits=" +
                                  std::to_string(cfg.n_qubits),
                              snapshots.string());
  }
  cfg.N = shadow.size();
  cfg.sweep_n.clear();
  cfg.validate();
  fs::create_directories(dir);
  const std::string prov = provenance(cfg);

  RunResult res;
  res.manifest = Json::object();
  res.observables = cfg.observable_list();
  write_text_file(dir / "snapshots.txt",
                  [&](std::ostream &os) { write_snapshots(os, shadow); });
  res.estimates = estimate_matrix(shadow, res.observables, threads);
  write_text_file(dir / "estimates.csv", [&](std::ostream &os) {
    write_matrix_csv(os, prov, res.estimates);
  });
  res.manifest["source"] = snapshots.string();
  res.manifest["exact_expectations"] = nullptr;
  res.manifest["observables"] = observable_labels(res.observables);
  res.manifest["N"] = cfg.N;
  res.analysis = analyze(res.estimates, cfg, dir, prov, res.manifest, threads);
  finish_bounds(res, cfg, dir, prov, cfg.N);
  save_manifest(dir, res.manifest, cfg);
  return res;
}

// Stage commands on an existing run directory. Each reads estimates.csv from
// `in`, writes its outputs to `out`, and merges its section into run.json.

inline void bootstrap_command(const ExperimentConfig &cfg, const fs::path &in,
                              const fs::path &out, std::size_t threads = 0) {
  const EstimateMatrix em = read_matrix_csv((in / "estimates.csv").string());
  if (cfg.K > em.rows()) {
    throw ConfigError("K", "exceeds the " + std::to_string(em.rows()) +
                               " rows of estimates.csv");
  }
  const std::string prov = provenance(cfg);
  const ReplicateSet rs =
      bootstrap_replicates(em, {cfg.B, cfg.K, cfg.bootstrap_seed}, threads);
  fs::create_directories(out);
  write_replicates(out, prov, rs);
  Json manifest = load_manifest(out);
  manifest["bootstrap"] = bootstrap_json(rs, cfg);
  save_manifest(out, manifest, cfg);
}

inline void risk_command(const ExperimentConfig &cfg, const fs::path &in,
                         const fs::path &out) {
  const EstimateMatrix em = read_matrix_csv((in / "estimates.csv").string());
  const LabeledMatrix mom = read_matrix_csv((in / "replicates_mom.csv").string());
  const std::string prov = provenance(cfg);
  const auto [gaussians, report] = risk_stage(em, mom, cfg);
  fs::create_directories(out);
  write_risk(out, prov, report);
  Json manifest = load_manifest(out);
  manifest["gaussian"] = gaussian_json(gaussians, em.labels(), cfg);
  manifest["risk"] = risk_json(report);
  save_manifest(out, manifest, cfg);
}

inline void report_command(const ExperimentConfig &cfg, const fs::path &in,
                           const fs::path &out) {
  const EstimateMatrix em = read_matrix_csv((in / "estimates.csv").string());
  const LabeledMatrix mom = read_matrix_csv((in / "replicates_mom.csv").string());
  const std::string prov = provenance(cfg);
  const auto [gaussians, report] = risk_stage(em, mom, cfg);
  fs::create_directories(out);
  Json manifest = load_manifest(out);
  manifest["curves"] = write_curves(out, prov, mom, gaussians, cfg);
  save_manifest(out, manifest, cfg);
}

} // namespace shadowboot

#endif // SHADOWBOOT_EXPERIMENT_HPP_
