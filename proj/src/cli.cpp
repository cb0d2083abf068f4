#include "yde/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "yde/config.hpp"
#include "yde/flow.hpp"
#include "yde/lyapunov.hpp"
#include "yde/reports.hpp"
#include "yde/seminorm.hpp"
#include "yde/stochastic.hpp"
#include "yde/triangular.hpp"
#include "yde/young.hpp"

namespace yde {

namespace {

using njson = nlohmann::ordered_json;

struct GlobalOpts {
  std::string config;
  std::string out;
  std::int64_t seed = -1;
  int threads = 0;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void log_line(const std::string& msg) { std::cerr << "[yde] " << msg << "\n"; }

ExperimentConfig load_with_overrides(const GlobalOpts& g) {
  ExperimentConfig cfg = load_config(g.config);
  if (g.seed >= 0) {
    cfg.seed = static_cast<std::uint64_t>(g.seed);
    cfg.driver.fbm.seed = cfg.seed;
  }
  // --out beats the config; the environment default fills in only when the
  // config left the directory at ".".
  if (!g.out.empty()) {
    cfg.output.dir = g.out;
  } else if (cfg.output.dir == ".") {
    if (const char* env = std::getenv("YDE_OUT_DIR"); env && *env) cfg.output.dir = env;
  }
  std::filesystem::create_directories(cfg.output.dir);
  return cfg;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& suffix) {
  return cfg.output.dir + "/" + cfg.output.prefix + suffix;
}

void emit(const ExperimentConfig& cfg, const std::string& suffix, const std::string& content,
          bool also_stdout) {
  const std::string path = out_path(cfg, suffix);
  write_text(path, content);
  log_line("wrote " + path);
  if (also_stdout) std::cout << content;
}

Interval solve_window(const ExperimentConfig& cfg) {
  if (cfg.numerics.window_set) return {cfg.numerics.window_a, cfg.numerics.window_b};
  return {0.0, cfg.numerics.horizon};
}

Matrix x0_of(const ExperimentConfig& cfg) {
  Matrix x0 = Matrix::Zero(cfg.dimension, 1);
  if (cfg.numerics.x0.empty()) {
    x0(0, 0) = 1.0;
  } else {
    for (int i = 0; i < cfg.dimension; ++i) x0(i, 0) = cfg.numerics.x0[static_cast<std::size_t>(i)];
  }
  return x0;
}

SolverOptions solver_options(const ExperimentConfig& cfg) {
  SolverOptions o;
  o.mu = cfg.numerics.mu;
  o.tol = cfg.numerics.tol;
  o.max_iterations = cfg.numerics.max_iterations;
  return o;
}

SpectrumOptions spectrum_options(const ExperimentConfig& cfg) {
  SpectrumOptions o;
  o.h = cfg.numerics.h;
  o.method = cfg.numerics.method == "svd" ? SpectrumMethod::svd : SpectrumMethod::qr;
  o.reorth_every = cfg.numerics.reorth_every;
  o.tail_fraction = cfg.numerics.tail_fraction;
  o.solver = solver_options(cfg);
  return o;
}

TriangularYDE triangular_system(const ExperimentConfig& cfg, const SampledPath& driver) {
  if (!cfg.triangular)
    throw ConfigError({"system.triangular: this command requires a triangular system"});
  const LinearYDE eq = build_system(cfg, driver);
  return TriangularYDE(eq.A, eq.C, eq.params);
}

int cmd_integrate(const ExperimentConfig& cfg) {
  const Interval w = solve_window(cfg);
  const SampledPath driver = build_driver(cfg, w);
  const SampledPath x = build_coefficient(cfg.integrand, cfg.dimension, driver.times());
  const auto [xm, wm] = merge_grids(x, driver);
  const YoungParams params(cfg.numerics.p, cfg.numerics.q);
  const Matrix value = young_integral(xm, wm, w);
  const double bound = young_loeve_defect_bound(xm, wm, params, w);

  njson j;
  njson rows = njson::array();
  for (Eigen::Index r = 0; r < value.rows(); ++r) {
    njson row = njson::array();
    for (Eigen::Index c = 0; c < value.cols(); ++c) row.push_back(value(r, c));
    rows.push_back(row);
  }
  j["integral"] = rows;
  j["young_loeve_bound"] = bound;
  j["x_qvar"] = p_variation_seminorm(xm, params.q, w);
  j["omega_pvar"] = p_variation_seminorm(wm, params.p, w);
  j["K"] = params.K();
  j["window"] = njson::array({w.a, w.b});
  emit(cfg, "_integrate.json", j.dump(2) + "\n", true);
  return 0;
}

int cmd_solve(const ExperimentConfig& cfg) {
  const Interval w = solve_window(cfg);
  const SampledPath driver = build_driver(cfg, w);
  const LinearYDE eq = build_system(cfg, driver);
  const SolveReport rep = picard_solve(eq, x0_of(cfg), driver, w, solver_options(cfg));
  write_path_csv(rep.solution, out_path(cfg, "_solution.csv"));
  log_line("wrote " + out_path(cfg, "_solution.csv"));
  emit(cfg, "_solve.json", to_json(rep), true);
  return 0;
}

int cmd_spectrum(const ExperimentConfig& cfg) {
  const Interval span{0.0, cfg.numerics.horizon};
  const SampledPath driver = build_driver(cfg, span);
  const LinearYDE eq = build_system(cfg, driver);
  const SpectrumEstimate est =
      discrete_spectrum(eq, driver, 0.0, cfg.numerics.horizon, spectrum_options(cfg));
  write_exponent_series_csv(est.series, out_path(cfg, "_series.csv"));
  log_line("wrote " + out_path(cfg, "_series.csv"));
  emit(cfg, "_spectrum.json", to_json(est), true);
  return 0;
}

int cmd_oracle(const ExperimentConfig& cfg) {
  const double t_max =
      cfg.numerics.t_max > 0.0 ? cfg.numerics.t_max : 2.0 * cfg.numerics.horizon;
  const SampledPath driver = build_driver(cfg, {0.0, t_max});
  const TriangularYDE tri = triangular_system(cfg, driver);
  const TriangularSpectrum oracle =
      triangular_spectrum(tri, {0.0, cfg.numerics.horizon}, cfg.numerics.mean_tol);
  const SpectrumEstimate numeric = discrete_spectrum(tri.as_linear(), driver, 0.0,
                                                     cfg.numerics.horizon, spectrum_options(cfg));

  njson j;
  j["oracle"] = njson::parse(to_json(oracle));
  j["numeric"] = njson::parse(to_json(numeric));
  njson table = njson::array();
  double max_diff = 0.0;
  for (std::size_t k = 0; k < oracle.lambdas.size(); ++k) {
    const double a = numeric.lambdas[k];
    const double b = oracle.lambdas[k];
    const double diff = std::abs(a - b);
    max_diff = std::max(max_diff, diff);
    njson row;
    row["k"] = k + 1;
    row["lambda_numeric"] = a;
    row["abar_sorted"] = b;
    row["abs_diff"] = diff;
    table.push_back(row);
  }
  j["agreement"] = table;
  j["max_abs_diff"] = max_diff;
  emit(cfg, "_oracle.json", j.dump(2) + "\n", true);
  return 0;
}

int cmd_regularity(const ExperimentConfig& cfg) {
  const Interval span{0.0, cfg.numerics.horizon};
  const SampledPath driver = build_driver(cfg, span);
  const LinearYDE eq = build_system(cfg, driver);
  const RegularityReport rep = nonregularity(eq, driver, 0.0, cfg.numerics.horizon,
                                             spectrum_options(cfg), cfg.numerics.threshold);
  emit(cfg, "_regularity.json", to_json(rep), true);
  return 0;
}

int cmd_assumptions(const ExperimentConfig& cfg) {
  const Interval span{0.0, cfg.numerics.horizon};
  const SampledPath driver = build_driver(cfg, span);
  const LinearYDE eq = build_system(cfg, driver);
  std::vector<SampledPath> c_diag;
  for (int k = 0; k < cfg.dimension; ++k) c_diag.push_back(component(eq.C, k, k));
  const AssumptionReport rep =
      check_assumptions(driver, c_diag, cfg.numerics.p, cfg.numerics.horizon);

  // Plot-ready series next to the JSON verdicts.
  std::string csv = "n,h3,gamma_running";
  for (int k = 1; k <= cfg.dimension; ++k) csv += ",h4_" + std::to_string(k);
  csv += "\n";
  for (std::size_t i = 0; i < rep.n.size(); ++i) {
    csv += fmt17(rep.n[i]) + "," + fmt17(rep.h3[i]) + "," + fmt17(rep.gamma_running[i]);
    for (const auto& h4 : rep.h4) csv += "," + fmt17(h4[i]);
    csv += "\n";
  }
  write_text(out_path(cfg, "_assumptions.csv"), csv);
  log_line("wrote " + out_path(cfg, "_assumptions.csv"));
  emit(cfg, "_assumptions.json", to_json(rep), true);
  return 0;
}

int cmd_ensemble(const ExperimentConfig& cfg) {
  if (cfg.driver.kind != "fbm")
    throw ConfigError({"driver.kind: ensemble requires the fbm driver"});
  if (cfg.driver.fbm.horizon + 1e-9 < cfg.numerics.horizon)
    throw ConfigError({"driver.horizon: must cover numerics.horizon for ensembles"});
  const std::vector<double> grid =
      uniform_times(0.0, cfg.driver.fbm.horizon,
                    static_cast<std::size_t>(std::llround(cfg.driver.fbm.horizon / cfg.driver.fbm.dt)));
  const SampledPath a = build_coefficient(cfg.a, cfg.dimension, grid);
  const SampledPath c = build_coefficient(cfg.c, cfg.dimension, grid);
  const LinearYDE eq(a, c, YoungParams(cfg.numerics.p, cfg.numerics.q));
  const EnsembleSpectrum ens = ensemble_spectrum(eq, cfg.driver.fbm, cfg.ensemble.members,
                                                 cfg.numerics.horizon, spectrum_options(cfg));

  std::string manifest = "member,seed,status";
  for (int k = 1; k <= cfg.dimension; ++k) manifest += ",lambda_" + std::to_string(k);
  manifest += "\n";
  for (int i = 0; i < cfg.ensemble.members; ++i) {
    const bool failed = std::find(ens.failed_members.begin(), ens.failed_members.end(), i) !=
                        ens.failed_members.end();
    manifest += std::to_string(i) + "," +
                std::to_string(member_seed(cfg.seed, static_cast<std::uint64_t>(i))) + "," +
                (failed ? "failed" : "ok");
    for (int k = 0; k < cfg.dimension; ++k)
      manifest += "," + (failed ? std::string("nan")
                                : fmt17(ens.lambdas[static_cast<std::size_t>(i)]
                                                   [static_cast<std::size_t>(k)]));
    manifest += "\n";
  }
  write_text(out_path(cfg, "_manifest.csv"), manifest);
  log_line("wrote " + out_path(cfg, "_manifest.csv"));
  emit(cfg, "_ensemble.json", to_json(ens), true);
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Linear Young differential equations: solves, flows, Lyapunov spectra"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--config", g.config, "Experiment config (JSON)")->required();
  app.add_option("--out", g.out, "Output directory (overrides config)");
  app.add_option("--seed", g.seed, "Seed override");
  app.add_option("--threads", g.threads, "OpenMP thread cap (0 = default)");

  auto* c_integrate = app.add_subcommand("integrate", "Young integral of the configured integrand");
  auto* c_solve = app.add_subcommand("solve", "Picard solve over the window");
  auto* c_spectrum = app.add_subcommand("spectrum", "Discrete-step Lyapunov spectrum");
  auto* c_oracle = app.add_subcommand("oracle", "Triangular spectrum vs numeric spectrum");
  auto* c_regularity = app.add_subcommand("regularity", "Forward/adjoint regularity report");
  auto* c_assumptions = app.add_subcommand("assumptions", "Driver assumption series");
  auto* c_ensemble = app.add_subcommand("ensemble", "Ensemble spectrum across seeds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (g.threads > 0) {
#ifdef _OPENMP
    omp_set_num_threads(g.threads);
#else
    log_line("built without OpenMP; --threads ignored");
#endif
  }

  try {
    const ExperimentConfig cfg = load_with_overrides(g);
    if (c_integrate->parsed()) return cmd_integrate(cfg);
    if (c_solve->parsed()) return cmd_solve(cfg);
    if (c_spectrum->parsed()) return cmd_spectrum(cfg);
    if (c_oracle->parsed()) return cmd_oracle(cfg);
    if (c_regularity->parsed()) return cmd_regularity(cfg);
    if (c_assumptions->parsed()) return cmd_assumptions(cfg);
    if (c_ensemble->parsed()) return cmd_ensemble(cfg);
    return 1;
  } catch (const ConfigError& e) {
    njson err;
    err["error"] = "config";
    njson v = njson::array();
    for (const auto& s : e.violations()) v.push_back(s);
    err["violations"] = v;
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    njson err;
    err["error"] = "runtime";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
}

}  // namespace yde
