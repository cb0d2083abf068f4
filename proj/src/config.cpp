#include "yde/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace yde {

using njson = nlohmann::ordered_json;

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += "; ";
    s += v[i];
  }
  return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error("config validation failed: " + join(violations)),
      violations_(std::move(violations)) {}

namespace {

struct Check {
  std::vector<std::string> viol;

  void unknown_keys(const njson& o, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (auto it = o.begin(); it != o.end(); ++it) {
      bool found = false;
      for (const char* k : allowed)
        if (it.key() == k) {
          found = true;
          break;
        }
      if (!found) viol.push_back("unknown key: " + path + it.key());
    }
  }

  double num(const njson& o, const char* key, const std::string& path, double fallback) {
    if (!o.contains(key)) return fallback;
    if (!o[key].is_number()) {
      viol.push_back("not a number: " + path + key);
      return fallback;
    }
    return o[key].get<double>();
  }

  std::int64_t integer(const njson& o, const char* key, const std::string& path,
                       std::int64_t fallback) {
    if (!o.contains(key)) return fallback;
    if (!o[key].is_number_integer()) {
      viol.push_back("not an integer: " + path + key);
      return fallback;
    }
    return o[key].get<std::int64_t>();
  }

  bool boolean(const njson& o, const char* key, const std::string& path, bool fallback) {
    if (!o.contains(key)) return fallback;
    if (!o[key].is_boolean()) {
      viol.push_back("not a boolean: " + path + key);
      return fallback;
    }
    return o[key].get<bool>();
  }

  std::string str(const njson& o, const char* key, const std::string& path,
                  const std::string& fallback) {
    if (!o.contains(key)) return fallback;
    if (!o[key].is_string()) {
      viol.push_back("not a string: " + path + key);
      return fallback;
    }
    return o[key].get<std::string>();
  }

  Matrix matrix(const njson& o, const char* key, const std::string& path, int dim) {
    Matrix m = Matrix::Zero(dim, dim);
    if (!o.contains(key)) return m;
    const njson& a = o[key];
    if (!a.is_array() || static_cast<int>(a.size()) != dim) {
      viol.push_back(path + key + ": expected " + std::to_string(dim) + " rows");
      return m;
    }
    for (int r = 0; r < dim; ++r) {
      const njson& row = a[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != dim) {
        viol.push_back(path + key + ": row " + std::to_string(r) + " needs " +
                       std::to_string(dim) + " entries");
        return m;
      }
      for (int c = 0; c < dim; ++c) {
        const njson& v = row[static_cast<std::size_t>(c)];
        if (!v.is_number()) {
          viol.push_back(path + key + ": non-numeric entry");
          return m;
        }
        m(r, c) = v.get<double>();
      }
    }
    return m;
  }

  void require(bool cond, const std::string& msg) {
    if (!cond) viol.push_back(msg);
  }
};

CoefficientSpec parse_coefficient(Check& ck, const njson& o, const std::string& path, int dim) {
  CoefficientSpec s;
  if (o.is_null()) return s;
  if (!o.is_object()) {
    ck.viol.push_back(path + ": expected an object");
    return s;
  }
  ck.unknown_keys(o, path + ".", {"kind", "value", "mean", "amplitude", "frequency", "phase", "file"});
  s.kind = ck.str(o, "kind", path + ".", "zero");
  s.value = ck.matrix(o, "value", path + ".", dim);
  s.mean = ck.matrix(o, "mean", path + ".", dim);
  s.amplitude = ck.matrix(o, "amplitude", path + ".", dim);
  s.frequency = ck.matrix(o, "frequency", path + ".", dim);
  s.phase = ck.matrix(o, "phase", path + ".", dim);
  s.file = ck.str(o, "file", path + ".", "");
  if (s.kind != "zero" && s.kind != "constant" && s.kind != "periodic" && s.kind != "csv")
    ck.viol.push_back(path + ".kind: must be zero | constant | periodic | csv");
  if (s.kind == "constant") ck.require(o.contains("value"), path + ".value: required for constant");
  if (s.kind == "periodic") ck.require(o.contains("mean"), path + ".mean: required for periodic");
  if (s.kind == "csv") ck.require(!s.file.empty(), path + ".file: required for csv");
  return s;
}

njson coefficient_to_json(const CoefficientSpec& s, int dim) {
  njson o;
  o["kind"] = s.kind;
  auto mat = [dim](const Matrix& m) {
    njson rows = njson::array();
    for (int r = 0; r < dim; ++r) {
      njson row = njson::array();
      for (int c = 0; c < dim; ++c) row.push_back(m(r, c));
      rows.push_back(row);
    }
    return rows;
  };
  if (s.kind == "constant") o["value"] = mat(s.value);
  if (s.kind == "periodic") {
    o["mean"] = mat(s.mean);
    o["amplitude"] = mat(s.amplitude);
    o["frequency"] = mat(s.frequency);
    o["phase"] = mat(s.phase);
  }
  if (s.kind == "csv") o["file"] = s.file;
  return o;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  njson root;
  try {
    root = njson::parse(json_text);
  } catch (const njson::parse_error& e) {
    throw ConfigError({std::string("invalid JSON: ") + e.what()});
  }
  if (!root.is_object()) throw ConfigError({"top level must be an object"});

  Check ck;
  ExperimentConfig cfg;
  ck.unknown_keys(root, "",
                  {"version", "seed", "system", "driver", "numerics", "ensemble", "output"});

  ck.require(root.contains("version"), "version: required");
  cfg.version = static_cast<int>(ck.integer(root, "version", "", 1));
  ck.require(cfg.version == 1, "version: schema version must be 1");
  const std::int64_t seed = ck.integer(root, "seed", "", 1);
  ck.require(seed >= 0, "seed: must be nonnegative");
  cfg.seed = static_cast<std::uint64_t>(seed);

  // system
  if (root.contains("system") && root["system"].is_object()) {
    const njson& sys = root["system"];
    ck.unknown_keys(sys, "system.", {"dimension", "triangular", "a", "c", "integrand"});
    cfg.dimension = static_cast<int>(ck.integer(sys, "dimension", "system.", 1));
    ck.require(cfg.dimension >= 1 && cfg.dimension <= 16,
               "system.dimension: must lie in [1, 16]");
    if (cfg.dimension < 1) cfg.dimension = 1;
    cfg.triangular = ck.boolean(sys, "triangular", "system.", false);
    cfg.a = parse_coefficient(ck, sys.contains("a") ? sys["a"] : njson(), "system.a",
                              cfg.dimension);
    cfg.c = parse_coefficient(ck, sys.contains("c") ? sys["c"] : njson(), "system.c",
                              cfg.dimension);
    cfg.integrand = parse_coefficient(ck, sys.contains("integrand") ? sys["integrand"] : njson(),
                                      "system.integrand", cfg.dimension);
  } else {
    ck.require(root.contains("system"), "system: required");
  }

  // driver
  if (root.contains("driver") && root["driver"].is_object()) {
    const njson& drv = root["driver"];
    ck.unknown_keys(drv, "driver.", {"kind", "hurst", "dt", "horizon", "method", "file"});
    cfg.driver.kind = ck.str(drv, "kind", "driver.", "fbm");
    if (cfg.driver.kind != "fbm" && cfg.driver.kind != "csv" && cfg.driver.kind != "linear" &&
        cfg.driver.kind != "zero")
      ck.viol.push_back("driver.kind: must be fbm | csv | linear | zero");
    cfg.driver.fbm.hurst = ck.num(drv, "hurst", "driver.", 0.7);
    cfg.driver.fbm.dt = ck.num(drv, "dt", "driver.", 1.0 / 128.0);
    cfg.driver.fbm.horizon = ck.num(drv, "horizon", "driver.", 1.0);
    cfg.driver.file = ck.str(drv, "file", "driver.", "");
    const std::string method = ck.str(drv, "method", "driver.", "auto");
    if (method == "auto")
      cfg.driver.fbm.method = FbmMethod::automatic;
    else if (method == "cholesky")
      cfg.driver.fbm.method = FbmMethod::cholesky;
    else if (method == "circulant")
      cfg.driver.fbm.method = FbmMethod::circulant;
    else
      ck.viol.push_back("driver.method: must be auto | cholesky | circulant");
    if (cfg.driver.kind == "fbm") {
      ck.require(cfg.driver.fbm.hurst > 0.5 && cfg.driver.fbm.hurst < 1.0,
                 "driver.hurst: must lie in (0.5, 1)");
      ck.require(cfg.driver.fbm.dt > 0.0, "driver.dt: must be positive");
      ck.require(cfg.driver.fbm.horizon > 0.0, "driver.horizon: must be positive");
    }
    if (cfg.driver.kind == "csv")
      ck.require(!cfg.driver.file.empty(), "driver.file: required for csv");
  } else {
    ck.require(root.contains("driver"), "driver: required");
  }
  cfg.driver.fbm.seed = cfg.seed;

  // numerics
  NumericsSpec& nm = cfg.numerics;
  if (root.contains("numerics") && root["numerics"].is_object()) {
    const njson& n = root["numerics"];
    ck.unknown_keys(n, "numerics.",
                    {"p", "q", "mu", "tol", "max_iterations", "cells_per_unit", "h", "horizon",
                     "t_max", "window", "x0", "method", "reorth_every", "tail_fraction",
                     "mean_tol", "threshold"});
    nm.p = ck.num(n, "p", "numerics.", nm.p);
    nm.q = ck.num(n, "q", "numerics.", nm.q);
    nm.mu = ck.num(n, "mu", "numerics.", nm.mu);
    nm.tol = ck.num(n, "tol", "numerics.", nm.tol);
    nm.max_iterations = static_cast<int>(ck.integer(n, "max_iterations", "numerics.", 200));
    nm.cells_per_unit = static_cast<int>(ck.integer(n, "cells_per_unit", "numerics.", 128));
    nm.h = ck.num(n, "h", "numerics.", 1.0);
    nm.horizon = ck.num(n, "horizon", "numerics.", 1.0);
    nm.t_max = ck.num(n, "t_max", "numerics.", 0.0);
    nm.method = ck.str(n, "method", "numerics.", "qr");
    nm.reorth_every = static_cast<int>(ck.integer(n, "reorth_every", "numerics.", 10));
    nm.tail_fraction = ck.num(n, "tail_fraction", "numerics.", 0.2);
    nm.mean_tol = ck.num(n, "mean_tol", "numerics.", 0.02);
    nm.threshold = ck.num(n, "threshold", "numerics.", 0.0);
    if (n.contains("window")) {
      const njson& w = n["window"];
      if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
        ck.viol.push_back("numerics.window: expected [a, b]");
      } else {
        nm.window_set = true;
        nm.window_a = w[0].get<double>();
        nm.window_b = w[1].get<double>();
        ck.require(nm.window_a < nm.window_b, "numerics.window: need a < b");
      }
    }
    if (n.contains("x0")) {
      const njson& x = n["x0"];
      if (!x.is_array()) {
        ck.viol.push_back("numerics.x0: expected an array");
      } else {
        for (const auto& v : x) {
          if (!v.is_number()) {
            ck.viol.push_back("numerics.x0: non-numeric entry");
            break;
          }
          nm.x0.push_back(v.get<double>());
        }
        ck.require(nm.x0.size() == static_cast<std::size_t>(cfg.dimension),
                   "numerics.x0: needs exactly system.dimension entries");
      }
    }
  }
  ck.require(nm.p > 1.0 && nm.p < 2.0, "numerics.p: must lie in (1, 2)");
  ck.require(nm.q >= nm.p, "numerics.q: must satisfy q >= p");
  if (nm.p > 1.0 && nm.q > 0.0)
    ck.require(1.0 / nm.p + 1.0 / nm.q > 1.0, "numerics: 1/p + 1/q must exceed 1");
  ck.require(nm.mu >= 0.0 && nm.mu < 1.0, "numerics.mu: must lie in [0, 1)");
  ck.require(nm.tol > 0.0, "numerics.tol: must be positive");
  ck.require(nm.max_iterations >= 1, "numerics.max_iterations: must be >= 1");
  ck.require(nm.cells_per_unit >= 1 && nm.cells_per_unit <= 65536,
             "numerics.cells_per_unit: must lie in [1, 65536]");
  ck.require(nm.h > 0.0, "numerics.h: must be positive");
  ck.require(nm.horizon > 0.0, "numerics.horizon: must be positive");
  ck.require(nm.t_max >= 0.0, "numerics.t_max: must be nonnegative");
  ck.require(nm.method == "qr" || nm.method == "svd", "numerics.method: must be qr | svd");
  ck.require(nm.reorth_every >= 1, "numerics.reorth_every: must be >= 1");
  ck.require(nm.tail_fraction > 0.0 && nm.tail_fraction <= 1.0,
             "numerics.tail_fraction: must lie in (0, 1]");
  ck.require(nm.mean_tol > 0.0, "numerics.mean_tol: must be positive");
  ck.require(nm.threshold >= 0.0, "numerics.threshold: must be nonnegative");

  // ensemble
  if (root.contains("ensemble") && root["ensemble"].is_object()) {
    const njson& e = root["ensemble"];
    ck.unknown_keys(e, "ensemble.", {"members", "sub_steps"});
    cfg.ensemble.members = static_cast<int>(ck.integer(e, "members", "ensemble.", 100));
    cfg.ensemble.sub_steps = static_cast<int>(ck.integer(e, "sub_steps", "ensemble.", 16));
  }
  ck.require(cfg.ensemble.members >= 2, "ensemble.members: must be >= 2");
  ck.require(cfg.ensemble.sub_steps >= 1, "ensemble.sub_steps: must be >= 1");

  // output
  if (root.contains("output") && root["output"].is_object()) {
    const njson& o = root["output"];
    ck.unknown_keys(o, "output.", {"dir", "prefix"});
    cfg.output.dir = ck.str(o, "dir", "output.", ".");
    cfg.output.prefix = ck.str(o, "prefix", "output.", "run");
  }
  ck.require(!cfg.output.prefix.empty(), "output.prefix: must not be empty");

  if (!ck.viol.empty()) throw ConfigError(std::move(ck.viol));
  return cfg;
}

ExperimentConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError({"cannot open config file: " + file});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  njson root;
  root["version"] = cfg.version;
  root["seed"] = cfg.seed;
  njson sys;
  sys["dimension"] = cfg.dimension;
  sys["triangular"] = cfg.triangular;
  sys["a"] = coefficient_to_json(cfg.a, cfg.dimension);
  sys["c"] = coefficient_to_json(cfg.c, cfg.dimension);
  sys["integrand"] = coefficient_to_json(cfg.integrand, cfg.dimension);
  root["system"] = sys;
  njson drv;
  drv["kind"] = cfg.driver.kind;
  if (cfg.driver.kind == "fbm") {
    drv["hurst"] = cfg.driver.fbm.hurst;
    drv["dt"] = cfg.driver.fbm.dt;
    drv["horizon"] = cfg.driver.fbm.horizon;
    drv["method"] = cfg.driver.fbm.method == FbmMethod::automatic    ? "auto"
                    : cfg.driver.fbm.method == FbmMethod::cholesky   ? "cholesky"
                                                                     : "circulant";
  }
  if (cfg.driver.kind == "csv") drv["file"] = cfg.driver.file;
  root["driver"] = drv;
  njson n;
  n["p"] = cfg.numerics.p;
  n["q"] = cfg.numerics.q;
  n["mu"] = cfg.numerics.mu;
  n["tol"] = cfg.numerics.tol;
  n["max_iterations"] = cfg.numerics.max_iterations;
  n["cells_per_unit"] = cfg.numerics.cells_per_unit;
  n["h"] = cfg.numerics.h;
  n["horizon"] = cfg.numerics.horizon;
  n["t_max"] = cfg.numerics.t_max;
  if (cfg.numerics.window_set) n["window"] = njson::array({cfg.numerics.window_a, cfg.numerics.window_b});
  if (!cfg.numerics.x0.empty()) n["x0"] = cfg.numerics.x0;
  n["method"] = cfg.numerics.method;
  n["reorth_every"] = cfg.numerics.reorth_every;
  n["tail_fraction"] = cfg.numerics.tail_fraction;
  n["mean_tol"] = cfg.numerics.mean_tol;
  n["threshold"] = cfg.numerics.threshold;
  root["numerics"] = n;
  njson e;
  e["members"] = cfg.ensemble.members;
  e["sub_steps"] = cfg.ensemble.sub_steps;
  root["ensemble"] = e;
  njson o;
  o["dir"] = cfg.output.dir;
  o["prefix"] = cfg.output.prefix;
  root["output"] = o;
  return root.dump(2) + "\n";
}

SampledPath build_driver(const ExperimentConfig& cfg, const Interval& span) {
  if (cfg.driver.kind == "fbm") {
    if (span.a < -1e-9 || span.b > cfg.driver.fbm.horizon + 1e-9)
      throw ConfigError({"driver.horizon: fbm driver does not cover the requested span [" +
                         std::to_string(span.a) + ", " + std::to_string(span.b) + "]"});
    return fbm_sample(cfg.driver.fbm);
  }
  if (cfg.driver.kind == "csv") {
    SampledPath w = read_path_csv(cfg.driver.file);
    if (!w.is_scalar()) throw ConfigError({"driver.file: driver path must be scalar"});
    if (w.span().a > span.a + 1e-9 || w.span().b + 1e-9 < span.b)
      throw ConfigError({"driver.file: csv driver does not cover the requested span"});
    return w;
  }
  const double len = span.b - span.a;
  const auto cells = static_cast<std::size_t>(
      std::max<double>(1.0, std::ceil(len * cfg.numerics.cells_per_unit - 1e-9)));
  const std::vector<double> ts = uniform_times(span.a, span.b, cells);
  if (cfg.driver.kind == "linear") return SampledPath::time_path(ts);
  return SampledPath::constant(ts, Matrix::Zero(1, 1));  // zero driver
}

SampledPath build_coefficient(const CoefficientSpec& spec, int dim,
                              const std::vector<double>& grid) {
  if (spec.kind == "csv") {
    SampledPath m = read_path_csv(spec.file, dim, dim);
    if (m.span().a > grid.front() + 1e-9 || m.span().b + 1e-9 < grid.back())
      throw ConfigError({"coefficient csv does not cover the driver span: " + spec.file});
    return m;
  }
  if (spec.kind == "zero") return SampledPath::constant(grid, Matrix::Zero(dim, dim));
  if (spec.kind == "constant") return SampledPath::constant(grid, spec.value);
  // periodic
  const double two_pi = 6.283185307179586476925286766559;
  return SampledPath::sample(grid, [&](double t) {
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        m(r, c) = spec.mean(r, c) +
                  spec.amplitude(r, c) * std::sin(two_pi * spec.frequency(r, c) * t + spec.phase(r, c));
    return m;
  });
}

LinearYDE build_system(const ExperimentConfig& cfg, const SampledPath& driver) {
  const std::vector<double>& grid = driver.times();
  SampledPath a = build_coefficient(cfg.a, cfg.dimension, grid);
  SampledPath c = build_coefficient(cfg.c, cfg.dimension, grid);
  if (!a.same_grid(c)) {
    const auto [am, cm] = merge_grids(a, c);
    return LinearYDE(am, cm, YoungParams(cfg.numerics.p, cfg.numerics.q));
  }
  return LinearYDE(std::move(a), std::move(c), YoungParams(cfg.numerics.p, cfg.numerics.q));
}

}  // namespace yde
