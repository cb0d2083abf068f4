#include "yde/reports.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace yde {

using njson = nlohmann::ordered_json;

namespace {

njson num_list(const std::vector<double>& v) {
  njson a = njson::array();
  for (double x : v) a.push_back(x);
  return a;
}

njson bool_list(const std::vector<bool>& v) {
  njson a = njson::array();
  for (bool x : v) a.push_back(x);
  return a;
}

njson matrix_json(const Matrix& m) {
  njson rows = njson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    njson row = njson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

std::string dump(const njson& j) { return j.dump(2) + "\n"; }

void fmt17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

std::string to_json(const SolveReport& rep) {
  njson j;
  j["tau"] = num_list(rep.tau);
  njson its = njson::array();
  for (int i : rep.iterations) its.push_back(i);
  j["iterations"] = its;
  j["mu"] = rep.mu;
  j["m_star"] = rep.m_star;
  j["budget"] = rep.budget;
  j["omega_pvar"] = rep.omega_pvar;
  j["sup_norm"] = rep.sup_norm;
  j["pvar_norm"] = rep.pvar_norm;
  j["growth_bound"] = rep.growth_bound;
  j["pvar_bound"] = rep.pvar_bound;
  return dump(j);
}

std::string to_json(const SpectrumEstimate& est) {
  njson j;
  j["lambdas"] = num_list(est.lambdas);
  j["dispersion"] = num_list(est.dispersion);
  j["method"] = est.method == SpectrumMethod::qr ? "qr" : "svd";
  j["t0"] = est.t0;
  j["horizon"] = est.horizon;
  j["h"] = est.h;
  j["tail_window"] = est.tail_window;
  j["sum_rule_defect"] = est.sum_rule_defect;
  j["flag_basis"] = matrix_json(est.flag_basis);
  j["checkpoints"] = est.series.times.size();
  return dump(j);
}

std::string to_json(const RegularityReport& rep) {
  njson j;
  j["lambdas"] = num_list(rep.lambdas);
  j["adjoint_lambdas"] = num_list(rep.adjoint_lambdas);
  j["perron_defects"] = num_list(rep.perron_defects);
  j["sigma"] = rep.sigma;
  j["threshold"] = rep.threshold;
  j["regular"] = rep.regular;
  return dump(j);
}

std::string to_json(const AssumptionReport& rep) {
  njson j;
  j["n"] = num_list(rep.n);
  j["h3"] = num_list(rep.h3);
  j["gamma_running"] = num_list(rep.gamma_running);
  j["gamma_p"] = rep.gamma_p;
  njson h4 = njson::array();
  for (const auto& s : rep.h4) h4.push_back(num_list(s));
  j["h4"] = h4;
  j["h3_decaying"] = rep.h3_decaying;
  j["h4_decaying"] = rep.h4_decaying;
  j["h3_slope"] = rep.h3_slope;
  j["h4_slopes"] = num_list(rep.h4_slopes);
  return dump(j);
}

std::string to_json(const EnsembleSpectrum& ens) {
  njson j;
  j["members"] = ens.lambdas.size();
  j["mean"] = num_list(ens.mean);
  j["variance"] = num_list(ens.variance);
  njson mom = njson::array();
  for (const auto& m : ens.abs_moments) mom.push_back(num_list(m));
  j["abs_moments"] = mom;
  j["bound"] = ens.bound;
  j["mean_gamma_p"] = ens.mean_gamma_p;
  njson ex = njson::array();
  for (int e : ens.exceed_count) ex.push_back(e);
  j["exceed_count"] = ex;
  njson fm = njson::array();
  for (int f : ens.failed_members) fm.push_back(f);
  j["failed_members"] = fm;
  j["flagged"] = ens.flagged;
  njson lam = njson::array();
  for (const auto& l : ens.lambdas) lam.push_back(num_list(l));
  j["lambdas"] = lam;
  return dump(j);
}

std::string to_json(const IntegrabilityStat& stat) {
  njson j;
  j["stat_fwd"] = stat.stat_fwd;
  j["stat_inv"] = stat.stat_inv;
  j["bound"] = stat.bound;
  j["h_hat"] = stat.h_hat;
  j["mu"] = stat.mu;
  j["members"] = stat.members;
  j["failures"] = stat.failures;
  j["sup_fwd"] = num_list(stat.sup_fwd);
  j["sup_inv"] = num_list(stat.sup_inv);
  return dump(j);
}

std::string to_json(const MomentProbe& probe) {
  njson j;
  njson rows = njson::array();
  for (const auto& r : probe.rows) {
    njson row;
    row["window"] = njson::array({r.window.a, r.window.b});
    row["mean"] = r.mean;
    row["std_error"] = r.std_error;
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["fitted_slope"] = probe.fitted_slope;
  j["expected_slope"] = probe.expected_slope;
  j["slope_ok"] = probe.slope_ok;
  j["monotone_ok"] = probe.monotone_ok;
  return dump(j);
}

std::string to_json(const TriangularSpectrum& spec) {
  njson j;
  j["lambdas"] = num_list(spec.lambdas);
  j["abar"] = num_list(spec.abar);
  j["exact"] = bool_list(spec.exact);
  j["all_exact"] = spec.all_exact;
  return dump(j);
}

std::string to_json(const DiagonalMeans& means) {
  njson j;
  j["times"] = num_list(means.times);
  njson ser = njson::array();
  for (const auto& s : means.series) ser.push_back(num_list(s));
  j["series"] = ser;
  j["finals"] = num_list(means.finals);
  j["exact"] = bool_list(means.exact);
  j["tol"] = means.tol;
  return dump(j);
}

void write_exponent_series_csv(const ExponentSeries& series, const std::string& file) {
  std::string out = "t";
  for (int k = 1; k <= series.dim; ++k) out += ",lambda_" + std::to_string(k);
  out += ",logdet_rate\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    fmt17(out, series.times[i]);
    for (double v : series.lambdas[i]) {
      out += ",";
      fmt17(out, v);
    }
    out += ",";
    fmt17(out, series.logdet_rate[i]);
    out += "\n";
  }
  write_text(file, out);
}

void write_text(const std::string& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + file);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + file);
}

}  // namespace yde
