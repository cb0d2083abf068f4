#include "yde/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "yde/flow.hpp"
#include "yde/seminorm.hpp"
#include "yde/young.hpp"

namespace yde {

namespace {

// Least-squares slope of log y against log x over positive entries; pairs
// with y = 0 are skipped, an all-zero tail counts as fully decayed.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, bool* all_zero) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (all_zero) *all_zero = (m == 0);
  if (m < 2) return 0.0;
  const double det = m * sxx - sx * sx;
  return det == 0.0 ? 0.0 : (m * sxy - sx * sy) / det;
}

std::vector<double> tail_half(const std::vector<double>& v) {
  return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
}

}  // namespace

AssumptionReport check_assumptions(const SampledPath& omega,
                                   const std::vector<SampledPath>& c_diag, double p,
                                   double horizon) {
  if (!omega.is_scalar()) throw std::invalid_argument("check_assumptions: scalar driver required");
  const Interval sp = omega.span();
  if (sp.a > 1e-9 || sp.b + 1e-9 < horizon)
    throw std::invalid_argument("check_assumptions: omega must span [0, horizon]");
  const int units = static_cast<int>(std::floor(horizon + 1e-9));
  if (units < 3) throw std::invalid_argument("check_assumptions: horizon of >= 3 units required");

  AssumptionReport rep;
  SeminormCache cache;
  std::vector<double> unit_pow(static_cast<std::size_t>(units));
  for (int k = 0; k < units; ++k) {
    const double w = p_variation_seminorm(omega, p, {static_cast<double>(k), k + 1.0}, &cache);
    unit_pow[static_cast<std::size_t>(k)] = std::pow(w, p);
  }

  // Series stop at units - 1 so the (H3) window [n, n+1] stays inside the span.
  double run = 0.0;
  for (int n = 1; n < units; ++n) {
    run += unit_pow[static_cast<std::size_t>(n - 1)];
    rep.n.push_back(static_cast<double>(n));
    rep.gamma_running.push_back(run / n);
    rep.h3.push_back(unit_pow[static_cast<std::size_t>(n)] / n);
  }
  rep.gamma_p = rep.gamma_running.back();

  for (const SampledPath& c : c_diag) {
    if (!c.is_scalar()) throw std::invalid_argument("check_assumptions: diagonal entries are scalar");
    const auto [cm, wm] = merge_grids(c, omega);
    const SampledPath integral = young_integral_path(cm, wm, {sp.a, sp.b});
    std::vector<double> series;
    for (int n = 1; n < units; ++n)
      series.push_back(std::abs(integral.value1(nearest_node(integral, static_cast<double>(n)))) / n);
    rep.h4.push_back(std::move(series));
  }

  bool zero3 = false;
  rep.h3_slope = loglog_slope(tail_half(rep.n), tail_half(rep.h3), &zero3);
  rep.h3_decaying = zero3 || rep.h3_slope < -0.3;
  rep.h4_decaying = true;
  for (const auto& s : rep.h4) {
    bool zero4 = false;
    const double sl = loglog_slope(tail_half(rep.n), tail_half(s), &zero4);
    rep.h4_slopes.push_back(sl);
    if (!zero4 && !(sl < 0.0)) rep.h4_decaying = false;
  }
  return rep;
}

double gamma_p(const SampledPath& omega, double p, int n) {
  if (n < 1) throw std::invalid_argument("gamma_p: n >= 1 required");
  const Interval sp = omega.span();
  if (sp.a > 1e-9 || sp.b + 1e-9 < static_cast<double>(n))
    throw std::invalid_argument("gamma_p: omega must span [0, n]");
  SeminormCache cache;
  double run = 0.0;
  for (int k = 0; k < n; ++k)
    run += std::pow(p_variation_seminorm(omega, p, {static_cast<double>(k), k + 1.0}, &cache), p);
  return run / n;
}

MomentProbe moment_bound_probe(const FbmSpec& spec, double p, double r,
                               const std::vector<Interval>& windows, int n_samples) {
  if (!(r >= 1.0)) throw std::invalid_argument("moment_bound_probe: r >= 1 required");
  if (n_samples < 2) throw std::invalid_argument("moment_bound_probe: n_samples >= 2 required");
  if (spec.horizon < 1.0 - 1e-12)
    throw std::invalid_argument("moment_bound_probe: fBm horizon must cover [0, 1]");
  for (const Interval& w : windows)
    if (w.a < -1e-12 || w.b > 1.0 + 1e-12)
      throw std::invalid_argument("moment_bound_probe: windows must lie in [0, 1]");

  const std::size_t nw = windows.size();
  // Per-member values first, reduced in index order afterwards: the sums must
  // not depend on thread interleaving.
  std::vector<std::vector<double>> vals(static_cast<std::size_t>(n_samples),
                                        std::vector<double>(nw, 0.0));
  std::string fail;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_samples; ++i) {
    try {
      FbmSpec s = spec;
      s.seed = member_seed(spec.seed, static_cast<std::uint64_t>(i));
      const SampledPath z = fbm_sample(s);
      for (std::size_t wi = 0; wi < nw; ++wi) {
        const double v =
            windows[wi].length() == 0.0 ? 0.0 : p_variation_seminorm(z, p, windows[wi]);
        vals[static_cast<std::size_t>(i)][wi] = std::pow(v, r);
      }
    } catch (const std::exception& e) {
#pragma omp critical
      if (fail.empty()) fail = e.what();
    }
  }
  if (!fail.empty()) throw std::runtime_error("moment_bound_probe: " + fail);
  std::vector<double> sum(nw, 0.0), sumsq(nw, 0.0);
  for (int i = 0; i < n_samples; ++i)
    for (std::size_t wi = 0; wi < nw; ++wi) {
      const double vr = vals[static_cast<std::size_t>(i)][wi];
      sum[wi] += vr;
      sumsq[wi] += vr * vr;
    }

  MomentProbe out;
  out.expected_slope = spec.hurst * r;
  std::vector<double> lens, means;
  for (std::size_t wi = 0; wi < nw; ++wi) {
    const double m = sum[wi] / n_samples;
    const double var = std::max(0.0, sumsq[wi] / n_samples - m * m);
    out.rows.push_back({windows[wi], m, std::sqrt(var / n_samples)});
    if (windows[wi].length() > 0.0) {
      lens.push_back(windows[wi].length());
      means.push_back(m);
    }
  }
  out.fitted_slope = loglog_slope(lens, means, nullptr);
  out.slope_ok = out.fitted_slope >= out.expected_slope - 0.15;

  // Sorted by length, the mean may not drop by more than two standard errors.
  std::vector<std::size_t> order(nw);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return windows[a].length() < windows[b].length();
  });
  out.monotone_ok = true;
  for (std::size_t k = 1; k < nw; ++k) {
    const auto& prev = out.rows[order[k - 1]];
    const auto& cur = out.rows[order[k]];
    if (cur.window.length() > prev.window.length() + 1e-12 &&
        cur.mean < prev.mean - 2.0 * (prev.std_error + cur.std_error))
      out.monotone_ok = false;
  }
  return out;
}

namespace {

double spectral_norm(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

double log_plus(double v) { return std::log(std::max(1.0, v)); }

}  // namespace

IntegrabilityStat integrability_stat(const LinearYDE& eq, const FbmSpec& spec, int n_members,
                                     int sub_steps, double mu, const SolverOptions& solver) {
  if (n_members < 1) throw std::invalid_argument("integrability_stat: n_members >= 1");
  if (sub_steps < 1) throw std::invalid_argument("integrability_stat: sub_steps >= 1");
  if (spec.horizon < 1.0 - 1e-12)
    throw std::invalid_argument("integrability_stat: fBm horizon must cover [0, 1]");
  const double cells = 1.0 / (spec.dt * sub_steps);
  if (std::abs(cells - std::round(cells)) > 1e-9)
    throw std::invalid_argument("integrability_stat: sub_steps must divide the fBm grid");

  std::vector<double> eval;
  for (int k = 0; k <= sub_steps; ++k) eval.push_back(static_cast<double>(k) / sub_steps);

  IntegrabilityStat out;
  out.members = n_members;
  out.sup_fwd.assign(static_cast<std::size_t>(n_members), 0.0);
  out.sup_inv.assign(static_cast<std::size_t>(n_members), 0.0);
  std::vector<char> ok(static_cast<std::size_t>(n_members), 0);
  std::vector<double> pvar_p(static_cast<std::size_t>(n_members), 0.0);

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_members; ++i) {
    try {
      FbmSpec s = spec;
      s.seed = member_seed(spec.seed, static_cast<std::uint64_t>(i));
      const SampledPath z = fbm_sample(s);
      pvar_p[static_cast<std::size_t>(i)] =
          std::pow(p_variation_seminorm(z, eq.params.p, {0.0, 1.0}), eq.params.p);
      const FlowMatrix fm = adjoint_fundamental(eq, z, 0.0, eval, solver);
      double sf = 0.0, si = 0.0;
      for (std::size_t a = 0; a < eval.size(); ++a)
        for (std::size_t b = a; b < eval.size(); ++b) {
          const Matrix fwd = fm.phi[b] * fm.psi[a].transpose();
          const Matrix inv = fm.phi[a] * fm.psi[b].transpose();
          sf = std::max(sf, log_plus(spectral_norm(fwd)));
          si = std::max(si, log_plus(spectral_norm(inv)));
        }
      out.sup_fwd[static_cast<std::size_t>(i)] = sf;
      out.sup_inv[static_cast<std::size_t>(i)] = si;
      ok[static_cast<std::size_t>(i)] = 1;
    } catch (const std::exception&) {
      ok[static_cast<std::size_t>(i)] = 0;
    }
  }

  int good = 0;
  double h_hat = 0.0, mf = 0.0, mi = 0.0;
  for (int i = 0; i < n_members; ++i) {
    if (!ok[static_cast<std::size_t>(i)]) {
      ++out.failures;
      continue;
    }
    ++good;
    h_hat += pvar_p[static_cast<std::size_t>(i)];
    mf += out.sup_fwd[static_cast<std::size_t>(i)];
    mi += out.sup_inv[static_cast<std::size_t>(i)];
  }
  if (out.failures > 0.01 * n_members)
    throw std::runtime_error("integrability_stat: more than 1% of members failed (" +
                             std::to_string(out.failures) + "/" + std::to_string(n_members) + ")");
  out.h_hat = h_hat / good;
  out.stat_fwd = mf / good;
  out.stat_inv = mi / good;

  const double m0 = m_zero(eq, 1.0);
  out.mu = mu != 0.0 ? mu : (m0 > 0.0 ? 0.5 * std::min(1.0, m0) : 0.0);
  out.bound = m0 > 0.0 ? exponent_bound(eq, out.h_hat, out.mu, 1.0) : 0.0;
  return out;
}

EnsembleSpectrum ensemble_spectrum(const LinearYDE& eq, const FbmSpec& spec, int n_members,
                                   double horizon, const SpectrumOptions& opts) {
  if (n_members < 2) throw std::invalid_argument("ensemble_spectrum: n_members >= 2 required");
  if (spec.horizon + 1e-9 < horizon)
    throw std::invalid_argument("ensemble_spectrum: fBm horizon shorter than the spectrum horizon");
  const int d = eq.dim;
  const int units = static_cast<int>(std::floor(spec.horizon + 1e-9));

  EnsembleSpectrum out;
  out.lambdas.assign(static_cast<std::size_t>(n_members), {});
  std::vector<double> gammas(static_cast<std::size_t>(n_members), 0.0);
  std::vector<char> ok(static_cast<std::size_t>(n_members), 0);

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_members; ++i) {
    try {
      FbmSpec s = spec;
      s.seed = member_seed(spec.seed, static_cast<std::uint64_t>(i));
      const SampledPath z = fbm_sample(s);
      const SpectrumEstimate est = discrete_spectrum(eq, z, 0.0, horizon, opts);
      out.lambdas[static_cast<std::size_t>(i)] = est.lambdas;
      gammas[static_cast<std::size_t>(i)] = gamma_p(z, eq.params.p, units);
      ok[static_cast<std::size_t>(i)] = 1;
    } catch (const std::exception&) {
      ok[static_cast<std::size_t>(i)] = 0;
    }
  }

  int good = 0;
  double gsum = 0.0;
  std::vector<double> sum(static_cast<std::size_t>(d), 0.0), sumsq(static_cast<std::size_t>(d), 0.0);
  std::vector<std::vector<double>> moments(static_cast<std::size_t>(d),
                                           std::vector<double>(4, 0.0));
  for (int i = 0; i < n_members; ++i) {
    if (!ok[static_cast<std::size_t>(i)]) {
      out.failed_members.push_back(i);
      continue;
    }
    ++good;
    gsum += gammas[static_cast<std::size_t>(i)];
    const auto& lam = out.lambdas[static_cast<std::size_t>(i)];
    for (int k = 0; k < d; ++k) {
      const double v = lam[static_cast<std::size_t>(k)];
      sum[static_cast<std::size_t>(k)] += v;
      sumsq[static_cast<std::size_t>(k)] += v * v;
      double a = std::abs(v);
      for (int r = 0; r < 4; ++r) {
        moments[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)] +=
            std::pow(a, static_cast<double>(r + 1));
      }
    }
  }
  out.flagged = !out.failed_members.empty();
  if (good < 2) throw std::runtime_error("ensemble_spectrum: fewer than 2 members succeeded");

  out.mean.resize(static_cast<std::size_t>(d));
  out.variance.resize(static_cast<std::size_t>(d));
  out.abs_moments.assign(static_cast<std::size_t>(d), std::vector<double>(4, 0.0));
  for (int k = 0; k < d; ++k) {
    const double m = sum[static_cast<std::size_t>(k)] / good;
    out.mean[static_cast<std::size_t>(k)] = m;
    out.variance[static_cast<std::size_t>(k)] =
        std::max(0.0, (sumsq[static_cast<std::size_t>(k)] - good * m * m) / (good - 1));
    for (int r = 0; r < 4; ++r)
      out.abs_moments[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)] =
          moments[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)] / good;
  }
  out.mean_gamma_p = gsum / good;
  const double m0 = m_zero(eq, 1.0);
  out.bound = m0 > 0.0 ? exponent_bound(eq, out.mean_gamma_p) : 0.0;
  out.exceed_count.assign(static_cast<std::size_t>(d), 0);
  for (int i = 0; i < n_members; ++i) {
    if (!ok[static_cast<std::size_t>(i)]) continue;
    for (int k = 0; k < d; ++k)
      if (std::abs(out.lambdas[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) >
          out.bound)
        ++out.exceed_count[static_cast<std::size_t>(k)];
  }
  return out;
}

}  // namespace yde
