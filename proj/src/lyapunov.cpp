#include "yde/lyapunov.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "yde/seminorm.hpp"
#include "yde/young.hpp"

namespace yde {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log_abs(double v) {
  const double a = std::abs(v);
  return a == 0.0 ? kNegInf : std::log(a);
}

// Column signs fixed so diag(R) >= 0; zero pivots left alone.
void qr_positive(Matrix& q, Matrix& r) {
  for (Eigen::Index k = 0; k < r.rows(); ++k) {
    if (r(k, k) < 0.0) {
      r.row(k) = -r.row(k);
      q.col(k) = -q.col(k);
    }
  }
}

}  // namespace

double chi(const SampledPath& h, double tail_fraction) {
  if (!h.is_scalar()) throw std::invalid_argument("chi: scalar path required");
  if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
    throw std::invalid_argument("chi: tail_fraction in (0, 1] required");
  const Interval sp = h.span();
  const double cut = sp.b - tail_fraction * (sp.b - sp.a);
  double best = kNegInf;
  bool any = false;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double t = h.t(i);
    if (t + 1e-12 < cut) continue;
    if (!(t > 0.0)) throw std::domain_error("chi: tail reaches nonpositive times, extend the horizon");
    any = true;
    best = std::max(best, safe_log_abs(h.value1(i)) / t);
  }
  if (!any) throw std::domain_error("chi: empty tail");
  return best;
}

SpectrumEstimate discrete_spectrum(const LinearYDE& eq, const SampledPath& omega, double t0,
                                   double horizon, const SpectrumOptions& opts) {
  if (!(opts.h > 0.0)) throw std::invalid_argument("discrete_spectrum: h > 0 required");
  if (!(horizon > 0.0)) throw std::invalid_argument("discrete_spectrum: horizon > 0 required");
  if (opts.reorth_every < 1) throw std::invalid_argument("discrete_spectrum: reorth_every >= 1");
  if (!(opts.tail_fraction > 0.0) || opts.tail_fraction > 1.0)
    throw std::invalid_argument("discrete_spectrum: tail_fraction in (0, 1]");
  const long m = std::lround(horizon / opts.h);
  if (m < 1 || std::abs(m * opts.h - horizon) > 1e-9 * std::max(1.0, std::abs(horizon)))
    throw std::invalid_argument("discrete_spectrum: horizon must be a positive multiple of h");

  const int d = eq.dim;
  std::vector<Matrix> step(static_cast<std::size_t>(m));
  std::string fail;
#pragma omp parallel for schedule(dynamic) if (m > 1)
  for (long j = 0; j < m; ++j) {
    try {
      const double a = t0 + j * opts.h;
      step[static_cast<std::size_t>(j)] = flow_between(eq, omega, a, a + opts.h, opts.solver);
    } catch (const std::exception& e) {
#pragma omp critical
      if (fail.empty()) fail = e.what();
    }
  }
  if (!fail.empty()) throw std::runtime_error("discrete_spectrum: step solve failed: " + fail);

  SpectrumEstimate out;
  out.method = opts.method;
  out.t0 = t0;
  out.horizon = horizon;
  out.h = opts.h;
  out.series.dim = d;

  // Independent log-det accumulation; degenerate steps poison the rest.
  std::vector<double> logdet_cum(static_cast<std::size_t>(m));
  {
    double acc = 0.0;
    for (long j = 0; j < m; ++j) {
      bool deg = false;
      acc += log_abs_det(step[static_cast<std::size_t>(j)], &deg);
      logdet_cum[static_cast<std::size_t>(j)] = acc;
    }
  }

  /* Slow flag at t0: the right singular flag of the long product, reached by
   * QR power iteration of the one-step inverses applied in reverse time
   * order (the product then equals the full inverse flow, whose dominant
   * directions are the slowest forward ones).  Columns come out slow to
   * fast and are reversed so trailing k columns span E_k, matching the
   * descending order of the exponents. */
  Matrix flag = Matrix::Identity(d, d);
  {
    bool flag_ok = true;
    Matrix qa = Matrix::Identity(d, d);
    for (long j = m - 1; j >= 0 && flag_ok; --j) {
      const Matrix& s = step[static_cast<std::size_t>(j)];
      bool deg = false;
      log_abs_det(s, &deg);
      if (deg) {
        flag_ok = false;
        break;
      }
      Matrix z = Eigen::PartialPivLU<Matrix>(s).solve(qa);
      Eigen::HouseholderQR<Matrix> qr(z);
      qa = qr.householderQ() * Matrix::Identity(d, d);
      Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
      qr_positive(qa, r);
    }
    if (flag_ok)
      for (int k = 0; k < d; ++k) flag.col(k) = qa.col(d - 1 - k);
  }
  out.flag_basis = flag;

  auto push_checkpoint = [&](long j_done, const std::vector<double>& ell) {
    const double t = t0 + j_done * opts.h;
    const double elapsed = j_done * opts.h;
    std::vector<double> lam(ell.size());
    for (std::size_t k = 0; k < ell.size(); ++k) lam[k] = ell[k] / elapsed;
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    out.series.times.push_back(t);
    out.series.lambdas.push_back(std::move(lam));
    out.series.logdet_rate.push_back(logdet_cum[static_cast<std::size_t>(j_done - 1)] / elapsed);
  };

  if (opts.method == SpectrumMethod::qr) {
    Matrix q = Matrix::Identity(d, d);
    std::vector<double> ell(static_cast<std::size_t>(d), 0.0);
    for (long j = 0; j < m; ++j) {
      Matrix z = step[static_cast<std::size_t>(j)] * q;
      Eigen::HouseholderQR<Matrix> qr(z);
      q = qr.householderQ() * Matrix::Identity(d, d);
      Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
      qr_positive(q, r);
      for (int k = 0; k < d; ++k) ell[static_cast<std::size_t>(k)] += safe_log_abs(r(k, k));
      push_checkpoint(j + 1, ell);
    }
  } else {
    Matrix u = Matrix::Identity(d, d);
    std::vector<double> ell(static_cast<std::size_t>(d), 0.0);
    Matrix block = Matrix::Identity(d, d);
    int in_block = 0;
    for (long j = 0; j < m; ++j) {
      block = step[static_cast<std::size_t>(j)] * block;
      ++in_block;
      if (in_block == opts.reorth_every || j + 1 == m) {
        // Refactor block * u * diag(exp ell) with the max exponent split off.
        const double emax = *std::max_element(ell.begin(), ell.end());
        Matrix w = block * u;
        if (std::isfinite(emax)) {
          for (int k = 0; k < d; ++k) {
            const double e = ell[static_cast<std::size_t>(k)];
            w.col(k) *= (e == kNegInf) ? 0.0 : std::exp(e - emax);
          }
        } else {
          w.setZero();
        }
        Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeFullU);
        u = svd.matrixU();
        for (int k = 0; k < d; ++k)
          ell[static_cast<std::size_t>(k)] =
              (std::isfinite(emax) ? emax : 0.0) + safe_log_abs(svd.singularValues()(k));
        block = Matrix::Identity(d, d);
        in_block = 0;
        push_checkpoint(j + 1, ell);
      }
    }
  }

  // Sum rule: per-checkpoint exponent sum against the log-det rate.
  double defect = 0.0;
  for (std::size_t i = 0; i < out.series.times.size(); ++i) {
    const auto& lam = out.series.lambdas[i];
    const double s = std::accumulate(lam.begin(), lam.end(), 0.0);
    if (std::isfinite(s) && std::isfinite(out.series.logdet_rate[i]))
      defect = std::max(defect, std::abs(s - out.series.logdet_rate[i]));
  }
  out.sum_rule_defect = defect;

  // Finals: average the trailing tail_fraction of checkpoints, at least one.
  // Dispersion is the sample std over the same tail, 0 for a lone checkpoint
  // or a -inf sentinel mean.  Sorted jointly so dispersion[k] stays paired.
  const std::size_t nchk = out.series.times.size();
  const std::size_t keep =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(opts.tail_fraction * nchk)));
  out.tail_window = out.series.times.back() - out.series.times[nchk - keep];
  std::vector<std::pair<double, double>> fin(static_cast<std::size_t>(d), {0.0, 0.0});
  for (std::size_t i = nchk - keep; i < nchk; ++i)
    for (int k = 0; k < d; ++k) fin[static_cast<std::size_t>(k)].first += out.series.lambdas[i][static_cast<std::size_t>(k)];
  for (auto& f : fin) f.first = std::isfinite(f.first) ? f.first / static_cast<double>(keep) : kNegInf;
  if (keep > 1) {
    for (std::size_t i = nchk - keep; i < nchk; ++i)
      for (int k = 0; k < d; ++k) {
        auto& f = fin[static_cast<std::size_t>(k)];
        if (!std::isfinite(f.first)) continue;
        const double dvk = out.series.lambdas[i][static_cast<std::size_t>(k)] - f.first;
        f.second += dvk * dvk;
      }
    for (auto& f : fin) f.second = std::sqrt(f.second / static_cast<double>(keep - 1));
  }
  std::sort(fin.begin(), fin.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  out.lambdas.resize(static_cast<std::size_t>(d));
  out.dispersion.resize(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    out.lambdas[static_cast<std::size_t>(k)] = fin[static_cast<std::size_t>(k)].first;
    out.dispersion[static_cast<std::size_t>(k)] = fin[static_cast<std::size_t>(k)].second;
  }
  return out;
}

double exponent_bound(const LinearYDE& eq, double gamma_p, double mu, double delta) {
  if (!(gamma_p >= 0.0)) throw std::invalid_argument("exponent_bound: gamma_p >= 0 required");
  const double m0 = m_zero(eq, delta);
  if (!(m0 > 0.0)) return 0.0;  // zero coefficients: solutions are constant
  if (mu == 0.0) mu = 0.5 * std::min(1.0, m0);
  if (!(mu > 0.0) || !(mu < std::min(1.0, m0)))
    throw std::domain_error("exponent_bound: need 0 < mu < min(1, M0)");
  const double eta = -std::log1p(-mu);
  const double p = eq.params.p;
  return eta * (2.0 + std::pow(2.0 * m0 / mu, p) * (1.0 + gamma_p));
}

RegularityReport nonregularity(const LinearYDE& eq, const SampledPath& omega, double t0,
                               double horizon, const SpectrumOptions& opts, double threshold) {
  const SpectrumEstimate fwd = discrete_spectrum(eq, omega, t0, horizon, opts);
  const SpectrumEstimate adj = discrete_spectrum(adjoint(eq), omega, t0, horizon, opts);

  RegularityReport rep;
  rep.lambdas = fwd.lambdas;
  rep.adjoint_lambdas = adj.lambdas;
  std::sort(rep.adjoint_lambdas.begin(), rep.adjoint_lambdas.end());
  rep.perron_defects.resize(rep.lambdas.size());
  for (std::size_t i = 0; i < rep.lambdas.size(); ++i)
    rep.perron_defects[i] = rep.lambdas[i] + rep.adjoint_lambdas[i];

  // liminf of the log-det rate estimated as the min over the trailing tail.
  const auto& ser = fwd.series;
  const std::size_t nchk = ser.times.size();
  const std::size_t keep =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(opts.tail_fraction * nchk)));
  double det_liminf = std::numeric_limits<double>::infinity();
  for (std::size_t i = nchk - keep; i < nchk; ++i)
    det_liminf = std::min(det_liminf, ser.logdet_rate[i]);
  const double lam_sum = std::accumulate(rep.lambdas.begin(), rep.lambdas.end(), 0.0);
  rep.sigma = lam_sum - det_liminf;

  rep.threshold = threshold > 0.0 ? threshold : 0.05 * eq.dim;
  rep.regular = rep.sigma <= rep.threshold;
  return rep;
}

ArithmeticCheck exponent_arithmetic_check(const std::vector<SampledPath>& g,
                                          const std::vector<double>& lambda, double q,
                                          double tail_fraction, double slack) {
  if (g.empty() || g.size() != lambda.size())
    throw std::invalid_argument("exponent_arithmetic_check: paths and exponents must pair up");
  for (const auto& gi : g) {
    if (!gi.is_scalar()) throw std::invalid_argument("exponent_arithmetic_check: scalar paths required");
    if (!gi.same_grid(g.front()))
      throw std::invalid_argument("exponent_arithmetic_check: common grid required");
  }

  ArithmeticCheck out;
  out.max_lambda = *std::max_element(lambda.begin(), lambda.end());
  out.sum_lambda = std::accumulate(lambda.begin(), lambda.end(), 0.0);

  out.chi_sum = chi(pointwise_sum(g), tail_fraction);
  out.chi_prod = chi(pointwise_product(g), tail_fraction);
  out.sum_ok = out.chi_sum <= out.max_lambda + slack;
  out.prod_ok = out.chi_prod <= out.sum_lambda + slack;

  // chi of t -> |||g|||_{q-var, [t, t+1]} sampled at unit times t = 1, 2, ...
  const Interval sp = g.front().span();
  const long last = static_cast<long>(std::floor(sp.b - sp.a + 1e-9)) - 1;
  if (last < 2) throw std::invalid_argument("exponent_arithmetic_check: span of >= 3 units required");
  out.seminorm_ok = true;
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::vector<double> times, vals;
    for (long n = 1; n <= last; ++n) {
      const double a = sp.a + static_cast<double>(n);
      times.push_back(a);
      vals.push_back(p_variation_seminorm(g[i], q, {a, a + 1.0}));
    }
    const double c = chi(SampledPath(times, vals, 1, 1), tail_fraction);
    out.chi_seminorm.push_back(c);
    if (!(c <= lambda[i] + slack)) out.seminorm_ok = false;
  }
  return out;
}

}  // namespace yde
