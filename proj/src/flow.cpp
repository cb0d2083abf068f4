#include "yde/flow.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "yde/seminorm.hpp"

namespace yde {

namespace {

std::size_t index_of(const std::vector<double>& times, double t) {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::fabs(times[i] - t) <= 1e-9 * std::max(1.0, std::fabs(t))) return i;
  throw std::domain_error("FlowMatrix: time not recorded");
}

}  // namespace

const Matrix& FlowMatrix::at(double t) const { return phi[index_of(times, t)]; }

const Matrix& FlowMatrix::psi_at(double t) const {
  if (psi.empty()) throw std::logic_error("FlowMatrix: adjoint not computed");
  return psi[index_of(times, t)];
}

namespace {

FlowMatrix flow_impl(const LinearYDE& eq, const SampledPath& omega, double t0,
                     const std::vector<double>& eval_times, const SolverOptions& opts,
                     bool with_adjoint) {
  if (eval_times.empty()) throw std::invalid_argument("fundamental_matrix: no eval times");
  std::vector<double> ts = eval_times;
  std::sort(ts.begin(), ts.end());
  if (ts.front() < t0) throw std::invalid_argument("fundamental_matrix: eval time before base");

  FlowMatrix fm;
  fm.base = t0;
  fm.times = ts;
  const int d = eq.dim;
  const Matrix I = Matrix::Identity(d, d);

  const double tend = ts.back();
  if (tend <= t0) {  // all requests sit at the base point
    fm.phi.assign(ts.size(), I);
    if (with_adjoint) fm.psi.assign(ts.size(), I);
    return fm;
  }

  SolveReport rep = picard_solve(eq, I, omega, {t0, tend}, opts);
  for (double t : ts) fm.phi.push_back(t <= t0 ? I : rep.solution.value(rep.solution.locate(t)));
  if (with_adjoint) {
    SolveReport arep = picard_solve(adjoint(eq), I, omega, {t0, tend}, opts);
    for (double t : ts)
      fm.psi.push_back(t <= t0 ? I : arep.solution.value(arep.solution.locate(t)));
  }
  return fm;
}

}  // namespace

FlowMatrix fundamental_matrix(const LinearYDE& eq, const SampledPath& omega, double t0,
                              const std::vector<double>& eval_times, const SolverOptions& opts) {
  return flow_impl(eq, omega, t0, eval_times, opts, false);
}

FlowMatrix adjoint_fundamental(const LinearYDE& eq, const SampledPath& omega, double t0,
                               const std::vector<double>& eval_times, const SolverOptions& opts) {
  return flow_impl(eq, omega, t0, eval_times, opts, true);
}

Matrix flow_between(const LinearYDE& eq, const SampledPath& omega, double s, double t,
                    const SolverOptions& opts) {
  const int d = eq.dim;
  if (t <= s) {
    if (t == s) return Matrix::Identity(d, d);
    throw std::invalid_argument("flow_between: need s <= t (use the adjoint for backward flow)");
  }
  SolveReport rep = picard_solve(eq, Matrix::Identity(d, d), omega, {s, t}, opts);
  return rep.solution.value(rep.solution.size() - 1);
}

namespace {

SampledPath trace_path(const SampledPath& P) {
  const int d = P.rows();
  std::vector<double> v(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) {
    const double* p = P.node(i);
    double s = 0.0;
    for (int r = 0; r < d; ++r) s += p[r * d + r];
    v[i] = s;
  }
  return SampledPath::scalar(P.times(), std::move(v));
}

}  // namespace

std::vector<double> liouville_log_det_series(const LinearYDE& eq, const SampledPath& omega,
                                             double t0, const std::vector<double>& times) {
  if (times.empty()) return {};
  const double tend = *std::max_element(times.begin(), times.end());
  auto [trA, om1] = merge_grids(trace_path(eq.A), omega);
  auto [trC, om2] = merge_grids(trace_path(eq.C), om1);
  const auto [ia, ib] = om2.window({t0, tend});
  // Trapezoid in both integrators: matches the solver's fixed-point map.
  std::vector<double> cum(ib - ia + 1, 0.0);
  for (std::size_t j = ia; j < ib; ++j) {
    const double dt = om2.t(j + 1) - om2.t(j);
    const double dw = om2.value1(j + 1) - om2.value1(j);
    cum[j - ia + 1] = cum[j - ia] + 0.5 * dt * (trA.value1(j) + trA.value1(j + 1)) +
                      0.5 * dw * (trC.value1(j) + trC.value1(j + 1));
  }
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(cum[om2.locate(t) - ia]);
  return out;
}

double liouville_log_det(const LinearYDE& eq, const SampledPath& omega, double s, double t) {
  if (t == s) return 0.0;
  return liouville_log_det_series(eq, omega, s, {t}).front();
}

double log_abs_det(const Matrix& M, bool* degenerate) {
  if (degenerate) *degenerate = false;
  Eigen::PartialPivLU<Matrix> lu(M);
  const Matrix& U = lu.matrixLU();
  double acc = 0.0;
  for (int i = 0; i < M.rows(); ++i) {
    const double piv = std::fabs(U(i, i));
    if (piv < 1e-300) {
      if (degenerate) *degenerate = true;
      return -std::numeric_limits<double>::infinity();
    }
    acc += std::log(piv);
  }
  return acc;
}

std::vector<ContinuityRow> continuity_probe(const LinearYDE& eq, const Matrix& x0,
                                            const SampledPath& omega, const Interval& window,
                                            const std::vector<double>& eps_list,
                                            const SolverOptions& opts) {
  SolveReport base = picard_solve(eq, x0, omega, window, opts);
  const double p = eq.params.p;

  std::vector<double> bump_vals(omega.size());
  const Interval sp = omega.span();
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const double u = (omega.t(i) - sp.a) / (sp.b - sp.a);
    bump_vals[i] = std::sin(3.14159265358979323846 * u);
  }
  SampledPath bump = SampledPath::scalar(omega.times(), std::move(bump_vals));
  const double bump_pvar = p_variation_seminorm(bump, p, window);

  Matrix dir = Matrix::Ones(x0.rows(), x0.cols());
  dir /= dir.norm();

  std::vector<ContinuityRow> rows;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw std::invalid_argument("continuity_probe: eps must be positive");
    const Matrix x0p = x0 + eps * dir;
    SampledPath omp = add_scaled(omega, bump, eps);
    SolveReport pert = picard_solve(eq, x0p, omp, window, opts);
    SampledPath diff = add_scaled(pert.solution, base.solution, -1.0);
    double d0 = 0.0;
    for (int c = 0; c < diff.comps(); ++c) d0 += diff.node(0)[c] * diff.node(0)[c];
    ContinuityRow row;
    row.eps = eps;
    row.dx0 = eps;
    row.domega_pvar = eps * bump_pvar;
    row.dsol_pvar = std::sqrt(d0) + p_variation_seminorm(diff, p, window);
    row.ratio = row.dsol_pvar / (row.dx0 + row.domega_pvar);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace yde
