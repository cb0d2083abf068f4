#pragma once

#include <vector>

#include "yde/solver.hpp"

namespace yde {

/* Two-parameter flow samples Phi(base, t) for t in times, plus the adjoint
 * Psi(base, t) when computed.  Phi(base,t)^{-1} = Psi(base,t)^T, so
 * Phi(s,t) = Phi(base,t) Psi(base,s)^T without reverse-time integration. */
struct FlowMatrix {
  double base{0.0};
  std::vector<double> times;
  std::vector<Matrix> phi;
  std::vector<Matrix> psi;  // empty unless the adjoint was solved
  const Matrix& at(double t) const;
  const Matrix& psi_at(double t) const;
};

FlowMatrix fundamental_matrix(const LinearYDE& eq, const SampledPath& omega, double t0,
                              const std::vector<double>& eval_times,
                              const SolverOptions& opts = {});
// Same, with the adjoint pass filled in.
FlowMatrix adjoint_fundamental(const LinearYDE& eq, const SampledPath& omega, double t0,
                               const std::vector<double>& eval_times,
                               const SolverOptions& opts = {});
Matrix flow_between(const LinearYDE& eq, const SampledPath& omega, double s, double t,
                    const SolverOptions& opts = {});

// int trace A ds + int trace C domega on [s,t], evaluated with the solver's
// quadrature so it matches log|det Phi(s,t)| up to the iteration tolerance.
double liouville_log_det(const LinearYDE& eq, const SampledPath& omega, double s, double t);
std::vector<double> liouville_log_det_series(const LinearYDE& eq, const SampledPath& omega,
                                             double t0, const std::vector<double>& times);

// log|det M| via LU; degenerate (|pivot| < 1e-300) reports -infinity.
double log_abs_det(const Matrix& M, bool* degenerate = nullptr);

struct ContinuityRow {
  double eps;
  double dx0;
  double domega_pvar;
  double dsol_pvar;
  double ratio;  // dsol / (dx0 + domega)
};

// Perturbs x0 along the normalized ones vector and omega by eps * bump
// (half-sine over the window); reports the p-var norm of the solution
// difference.  Rows shrink with eps and the ratio stays bounded when the
// solve map is locally Lipschitz in (x0, omega).
std::vector<ContinuityRow> continuity_probe(const LinearYDE& eq, const Matrix& x0,
                                            const SampledPath& omega, const Interval& window,
                                            const std::vector<double>& eps_list,
                                            const SolverOptions& opts = {});

}  // namespace yde
