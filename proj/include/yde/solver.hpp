#pragma once

#include <vector>

#include "yde/greedy.hpp"
#include "yde/path.hpp"
#include "yde/young.hpp"

namespace yde {

/* dx = A(t) x dt + C(t) x domega, A and C d x d paths on one grid.
 * The driver omega is scalar; coefficients need not share omega's grid
 * (solves merge internally). */
struct LinearYDE {
  SampledPath A;
  SampledPath C;
  YoungParams params;
  int dim;
  LinearYDE(SampledPath A_, SampledPath C_, YoungParams params_);
};

// Coefficients of the adjoint equation: (-A^T, -C^T).
LinearYDE adjoint(const LinearYDE& eq);

double a_sup_norm(const LinearYDE& eq, const Interval& window);
// |C(a)| + |||C|||_{q-var} on the window (the full q-variation norm).
double c_qvar_norm(const LinearYDE& eq, const Interval& window);
// M* = max{ sup|A|, 2 K |C|_{q-var} } on the window.
double m_star(const LinearYDE& eq, const Interval& window);
// Sliding-window versions over width delta (default 1): A-hat, C-hat, M0.
double a_hat(const LinearYDE& eq);
double c_hat(const LinearYDE& eq, double delta = 1.0);
double m_zero(const LinearYDE& eq, double delta = 1.0);

struct SolverOptions {
  double mu = 0.0;          // 0 = auto: min(1, M*)/2
  double tol = 1e-10;       // q-var norm between successive iterates
  int max_iterations = 200;
  bool enforce_growth_bounds = true;
};

struct SolveReport {
  SampledPath solution;          // window grid, shape of x0
  std::vector<double> tau;       // greedy stopping times
  std::vector<int> iterations;   // per greedy interval
  double mu{0.0};
  double m_star{0.0};
  double budget{0.0};
  double omega_pvar{0.0};        // |||omega|||_{p-var} on the window
  double sup_norm{0.0};
  double pvar_norm{0.0};         // |x(a)| + |||x|||_{p-var} on the window
  double growth_bound{0.0};      // |x0| exp{eta [2 + (2M/mu)^p (T^p + |||omega|||^p)]}
  double pvar_bound{0.0};        // |x0| exp{(1+eta)[3 + (2M/mu)^p (T^p + |||omega|||^p)]}
};

/* Picard iteration of F(x)(t) = x(a) + int A x ds + int C x domega on the
 * greedy intervals, started from the constant left value.  The fixed-point
 * map evaluates both integrals exactly for the piecewise-linear
 * interpolants of the iterate (trapezoid weights): the per-cell factor is
 * then a Cayley-type map whose log has no second-order term, which is what
 * makes the flow, log-det and oracle cross-checks close at their stated
 * tolerances.  Iterates stop when successive differences fall below tol in
 * the q-var norm (a one-variation majorant is used as the cheap sufficient
 * check).  Growth bounds are asserted on every solve unless disabled. */
SolveReport picard_solve(const LinearYDE& eq, const Matrix& x0, const SampledPath& omega,
                         const Interval& window, const SolverOptions& opts = {});

}  // namespace yde
