#pragma once

#include "yde/path.hpp"

namespace yde {

// Variation exponents for the integral pairing.  Valid when 1 < p < 2,
// q >= p and theta = 1/p + 1/q > 1; K is the Young-Loeve constant.
struct YoungParams {
  double p;
  double q;
  YoungParams(double p_, double q_);
  double theta() const { return 1.0 / p + 1.0 / q; }
  double K() const;
};

/* Left-point Riemann-Stieltjes sum over the window grid:
 *   sum_j x(t_j) (omega(t_{j+1}) - omega(t_j)).
 * This is the Young construction verbatim; no quadrature correction.
 * Shapes: scalar omega scales x; otherwise x.cols must equal omega.rows
 * and the result is (x.rows x omega.cols).  Paths must share the grid on
 * the window (merge_grids first). */
Matrix young_integral(const SampledPath& x, const SampledPath& omega, const Interval& window);
Matrix young_integral(const SampledPath& x, const SampledPath& omega);

// Cumulative integral as a path on the window grid; starts at 0, additive
// over adjacent windows by construction.
SampledPath young_integral_path(const SampledPath& x, const SampledPath& omega,
                                const Interval& window);
SampledPath young_integral_path(const SampledPath& x, const SampledPath& omega);

// K(p,q) * |||x|||_{q-var} * |||omega|||_{p-var} on the window: the bound on
// |integral - x(s)(omega(t)-omega(s))|.
double young_loeve_defect_bound(const SampledPath& x, const SampledPath& omega,
                                const YoungParams& params, const Interval& window);

}  // namespace yde
