#pragma once

#include <string>
#include <vector>

#include "yde/solver.hpp"

namespace yde {

// Upper-triangular system: entries of A, C below the diagonal must vanish.
struct TriangularYDE {
  SampledPath A;
  SampledPath C;
  YoungParams params;

  TriangularYDE(SampledPath a, SampledPath c, YoungParams pr);
  int dim() const { return A.rows(); }
  LinearYDE as_linear() const { return LinearYDE(A, C, params); }
};

struct DiagonalMeans {
  std::vector<double> times;                // series times, first grid node excluded
  std::vector<std::vector<double>> series;  // per diagonal k: (1/(t-a)) int_a^t a_kk
  std::vector<double> finals;               // value at the window's right end
  std::vector<bool> exact;                  // trailing-half oscillation <= tol
  double tol{0.0};
};

/* Running Cesaro means of the diagonal entries, trapezoid quadrature.  A mean
 * counts as exact (the limit exists at tolerance tol) when its oscillation
 * over the trailing half of the window stays within tol. */
DiagonalMeans diagonal_means(const TriangularYDE& eq, Interval window, double tol = 0.02);

/* Scalar linear equation dz = a z dt + c z domega, z(window.a) = z0, closed
 * form z = z0 exp(int a dt + int c domega) with both integrals the left-point
 * Young construction on the common grid.  No quadrature correction: this is
 * the oracle the iterative solver is judged against, kept deliberately
 * independent of it. */
SampledPath solve_1d_explicit(const SampledPath& a, const SampledPath& c,
                              const SampledPath& omega, double z0, Interval window);

// Variation-of-constants for dx = (a x + h1) dt + (c x + h2) domega:
// x = E (x0 + int h1/E dt + int h2/E domega), E = exp(int a + int c domega).
SampledPath solve_1d_nonhomogeneous(const SampledPath& a, const SampledPath& c,
                                    const SampledPath& h1, const SampledPath& h2,
                                    const SampledPath& omega, double x0, Interval window);

struct TriangularFlow {
  SampledPath X;                           // d x d fundamental matrix path on [base, base + t_max]
  Matrix base_infinite;                    // 1 where the (i,k) integral is anchored at t_max
  Matrix tail_bound;                       // truncation estimate for anchored-at-infinity entries
  std::vector<std::string> warnings;       // non-decaying truncated integrands
  std::vector<double> diagonal_mean_final; // the means the anchor rule was read from
};

/* Column-by-column fundamental matrix built from the scalar closed forms.
 * X_kk = Y_k; above the diagonal, x_ik solves the scalar nonhomogeneous
 * equation driven by rows below.  The time anchor per entry follows the sign
 * of the mean gap: integration from the window start when the k-th diagonal
 * mean is >= the i-th, otherwise from t_max (a truncated improper integral,
 * reported with a tail estimate and a warning when the integrand does not
 * visibly decay).  t_max = 0 selects 2 * horizon.  Means are taken over
 * [base, base + horizon], base = omega.span().a. */
TriangularFlow triangular_fundamental(const TriangularYDE& eq, const SampledPath& omega,
                                      double horizon, double t_max = 0.0,
                                      double mean_tol = 0.02);

struct TriangularSpectrum {
  std::vector<double> lambdas;  // diagonal means sorted descending
  std::vector<double> abar;     // in diagonal order
  std::vector<bool> exact;
  bool all_exact{false};
};

// The spectrum of a triangular system is the set of diagonal means.
TriangularSpectrum triangular_spectrum(const TriangularYDE& eq, Interval window,
                                       double tol = 0.02);

// Regular exactly when every diagonal mean converges (trailing oscillation
// within tol); the driver never enters.
bool regularity_criterion(const TriangularYDE& eq, Interval window, double tol = 0.02);

}  // namespace yde
