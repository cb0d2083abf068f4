#pragma once

#include <vector>

#include "yde/flow.hpp"
#include "yde/solver.hpp"

namespace yde {

/* Exponent of a scalar observable: limsup (1/t) log|h(t)|, estimated as the
 * max of (1/t) log|h(t)| over the trailing tail_fraction of the grid.
 * Vanishing tails give -infinity (sentinel, not NaN).  Tail times must be
 * positive. */
double chi(const SampledPath& h, double tail_fraction = 0.1);

enum class SpectrumMethod { qr, svd };

struct SpectrumOptions {
  double h = 1.0;              // interpolation step between flow checkpoints
  SpectrumMethod method = SpectrumMethod::qr;
  int reorth_every = 10;       // svd only: steps between refactorizations
  double tail_fraction = 0.2;  // trailing checkpoints averaged into finals
  SolverOptions solver;
};

struct ExponentSeries {
  std::vector<double> times;                 // absolute checkpoint times
  std::vector<std::vector<double>> lambdas;  // per checkpoint, sorted descending
  std::vector<double> logdet_rate;           // (1/(t-t0)) log|det Phi(t0,t)|
  int dim{0};
};

struct SpectrumEstimate {
  std::vector<double> lambdas;     // sorted descending, tail-averaged
  std::vector<double> dispersion;  // per-k std of lambda_k(t) over the tail window
  Matrix flag_basis;               // trailing m columns estimate the slow m-dim subspace
  SpectrumMethod method{SpectrumMethod::qr};
  double t0{0.0};
  double horizon{0.0};
  double h{1.0};
  double tail_window{0.0};      // length of the averaging tail, in time units
  double sum_rule_defect{0.0};  // max_t |sum_k lambda_k(t) - logdet rate(t)|
  ExponentSeries series;
};

/* Spectrum from the one-step flow matrices Phi(t0+jh, t0+(j+1)h), each an
 * independent Picard solve.  QR: Benettin ladder with sign-fixed R, exponents
 * from accumulated log R_kk, a checkpoint per step.  SVD: factored product
 * with refactorization every reorth_every steps; singular values of the
 * accumulated product, checkpoints on refactorization times.  Either way the
 * flag basis comes from a QR ladder over the one-step inverses applied in
 * reverse time order, which converges to the right singular flag of the long
 * product: the flow-invariant filtration at t0, which the forward ladder's
 * trailing Q columns are not.  Finals average the trailing tail_fraction of
 * checkpoints.  The log-det column is accumulated from per-step LU, an
 * independent route, so the sum rule is a real check. */
SpectrumEstimate discrete_spectrum(const LinearYDE& eq, const SampledPath& omega, double t0,
                                   double horizon, const SpectrumOptions& opts = {});

// eta [2 + (2 M0/mu)^p (1 + gamma_p)] with M0 = max{A-hat, 2K C-hat(delta)}.
// mu = 0 selects min(1, M0)/2.
double exponent_bound(const LinearYDE& eq, double gamma_p, double mu = 0.0, double delta = 1.0);

struct RegularityReport {
  std::vector<double> lambdas;          // forward, descending
  std::vector<double> adjoint_lambdas;  // ascending, paired with lambdas
  std::vector<double> perron_defects;   // lambdas[i] + adjoint_lambdas[i]
  double sigma{0.0};                    // sum lambdas - tail-min of log-det rate
  double threshold{0.0};
  bool regular{false};
};

// Regularity defect and Perron pairing from forward and adjoint spectra.
// threshold = 0 selects 0.05 * dim.
RegularityReport nonregularity(const LinearYDE& eq, const SampledPath& omega, double t0,
                               double horizon, const SpectrumOptions& opts = {},
                               double threshold = 0.0);

struct ArithmeticCheck {
  double chi_sum{0.0};
  double chi_prod{0.0};
  double max_lambda{0.0};
  double sum_lambda{0.0};
  bool sum_ok{false};
  bool prod_ok{false};
  std::vector<double> chi_seminorm;  // per path: chi of the unit-window q-var series
  bool seminorm_ok{false};
};

// chi(sum g_i) <= max lambda_i, chi(prod g_i) <= sum lambda_i, and the
// unit-window q-var series of each g_i has exponent <= lambda_i (within
// slack).  Paths must share a grid spanning at least a few units.
ArithmeticCheck exponent_arithmetic_check(const std::vector<SampledPath>& g,
                                          const std::vector<double>& lambda, double q,
                                          double tail_fraction = 0.2, double slack = 0.05);

}  // namespace yde
