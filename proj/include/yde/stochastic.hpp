#pragma once

#include <cstdint>
#include <vector>

#include "yde/fbm.hpp"
#include "yde/lyapunov.hpp"
#include "yde/solver.hpp"

namespace yde {

/* Empirical checks of the driver assumptions at a finite horizon.  Verdicts
 * are statements about the computed series, never about t -> infinity: the
 * series are reported so tails can be judged directly. */
struct AssumptionReport {
  std::vector<double> n;                // unit indices
  std::vector<double> h3;               // (1/n) |||omega|||^p_{p-var,[n,n+1]}
  std::vector<double> gamma_running;    // (1/n) sum_{k<n} |||omega|||^p_{p-var,[k,k+1]}
  double gamma_p{0.0};                  // final running value
  std::vector<std::vector<double>> h4;  // per diagonal entry: |int_0^n c dw| / n
  bool h3_decaying{false};              // log-log tail slope < -0.3 (or identically 0)
  bool h4_decaying{false};              // every entry trends down over the tail
  double h3_slope{0.0};
  std::vector<double> h4_slopes;
};

// Series over unit windows of [0, horizon]; h4 uses the left-point Young
// integral of each diagonal coefficient against omega.
AssumptionReport check_assumptions(const SampledPath& omega,
                                   const std::vector<SampledPath>& c_diag, double p,
                                   double horizon);

// (1/n) sum_{k<n} |||omega|||^p_{p-var,[k,k+1]}; omega must span [0, n].
double gamma_p(const SampledPath& omega, double p, int n);

struct MomentProbeRow {
  Interval window;
  double mean{0.0};    // Monte-Carlo E |||Z|||^r_{p-var, window}
  double std_error{0.0};
};

struct MomentProbe {
  std::vector<MomentProbeRow> rows;  // input order
  double fitted_slope{0.0};          // log mean vs log length
  double expected_slope{0.0};        // hurst * r
  bool slope_ok{false};              // fitted >= expected - 0.15
  bool monotone_ok{false};           // longer windows never mean-decrease beyond 2 SE
};

// Scaling probe for E |||Z|||^r on subwindows of [0, 1]; window endpoints
// must be grid nodes of the fBm grid.
MomentProbe moment_bound_probe(const FbmSpec& spec, double p, double r,
                               const std::vector<Interval>& windows, int n_samples = 2000);

struct IntegrabilityStat {
  double stat_fwd{0.0};   // mean over members of sup log+ |Phi(s,t)|
  double stat_inv{0.0};   // same for the inverse flow
  double bound{0.0};      // eta [2 + (2 M0/mu)^p (1 + H_hat)]
  double h_hat{0.0};      // empirical E |||Z|||^p_{p-var,[0,1]}
  double mu{0.0};
  int members{0};
  int failures{0};
  std::vector<double> sup_fwd;  // per member, index order
  std::vector<double> sup_inv;
};

/* Monte-Carlo estimate of E sup log+ |Phi(s, t)^{+-1}|, the sup over a
 * sub_steps x sub_steps triangle of (s, t) pairs in [0, 1].  Two-parameter
 * flow values come from one forward and one adjoint solve per member,
 * Phi(s,t) = Phi(0,t) Psi(0,s)^T.  Spectral norms.  More than 1% member
 * failures aborts. */
IntegrabilityStat integrability_stat(const LinearYDE& eq, const FbmSpec& spec, int n_members,
                                     int sub_steps = 16, double mu = 0.0,
                                     const SolverOptions& solver = {});

struct EnsembleSpectrum {
  std::vector<std::vector<double>> lambdas;  // member-major, each sorted descending
  std::vector<double> mean;
  std::vector<double> variance;              // unbiased across members
  std::vector<std::vector<double>> abs_moments;  // per k: E|lambda_k|^r, r = 1..4
  double bound{0.0};                         // exponent_bound at the mean empirical gamma_p
  double mean_gamma_p{0.0};
  std::vector<int> exceed_count;             // members with |lambda_k| > bound
  std::vector<int> failed_members;
  bool flagged{false};                       // any member failed
};

// discrete_spectrum per ensemble member; deterministic aggregation in member
// index order.  The fBm horizon must cover [0, horizon].
EnsembleSpectrum ensemble_spectrum(const LinearYDE& eq, const FbmSpec& spec, int n_members,
                                   double horizon, const SpectrumOptions& opts = {});

}  // namespace yde
