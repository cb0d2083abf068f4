#include "yde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "yde/seminorm.hpp"

namespace yde {

LinearYDE::LinearYDE(SampledPath A_, SampledPath C_, YoungParams params_)
    : A(std::move(A_)), C(std::move(C_)), params(params_), dim(A.rows()) {
  if (A.rows() != A.cols()) throw std::invalid_argument("LinearYDE: A must be square");
  if (C.rows() != C.cols() || C.rows() != A.rows())
    throw std::invalid_argument("LinearYDE: C must be square and match A");
  if (!A.same_grid(C)) throw std::invalid_argument("LinearYDE: A and C must share a grid");
}

LinearYDE adjoint(const LinearYDE& eq) {
  const int d = eq.dim;
  auto negT = [d](const SampledPath& P) {
    std::vector<double> data(P.size() * d * d);
    for (std::size_t i = 0; i < P.size(); ++i) {
      const double* in = P.node(i);
      double* out = data.data() + i * d * d;
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) out[r * d + c] = -in[c * d + r];
    }
    return SampledPath(P.times(), std::move(data), d, d);
  };
  return LinearYDE(negT(eq.A), negT(eq.C), eq.params);
}

namespace {

double frob(const double* p, int k) {
  double s = 0.0;
  for (int c = 0; c < k; ++c) s += p[c] * p[c];
  return std::sqrt(s);
}

}  // namespace

double a_sup_norm(const LinearYDE& eq, const Interval& window) {
  const auto [ia, ib] = eq.A.window(window);
  double sup = 0.0;
  for (std::size_t i = ia; i <= ib; ++i) sup = std::max(sup, frob(eq.A.node(i), eq.A.comps()));
  return sup;
}

double c_qvar_norm(const LinearYDE& eq, const Interval& window) {
  const auto [ia, ib] = eq.C.window(window);
  (void)ib;
  return frob(eq.C.node(ia), eq.C.comps()) + p_variation_seminorm(eq.C, eq.params.q, window);
}

double m_star(const LinearYDE& eq, const Interval& window) {
  return std::max(a_sup_norm(eq, window), 2.0 * eq.params.K() * c_qvar_norm(eq, window));
}

double a_hat(const LinearYDE& eq) { return a_sup_norm(eq, eq.A.span()); }

double c_hat(const LinearYDE& eq, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("c_hat: need delta > 0");
  const Interval sp = eq.C.span();
  if (sp.length() <= delta) return c_qvar_norm(eq, sp);
  double sup = 0.0;
  // Anchors stride delta/2 (window sups sampled, not exhaustive).
  for (double s = sp.a;; s += 0.5 * delta) {
    double lo = s, hi = s + delta;
    if (hi >= sp.b) {
      lo = sp.b - delta;
      hi = sp.b;
    }
    const std::size_t i0 = nearest_node(eq.C, lo), i1 = nearest_node(eq.C, hi);
    if (i1 > i0)
      sup = std::max(sup, c_qvar_norm(eq, Interval{eq.C.t(i0), eq.C.t(i1)}));
    if (hi >= sp.b) break;
  }
  return sup;
}

double m_zero(const LinearYDE& eq, double delta) {
  return std::max(a_hat(eq), 2.0 * eq.params.K() * c_hat(eq, delta));
}

namespace {

using Eigen::Map;
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct AlignedSystem {
  SampledPath A, C, omega;
};

AlignedSystem align(const LinearYDE& eq, const SampledPath& omega, const Interval& window) {
  if (!omega.is_scalar()) throw std::invalid_argument("picard_solve: driver must be scalar");
  if (eq.A.same_grid(omega)) return {eq.A, eq.C, omega};
  auto [a2, om2] = merge_grids(eq.A, omega);
  auto [c2, om3] = merge_grids(eq.C, om2);
  (void)window;
  return {std::move(a2), std::move(c2), std::move(om3)};
}

std::string format_window(const Interval& w) {
  std::ostringstream os;
  os << "[" << w.a << ", " << w.b << "]";
  return os.str();
}

}  // namespace

SolveReport picard_solve(const LinearYDE& eq, const Matrix& x0, const SampledPath& omega,
                         const Interval& window, const SolverOptions& opts) {
  const int d = eq.dim;
  if (x0.rows() != d) throw std::invalid_argument("picard_solve: x0 rows must match dim");
  const int m = static_cast<int>(x0.cols());
  if (!(window.length() > 0.0)) throw std::invalid_argument("picard_solve: degenerate window");

  const AlignedSystem sys = align(eq, omega, window);
  const auto [ia, ib] = sys.omega.window(window);
  const double T = window.length();

  double a_sup = 0.0;
  {
    const auto [ja, jb] = sys.A.window(window);
    for (std::size_t i = ja; i <= jb; ++i) a_sup = std::max(a_sup, frob(sys.A.node(i), sys.A.comps()));
  }
  const double c_norm = frob(sys.C.node(sys.C.window(window).first), sys.C.comps()) +
                        p_variation_seminorm(sys.C, eq.params.q, window);
  const double mstar = std::max(a_sup, 2.0 * eq.params.K() * c_norm);
  const double omega_pvar = p_variation_seminorm(sys.omega, eq.params.p, window);
  const double x0n = x0.norm();

  // Zero coefficients: the solution is the constant x0, no iteration.
  if (mstar < 1e-300) {
    std::vector<double> times(sys.omega.times().begin() + ia, sys.omega.times().begin() + ib + 1);
    std::vector<double> data(times.size() * d * m);
    for (std::size_t i = 0; i < times.size(); ++i)
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < m; ++c) data[i * d * m + r * m + c] = x0(r, c);
    return SolveReport{SampledPath(std::move(times), std::move(data), d, m),
                       {window.a, window.b},
                       {0},
                       0.0,
                       mstar,
                       0.0,
                       omega_pvar,
                       x0n,
                       x0n,
                       x0n,
                       x0n};
  }

  const double mu = opts.mu > 0.0 ? opts.mu : 0.5 * std::min(1.0, mstar);
  if (!(mu > 0.0 && mu < std::min(1.0, mstar)))
    throw std::domain_error("picard_solve: need 0 < mu < min(1, M*)");
  const double budget = mu / mstar;

  GreedyPartition part = greedy_partition(sys.omega, eq.params.p, budget, window);
  std::vector<int> iterations;

  // Node-indexed sample tables for the window.
  const std::size_t n = ib - ia + 1;
  const int k = d * m;
  std::vector<Matrix> x(n);
  x[0] = x0;

  std::vector<Matrix> cur, nxt;
  for (std::size_t seg = 0; seg + 1 < part.idx.size(); ++seg) {
    const std::size_t lo = part.idx[seg] - ia, hi = part.idx[seg + 1] - ia;
    const std::size_t len = hi - lo + 1;
    cur.assign(len, x[lo]);
    nxt.assign(len, x[lo]);
    int it = 0;
    bool converged = false;
    double one_var = 0.0;
    for (it = 1; it <= opts.max_iterations; ++it) {
      Matrix acc = x[lo];
      one_var = 0.0;
      Matrix prev_delta = Matrix::Zero(d, m);
      for (std::size_t j = 0; j + 1 < len; ++j) {
        const std::size_t g = ia + lo + j;
        const double dt = sys.omega.t(g + 1) - sys.omega.t(g);
        const double dw = sys.omega.value1(g + 1) - sys.omega.value1(g);
        Map<const RowMat> A0(sys.A.node(g), d, d), A1(sys.A.node(g + 1), d, d);
        Map<const RowMat> C0(sys.C.node(g), d, d), C1(sys.C.node(g + 1), d, d);
        acc.noalias() += 0.5 * dt * (A0 * cur[j] + A1 * cur[j + 1]);
        acc.noalias() += 0.5 * dw * (C0 * cur[j] + C1 * cur[j + 1]);
        Matrix delta = acc - cur[j + 1];
        one_var += (delta - prev_delta).norm();
        prev_delta.swap(delta);
        nxt[j + 1] = acc;
      }
      cur.swap(nxt);
      if (one_var <= opts.tol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      // The 1-var majorant can be pessimistic; settle with the exact q-var.
      std::vector<double> dtimes(len), ddata(len * k);
      for (std::size_t j = 0; j < len; ++j) {
        dtimes[j] = sys.omega.t(ia + lo + j);
        Map<RowMat>(ddata.data() + j * k, d, m) = cur[j] - nxt[j];
      }
      SampledPath diff(std::move(dtimes), std::move(ddata), d, m);
      if (p_variation_seminorm(diff, eq.params.q) > opts.tol) {
        throw std::runtime_error("picard_solve: no convergence after " +
                                 std::to_string(opts.max_iterations) + " iterations on " +
                                 format_window({part.tau[seg], part.tau[seg + 1]}));
      }
    }
    for (std::size_t j = 1; j < len; ++j) x[lo + j] = cur[j];
    iterations.push_back(it);
  }

  std::vector<double> times(sys.omega.times().begin() + ia, sys.omega.times().begin() + ib + 1);
  std::vector<double> data(n * k);
  for (std::size_t i = 0; i < n; ++i) Map<RowMat>(data.data() + i * k, d, m) = x[i];
  SampledPath solution(std::move(times), std::move(data), d, m);

  double sup_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) sup_norm = std::max(sup_norm, x[i].norm());
  const double pvar_norm = x0n + p_variation_seminorm(solution, eq.params.p, window);

  const double eta = -std::log1p(-mu);
  const double mass = std::pow(2.0 * mstar / mu, eq.params.p) *
                      (std::pow(T, eq.params.p) + std::pow(omega_pvar, eq.params.p));
  const double growth_bound = x0n * std::exp(eta * (2.0 + mass));
  const double pvar_bound = x0n * std::exp((1.0 + eta) * (3.0 + mass));

  if (opts.enforce_growth_bounds) {
    const double slack = 1.0 + 1e-9;
    if (sup_norm > growth_bound * slack || pvar_norm > pvar_bound * slack)
      throw std::runtime_error("picard_solve: growth bound violated on " + format_window(window));
  }
  return SolveReport{std::move(solution), std::move(part.tau),     std::move(iterations), mu,
                     mstar,               budget,                  omega_pvar,            sup_norm,
                     pvar_norm,           growth_bound,            pvar_bound};
}

}  // namespace yde
