#include "yde/triangular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "yde/young.hpp"

namespace yde {

namespace {

void check_upper_triangular(const SampledPath& m, const char* name) {
  const int d = m.rows();
  if (d != m.cols()) throw std::invalid_argument("TriangularYDE: square coefficients required");
  for (std::size_t n = 0; n < m.size(); ++n) {
    const double* v = m.node(n);
    for (int i = 1; i < d; ++i)
      for (int j = 0; j < i; ++j)
        if (v[static_cast<std::size_t>(i * d + j)] != 0.0)
          throw std::invalid_argument(std::string("TriangularYDE: ") + name +
                                      " has a nonzero entry below the diagonal");
  }
}

// Union of the grids clipped to the window; every path must span the window.
std::vector<double> window_grid(const Interval& w,
                                std::initializer_list<const SampledPath*> paths) {
  std::vector<double> ts{w.a, w.b};
  for (const SampledPath* p : paths) ts = union_times(ts, p->times());
  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts)
    if (t >= w.a - 1e-12 && t <= w.b + 1e-12) out.push_back(t);
  return out;
}

}  // namespace

TriangularYDE::TriangularYDE(SampledPath a, SampledPath c, YoungParams pr)
    : A(std::move(a)), C(std::move(c)), params(pr) {
  if (!A.same_grid(C)) throw std::invalid_argument("TriangularYDE: A and C must share a grid");
  check_upper_triangular(A, "A");
  check_upper_triangular(C, "C");
}

DiagonalMeans diagonal_means(const TriangularYDE& eq, Interval window, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("diagonal_means: tol > 0 required");
  if (!(window.b > window.a)) throw std::invalid_argument("diagonal_means: empty window");
  const SampledPath aw = slice(resample(eq.A, union_times(eq.A.times(), {window.a, window.b})),
                               window);
  const int d = eq.dim();

  DiagonalMeans out;
  out.tol = tol;
  out.times.assign(aw.times().begin() + 1, aw.times().end());
  out.series.resize(static_cast<std::size_t>(d));
  const double t0 = aw.t(0);
  const double mid = 0.5 * (window.a + window.b);
  for (int k = 0; k < d; ++k) {
    auto& ser = out.series[static_cast<std::size_t>(k)];
    ser.reserve(out.times.size());
    double cum = 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t j = 1; j < aw.size(); ++j) {
      cum += 0.5 * (aw.comp(j - 1, k, k) + aw.comp(j, k, k)) * (aw.t(j) - aw.t(j - 1));
      const double mean = cum / (aw.t(j) - t0);
      ser.push_back(mean);
      if (aw.t(j) >= mid - 1e-12) {
        lo = std::min(lo, mean);
        hi = std::max(hi, mean);
      }
    }
    out.finals.push_back(ser.back());
    out.exact.push_back(hi - lo <= tol);
  }
  return out;
}

SampledPath solve_1d_explicit(const SampledPath& a, const SampledPath& c,
                              const SampledPath& omega, double z0, Interval window) {
  if (!a.is_scalar() || !c.is_scalar() || !omega.is_scalar())
    throw std::invalid_argument("solve_1d_explicit: scalar paths required");
  const std::vector<double> ts = window_grid(window, {&a, &c, &omega});
  const SampledPath am = resample(a, ts);
  const SampledPath cm = resample(c, ts);
  const SampledPath wm = resample(omega, ts);

  std::vector<double> vals(am.size());
  double acc = 0.0;  // int a dt + int c domega, left-point, from the window start
  vals[0] = z0;
  for (std::size_t j = 1; j < am.size(); ++j) {
    acc += am.value1(j - 1) * (am.t(j) - am.t(j - 1)) +
           cm.value1(j - 1) * (wm.value1(j) - wm.value1(j - 1));
    vals[j] = z0 * std::exp(acc);
    if (!std::isfinite(vals[j]))
      throw std::runtime_error("solve_1d_explicit: exponential factor overflowed, shrink the window");
  }
  return SampledPath(am.times(), std::move(vals), 1, 1);
}

SampledPath solve_1d_nonhomogeneous(const SampledPath& a, const SampledPath& c,
                                    const SampledPath& h1, const SampledPath& h2,
                                    const SampledPath& omega, double x0, Interval window) {
  if (!h1.is_scalar() || !h2.is_scalar())
    throw std::invalid_argument("solve_1d_nonhomogeneous: scalar forcing required");
  const std::vector<double> ts = window_grid(window, {&a, &c, &h1, &h2, &omega});
  const SampledPath f1 = resample(h1, ts);
  const SampledPath f2 = resample(h2, ts);
  const SampledPath wm = resample(omega, ts);
  const SampledPath e = solve_1d_explicit(resample(a, ts), resample(c, ts), wm, 1.0, window);

  std::vector<double> vals(e.size());
  double f = x0;  // x0 + int h1/E dt + int h2/E domega, left-point
  vals[0] = e.value1(0) * f;
  for (std::size_t j = 1; j < e.size(); ++j) {
    const double einv = 1.0 / e.value1(j - 1);
    if (!std::isfinite(einv))
      throw std::runtime_error("solve_1d_nonhomogeneous: homogeneous factor underflowed");
    f += einv * (f1.value1(j - 1) * (e.t(j) - e.t(j - 1)) +
                 f2.value1(j - 1) * (wm.value1(j) - wm.value1(j - 1)));
    vals[j] = e.value1(j) * f;
  }
  return SampledPath(e.times(), std::move(vals), 1, 1);
}

TriangularFlow triangular_fundamental(const TriangularYDE& eq, const SampledPath& omega,
                                      double horizon, double t_max, double mean_tol) {
  if (!omega.is_scalar())
    throw std::invalid_argument("triangular_fundamental: scalar driver required");
  if (!(horizon > 0.0)) throw std::invalid_argument("triangular_fundamental: horizon > 0 required");
  if (t_max <= 0.0) t_max = 2.0 * horizon;
  if (t_max < horizon) throw std::invalid_argument("triangular_fundamental: t_max >= horizon");
  const double base = omega.span().a;
  const Interval full{base, base + t_max};
  if (omega.span().b + 1e-9 < full.b)
    throw std::invalid_argument("triangular_fundamental: driver does not cover t_max");

  const int d = eq.dim();
  const std::vector<double> ts = window_grid(full, {&eq.A, &eq.C, &omega});
  const SampledPath am = resample(eq.A, ts);
  const SampledPath cm = resample(eq.C, ts);
  const SampledPath wm = resample(omega, ts);
  const std::size_t n = ts.size();

  const DiagonalMeans means = diagonal_means(eq, {base, base + horizon}, mean_tol);
  const std::vector<double>& abar = means.finals;

  Matrix base_inf = Matrix::Zero(d, d);
  Matrix tail = Matrix::Zero(d, d);
  std::vector<std::string> warnings;

  std::vector<std::vector<double>> entry(static_cast<std::size_t>(d * d));
  std::vector<SampledPath> diag;  // Y_k, shared across columns
  diag.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    diag.push_back(solve_1d_explicit(component(am, k, k), component(cm, k, k), wm, 1.0, full));
    for (std::size_t j = 0; j < n; ++j)
      if (!std::isfinite(diag.back().value1(j)))
        throw std::runtime_error("triangular_fundamental: diagonal factor overflowed, reduce t_max");
  }

  for (int k = 0; k < d; ++k) {
    auto& dk = entry[static_cast<std::size_t>(k * d + k)];
    dk.resize(n);
    for (std::size_t j = 0; j < n; ++j) dk[j] = diag[static_cast<std::size_t>(k)].value1(j);

    for (int i = k - 1; i >= 0; --i) {
      // Forcing from the rows between i and k inside this column.
      std::vector<double> ga(n, 0.0), gc(n, 0.0);
      for (int j = i + 1; j <= k; ++j) {
        const auto& xj = entry[static_cast<std::size_t>(j * d + k)];
        for (std::size_t s = 0; s < n; ++s) {
          ga[s] += am.comp(s, i, j) * xj[s];
          gc[s] += cm.comp(s, i, j) * xj[s];
        }
      }
      // Unforced entry: exactly zero, no anchor decision to make.
      bool forced = false;
      for (std::size_t s = 0; s < n && !forced; ++s) forced = ga[s] != 0.0 || gc[s] != 0.0;
      if (!forced) {
        entry[static_cast<std::size_t>(i * d + k)].assign(n, 0.0);
        continue;
      }

      const SampledPath gap(ts, ga, 1, 1);
      const SampledPath gcp(ts, gc, 1, 1);

      const bool anchor_inf = abar[static_cast<std::size_t>(k)] < abar[static_cast<std::size_t>(i)];
      double x0 = 0.0;
      if (anchor_inf) {
        // Truncated improper integral: anchor the variation-of-constants
        // integral at t_max instead of the window start.
        const SampledPath& e = diag[static_cast<std::size_t>(i)];
        std::vector<double> fcum(n, 0.0);
        for (std::size_t s = 1; s < n; ++s)
          fcum[s] = fcum[s - 1] + (ga[s - 1] * (wm.t(s) - wm.t(s - 1)) +
                                   gc[s - 1] * (wm.value1(s) - wm.value1(s - 1))) /
                                      e.value1(s - 1);
        x0 = -fcum[n - 1];

        // Tail estimate from the last two unit increments of the truncated
        // integral; a non-decaying ratio is flagged.
        const double t_end = wm.t(n - 1);
        const std::size_t i1 = nearest_node(wm, t_end - 1.0);
        const std::size_t i2 = nearest_node(wm, t_end - 2.0);
        const double inc_last = std::abs(fcum[n - 1] - fcum[i1]);
        const double inc_prev = std::abs(fcum[i1] - fcum[i2]);
        double tail_f;
        if (inc_prev > 0.0 && inc_last < 0.99 * inc_prev) {
          const double r = inc_last / inc_prev;
          tail_f = inc_last * r / (1.0 - r);
        } else {
          tail_f = inc_last * t_max;
          warnings.push_back("entry (" + std::to_string(i) + "," + std::to_string(k) +
                             "): truncated integrand shows no decay by t_max");
        }
        double e_sup = 0.0;
        for (std::size_t s = 0; s < n && wm.t(s) <= base + horizon + 1e-9; ++s)
          e_sup = std::max(e_sup, std::abs(e.value1(s)));
        base_inf(i, k) = 1.0;
        tail(i, k) = e_sup * tail_f;
      }

      const SampledPath xik = solve_1d_nonhomogeneous(component(am, i, i), component(cm, i, i),
                                                      gap, gcp, wm, x0, full);
      auto& tgt = entry[static_cast<std::size_t>(i * d + k)];
      tgt.resize(n);
      for (std::size_t s = 0; s < n; ++s) tgt[s] = xik.value1(s);
    }
    for (int i = k + 1; i < d; ++i) entry[static_cast<std::size_t>(i * d + k)].assign(n, 0.0);
  }

  std::vector<double> data(n * static_cast<std::size_t>(d * d));
  for (std::size_t s = 0; s < n; ++s)
    for (int e = 0; e < d * d; ++e)
      data[s * static_cast<std::size_t>(d * d) + static_cast<std::size_t>(e)] =
          entry[static_cast<std::size_t>(e)][s];
  return TriangularFlow{SampledPath(ts, std::move(data), d, d), std::move(base_inf),
                        std::move(tail), std::move(warnings), abar};
}

TriangularSpectrum triangular_spectrum(const TriangularYDE& eq, Interval window, double tol) {
  const DiagonalMeans m = diagonal_means(eq, window, tol);
  TriangularSpectrum out;
  out.abar = m.finals;
  out.exact = m.exact;
  out.lambdas = m.finals;
  std::sort(out.lambdas.begin(), out.lambdas.end(), std::greater<double>());
  out.all_exact = std::all_of(m.exact.begin(), m.exact.end(), [](bool b) { return b; });
  return out;
}

bool regularity_criterion(const TriangularYDE& eq, Interval window, double tol) {
  return triangular_spectrum(eq, window, tol).all_exact;
}

}  // namespace yde
