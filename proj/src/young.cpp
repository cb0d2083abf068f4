#include "yde/young.hpp"

#include <cmath>
#include <stdexcept>

#include "yde/seminorm.hpp"

namespace yde {

YoungParams::YoungParams(double p_, double q_) : p(p_), q(q_) {
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("YoungParams: need 1 < p < 2");
  if (!(q >= p)) throw std::invalid_argument("YoungParams: need q >= p");
  if (!(theta() > 1.0)) throw std::invalid_argument("YoungParams: need 1/p + 1/q > 1");
}

double YoungParams::K() const { return 1.0 / (1.0 - std::pow(2.0, 1.0 - theta())); }

namespace {

struct WindowPair {
  std::size_t ia, ib;
  int out_rows, out_cols;
  bool scalar_driver;
};

WindowPair check_pair(const SampledPath& x, const SampledPath& omega, const Interval& window) {
  const auto [ia, ib] = x.window(window);
  const auto [oa, ob] = omega.window(window);
  if (oa != ia || ob != ib || !x.same_grid(omega))
    throw std::invalid_argument("young_integral: paths must share the grid (merge_grids first)");
  WindowPair wp;
  wp.ia = ia;
  wp.ib = ib;
  wp.scalar_driver = omega.is_scalar();
  if (wp.scalar_driver) {
    wp.out_rows = x.rows();
    wp.out_cols = x.cols();
  } else {
    if (x.cols() != omega.rows())
      throw std::invalid_argument("young_integral: x.cols must match omega.rows");
    wp.out_rows = x.rows();
    wp.out_cols = omega.cols();
  }
  return wp;
}

}  // namespace

Matrix young_integral(const SampledPath& x, const SampledPath& omega, const Interval& window) {
  const WindowPair wp = check_pair(x, omega, window);
  Matrix acc = Matrix::Zero(wp.out_rows, wp.out_cols);
  for (std::size_t j = wp.ia; j < wp.ib; ++j) {
    if (wp.scalar_driver) {
      const double dw = omega.value1(j + 1) - omega.value1(j);
      const double* p = x.node(j);
      for (int r = 0; r < wp.out_rows; ++r)
        for (int c = 0; c < wp.out_cols; ++c) acc(r, c) += p[r * wp.out_cols + c] * dw;
    } else {
      acc += x.value(j) * (omega.value(j + 1) - omega.value(j));
    }
  }
  return acc;
}

Matrix young_integral(const SampledPath& x, const SampledPath& omega) {
  return young_integral(x, omega, x.span());
}

SampledPath young_integral_path(const SampledPath& x, const SampledPath& omega,
                                const Interval& window) {
  const WindowPair wp = check_pair(x, omega, window);
  const int k = wp.out_rows * wp.out_cols;
  std::vector<double> times(x.times().begin() + wp.ia, x.times().begin() + wp.ib + 1);
  std::vector<double> data((wp.ib - wp.ia + 1) * k, 0.0);
  Matrix acc = Matrix::Zero(wp.out_rows, wp.out_cols);
  for (std::size_t j = wp.ia; j < wp.ib; ++j) {
    if (wp.scalar_driver) {
      const double dw = omega.value1(j + 1) - omega.value1(j);
      const double* p = x.node(j);
      for (int r = 0; r < wp.out_rows; ++r)
        for (int c = 0; c < wp.out_cols; ++c) acc(r, c) += p[r * wp.out_cols + c] * dw;
    } else {
      acc += x.value(j) * (omega.value(j + 1) - omega.value(j));
    }
    double* out = data.data() + (j + 1 - wp.ia) * k;
    for (int r = 0; r < wp.out_rows; ++r)
      for (int c = 0; c < wp.out_cols; ++c) out[r * wp.out_cols + c] = acc(r, c);
  }
  return SampledPath(std::move(times), std::move(data), wp.out_rows, wp.out_cols);
}

SampledPath young_integral_path(const SampledPath& x, const SampledPath& omega) {
  return young_integral_path(x, omega, x.span());
}

double young_loeve_defect_bound(const SampledPath& x, const SampledPath& omega,
                                const YoungParams& params, const Interval& window) {
  const double xq = p_variation_seminorm(x, params.q, window);
  const double op = p_variation_seminorm(omega, params.p, window);
  return params.K() * xq * op;
}

}  // namespace yde
