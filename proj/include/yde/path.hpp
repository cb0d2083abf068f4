#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace yde {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Interval {
  double a{0.0};
  double b{0.0};
  Interval() = default;
  Interval(double a_, double b_);  // requires a <= b
  double length() const { return b - a; }
};

/* Path sampled on a strictly increasing grid (>= 2 nodes).  All nodes share
 * one value shape (rows x cols, scalars are 1x1), stored row-major per node.
 * Semantics are grid-exact everywhere: window endpoints must be grid nodes,
 * seminorms and integrals never see anything between nodes.  Callers that
 * need off-grid points insert interpolation nodes first (merge_grids).
 * Immutable after construction, safe to share across threads. */
class SampledPath {
 public:
  SampledPath(std::vector<double> times, std::vector<double> data, int rows, int cols);

  static SampledPath scalar(std::vector<double> times, std::vector<double> values);
  static SampledPath constant(const std::vector<double>& times, const Matrix& value);
  static SampledPath time_path(const std::vector<double>& times);  // t -> t
  static SampledPath sample(const std::vector<double>& times,
                            const std::function<Matrix(double)>& f);

  std::size_t size() const { return times_.size(); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int comps() const { return rows_ * cols_; }
  bool is_scalar() const { return comps() == 1; }

  const std::vector<double>& times() const { return times_; }
  double t(std::size_t i) const { return times_[i]; }
  const double* node(std::size_t i) const { return data_.data() + i * comps(); }
  double value1(std::size_t i) const;       // 1x1 paths only
  Matrix value(std::size_t i) const;        // row-major unpack
  Matrix value_at(double t) const;          // linear interpolation inside span
  double comp(std::size_t i, int r, int c) const { return node(i)[r * cols_ + c]; }

  double incr_norm(std::size_t i, std::size_t j) const;  // Euclidean |u(t_j)-u(t_i)|

  Interval span() const { return {times_.front(), times_.back()}; }
  // Exact node lookup; throws std::domain_error when t is not a grid node.
  std::size_t locate(double t) const;
  std::pair<std::size_t, std::size_t> window(const Interval& w) const;

  bool same_grid(const SampledPath& other) const;

 private:
  std::vector<double> times_;
  std::vector<double> data_;  // size() * rows * cols, row-major per node
  int rows_{1};
  int cols_{1};
};

// (theta_r omega)(t) = omega(r + t) - omega(r) on the remaining span, grid
// translated so the result starts at 0.  Grid-aligned r keeps nodes exact;
// off-grid r inserts one interpolated anchor.  Requires span.a <= r < span.b.
SampledPath wiener_shift(const SampledPath& omega, double r);

// Both paths resampled onto the union grid: own nodes kept exactly, foreign
// nodes filled by linear interpolation.  Spans must agree.
std::pair<SampledPath, SampledPath> merge_grids(const SampledPath& x, const SampledPath& omega);

// Sorted union of two node sets; near-coincident nodes collapse to the first.
std::vector<double> union_times(const std::vector<double>& a, const std::vector<double>& b);

// x on the given grid: own nodes exact, new nodes by linear interpolation.
// Every time must lie within x's span.
SampledPath resample(const SampledPath& x, const std::vector<double>& times);

// Restriction to a window whose endpoints are grid nodes.
SampledPath slice(const SampledPath& x, const Interval& w);

// Scalar path of the (r, c) entry.
SampledPath component(const SampledPath& x, int r, int c);

// Pointwise combinations on a shared grid.
SampledPath add_scaled(const SampledPath& x, const SampledPath& y, double scale);
SampledPath pointwise_sum(const std::vector<SampledPath>& paths);
SampledPath pointwise_product(const std::vector<SampledPath>& paths);  // scalar paths

// CSV layout: header "t,v_1,...,v_k", k = rows*cols, row-major values,
// '.' decimal, one node per line.  Shape is external: reader defaults to a
// 1 x k row unless rows/cols are passed.
SampledPath read_path_csv(const std::string& file, int rows = 0, int cols = 0);
void write_path_csv(const SampledPath& path, const std::string& file);

std::vector<double> uniform_times(double a, double b, std::size_t cells);

// Index of the grid node closest to t (clamped to the span).
std::size_t nearest_node(const SampledPath& path, double t);

}  // namespace yde
