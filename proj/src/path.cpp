#include "yde/path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace yde {

namespace {

double node_tol(double t) { return 1e-9 * std::max(1.0, std::fabs(t)); }

void format_g17(char* buf, std::size_t n, double v) { std::snprintf(buf, n, "%.17g", v); }

}  // namespace

Interval::Interval(double a_, double b_) : a(a_), b(b_) {
  if (!(a <= b)) throw std::invalid_argument("Interval: need a <= b");
}

SampledPath::SampledPath(std::vector<double> times, std::vector<double> data, int rows, int cols)
    : times_(std::move(times)), data_(std::move(data)), rows_(rows), cols_(cols) {
  if (rows_ < 1 || cols_ < 1) throw std::invalid_argument("SampledPath: bad shape");
  if (times_.size() < 2) throw std::invalid_argument("SampledPath: need at least 2 nodes");
  if (data_.size() != times_.size() * static_cast<std::size_t>(comps()))
    throw std::invalid_argument("SampledPath: data size does not match grid and shape");
  for (std::size_t i = 0; i + 1 < times_.size(); ++i)
    if (!(times_[i] < times_[i + 1]))
      throw std::invalid_argument("SampledPath: times must be strictly increasing");
  for (double v : data_)
    if (!std::isfinite(v)) throw std::invalid_argument("SampledPath: non-finite value");
}

SampledPath SampledPath::scalar(std::vector<double> times, std::vector<double> values) {
  return SampledPath(std::move(times), std::move(values), 1, 1);
}

SampledPath SampledPath::constant(const std::vector<double>& times, const Matrix& value) {
  const int r = static_cast<int>(value.rows()), c = static_cast<int>(value.cols());
  std::vector<double> data(times.size() * r * c);
  for (std::size_t i = 0; i < times.size(); ++i)
    for (int rr = 0; rr < r; ++rr)
      for (int cc = 0; cc < c; ++cc) data[i * r * c + rr * c + cc] = value(rr, cc);
  return SampledPath(times, std::move(data), r, c);
}

SampledPath SampledPath::time_path(const std::vector<double>& times) {
  return SampledPath(times, std::vector<double>(times.begin(), times.end()), 1, 1);
}

SampledPath SampledPath::sample(const std::vector<double>& times,
                                const std::function<Matrix(double)>& f) {
  if (times.empty()) throw std::invalid_argument("sample: empty grid");
  Matrix first = f(times.front());
  const int r = static_cast<int>(first.rows()), c = static_cast<int>(first.cols());
  std::vector<double> data(times.size() * r * c);
  for (std::size_t i = 0; i < times.size(); ++i) {
    Matrix v = (i == 0) ? first : f(times[i]);
    if (v.rows() != r || v.cols() != c) throw std::invalid_argument("sample: shape changed");
    for (int rr = 0; rr < r; ++rr)
      for (int cc = 0; cc < c; ++cc) data[i * r * c + rr * c + cc] = v(rr, cc);
  }
  return SampledPath(times, std::move(data), r, c);
}

double SampledPath::value1(std::size_t i) const {
  if (comps() != 1) throw std::invalid_argument("value1: path is not scalar");
  return data_[i];
}

Matrix SampledPath::value(std::size_t i) const {
  Matrix m(rows_, cols_);
  const double* p = node(i);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) m(r, c) = p[r * cols_ + c];
  return m;
}

Matrix SampledPath::value_at(double t) const {
  const Interval sp = span();
  if (t < sp.a - node_tol(t) || t > sp.b + node_tol(t))
    throw std::domain_error("value_at: t outside span");
  t = std::clamp(t, sp.a, sp.b);
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t hi = std::min<std::size_t>(times_.size() - 1, it - times_.begin());
  if (hi == 0) hi = 1;
  std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  Matrix a = value(lo), b = value(hi);
  return a + w * (b - a);
}

double SampledPath::incr_norm(std::size_t i, std::size_t j) const {
  const double* pi = node(i);
  const double* pj = node(j);
  double s = 0.0;
  const int k = comps();
  for (int c = 0; c < k; ++c) {
    const double d = pj[c] - pi[c];
    s += d * d;
  }
  return std::sqrt(s);
}

std::size_t SampledPath::locate(double t) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const double tol = node_tol(t);
  if (it != times_.end() && std::fabs(*it - t) <= tol)
    return static_cast<std::size_t>(it - times_.begin());
  if (it != times_.begin() && std::fabs(*(it - 1) - t) <= tol)
    return static_cast<std::size_t>(it - times_.begin()) - 1;
  throw std::domain_error("locate: t is not a grid node (insert nodes via merge_grids first)");
}

std::pair<std::size_t, std::size_t> SampledPath::window(const Interval& w) const {
  const std::size_t ia = locate(w.a), ib = locate(w.b);
  if (ia > ib) throw std::domain_error("window: inverted interval");
  return {ia, ib};
}

bool SampledPath::same_grid(const SampledPath& other) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (std::fabs(times_[i] - other.times_[i]) > node_tol(times_[i])) return false;
  return true;
}

SampledPath wiener_shift(const SampledPath& omega, double r) {
  const Interval sp = omega.span();
  if (r < sp.a - 1e-12 || r >= sp.b - 1e-12)
    throw std::domain_error("wiener_shift: shift leaves the grid span");
  const Matrix base = omega.value_at(r);
  std::vector<double> times;
  std::vector<double> data;
  times.push_back(0.0);
  const int k = omega.comps();
  Matrix z = Matrix::Zero(omega.rows(), omega.cols());
  for (int rr = 0; rr < omega.rows(); ++rr)
    for (int cc = 0; cc < omega.cols(); ++cc) data.push_back(0.0);
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (omega.t(i) <= r + node_tol(r)) continue;
    times.push_back(omega.t(i) - r);
    const double* p = omega.node(i);
    for (int c = 0; c < k; ++c) data.push_back(p[c] - base(c / omega.cols(), c % omega.cols()));
  }
  if (times.size() < 2) throw std::domain_error("wiener_shift: shifted grid too short");
  return SampledPath(std::move(times), std::move(data), omega.rows(), omega.cols());
}

std::vector<double> union_times(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    double t;
    if (j == b.size() || (i < a.size() && a[i] < b[j]))
      t = a[i++];
    else if (i == a.size() || b[j] < a[i])
      t = b[j++];
    else {
      t = a[i];
      ++i;
      ++j;
    }
    if (!out.empty() && t - out.back() <= node_tol(t)) continue;
    out.push_back(t);
  }
  return out;
}

SampledPath resample(const SampledPath& p, const std::vector<double>& times) {
  std::vector<double> data;
  data.reserve(times.size() * p.comps());
  for (double t : times) {
    Matrix v = p.value_at(t);
    for (int r = 0; r < p.rows(); ++r)
      for (int c = 0; c < p.cols(); ++c) data.push_back(v(r, c));
  }
  return SampledPath(times, std::move(data), p.rows(), p.cols());
}

SampledPath slice(const SampledPath& x, const Interval& w) {
  const auto [ia, ib] = x.window(w);
  if (ib - ia + 1 < 2) throw std::domain_error("slice: window has fewer than 2 nodes");
  std::vector<double> times(x.times().begin() + ia, x.times().begin() + ib + 1);
  std::vector<double> data(x.node(ia), x.node(ia) + (ib - ia + 1) * x.comps());
  return SampledPath(std::move(times), std::move(data), x.rows(), x.cols());
}

SampledPath component(const SampledPath& x, int r, int c) {
  if (r < 0 || r >= x.rows() || c < 0 || c >= x.cols())
    throw std::invalid_argument("component: index out of range");
  std::vector<double> vals(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) vals[i] = x.comp(i, r, c);
  return SampledPath::scalar(x.times(), std::move(vals));
}

std::pair<SampledPath, SampledPath> merge_grids(const SampledPath& x, const SampledPath& omega) {
  const Interval sx = x.span(), so = omega.span();
  if (std::fabs(sx.a - so.a) > node_tol(sx.a) || std::fabs(sx.b - so.b) > node_tol(sx.b))
    throw std::invalid_argument("merge_grids: spans differ");
  if (x.same_grid(omega)) return {x, omega};
  std::vector<double> u = union_times(x.times(), omega.times());
  return {resample(x, u), resample(omega, u)};
}

SampledPath add_scaled(const SampledPath& x, const SampledPath& y, double scale) {
  if (!x.same_grid(y) || x.rows() != y.rows() || x.cols() != y.cols())
    throw std::invalid_argument("add_scaled: paths must share grid and shape");
  std::vector<double> data(x.size() * x.comps());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double* a = x.node(i);
    const double* b = y.node(i);
    for (int c = 0; c < x.comps(); ++c) data[i * x.comps() + c] = a[c] + scale * b[c];
  }
  return SampledPath(x.times(), std::move(data), x.rows(), x.cols());
}

SampledPath pointwise_sum(const std::vector<SampledPath>& paths) {
  if (paths.empty()) throw std::invalid_argument("pointwise_sum: empty family");
  SampledPath acc = paths.front();
  for (std::size_t k = 1; k < paths.size(); ++k) acc = add_scaled(acc, paths[k], 1.0);
  return acc;
}

SampledPath pointwise_product(const std::vector<SampledPath>& paths) {
  if (paths.empty()) throw std::invalid_argument("pointwise_product: empty family");
  for (const auto& p : paths)
    if (!p.is_scalar()) throw std::invalid_argument("pointwise_product: scalar paths only");
  std::vector<double> data(paths.front().size(), 1.0);
  for (const auto& p : paths) {
    if (!p.same_grid(paths.front()))
      throw std::invalid_argument("pointwise_product: paths must share grid");
    for (std::size_t i = 0; i < p.size(); ++i) data[i] *= p.value1(i);
  }
  return SampledPath::scalar(paths.front().times(), std::move(data));
}

SampledPath read_path_csv(const std::string& file, int rows, int cols) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("read_path_csv: cannot open " + file);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_path_csv: empty file " + file);
  int k = 0;
  for (char ch : line)
    if (ch == ',') ++k;
  if (k < 1) throw std::runtime_error("read_path_csv: malformed header in " + file);
  if (rows == 0 && cols == 0) {
    rows = 1;
    cols = k;
  }
  if (rows * cols != k)
    throw std::runtime_error("read_path_csv: declared shape does not match column count");
  std::vector<double> times, data;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str())
        throw std::runtime_error("read_path_csv: bad number at line " + std::to_string(lineno));
      if (col == 0)
        times.push_back(v);
      else
        data.push_back(v);
      ++col;
    }
    if (col != k + 1)
      throw std::runtime_error("read_path_csv: wrong field count at line " + std::to_string(lineno));
  }
  return SampledPath(std::move(times), std::move(data), rows, cols);
}

void write_path_csv(const SampledPath& path, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("write_path_csv: cannot open " + file);
  out << "t";
  for (int c = 1; c <= path.comps(); ++c) out << ",v_" << c;
  out << "\n";
  char buf[40];
  for (std::size_t i = 0; i < path.size(); ++i) {
    format_g17(buf, sizeof buf, path.t(i));
    out << buf;
    const double* p = path.node(i);
    for (int c = 0; c < path.comps(); ++c) {
      format_g17(buf, sizeof buf, p[c]);
      out << "," << buf;
    }
    out << "\n";
  }
}

std::size_t nearest_node(const SampledPath& path, double t) {
  const auto& ts = path.times();
  auto it = std::lower_bound(ts.begin(), ts.end(), t);
  if (it == ts.end()) return ts.size() - 1;
  if (it == ts.begin()) return 0;
  const std::size_t hi = it - ts.begin();
  return (t - ts[hi - 1] <= ts[hi] - t) ? hi - 1 : hi;
}

std::vector<double> uniform_times(double a, double b, std::size_t cells) {
  if (!(b > a) || cells < 1) throw std::invalid_argument("uniform_times: bad arguments");
  std::vector<double> t(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i)
    t[i] = a + (b - a) * (static_cast<double>(i) / static_cast<double>(cells));
  t.back() = b;
  return t;
}

}  // namespace yde
