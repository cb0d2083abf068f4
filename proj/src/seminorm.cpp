#include "yde/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace yde {

namespace {

// Direction-change nodes of a scalar path segment, endpoints always kept.
// Plateaus collapse onto their last node.  For p >= 1 this preserves the
// exact supremum: |x+y|^p >= |x|^p + |y|^p when x, y share a sign.
std::vector<std::size_t> turning_points(const SampledPath& path, std::size_t ia, std::size_t ib) {
  std::vector<std::size_t> keep;
  keep.push_back(ia);
  int last_sign = 0;
  std::size_t pending = ia;
  for (std::size_t j = ia + 1; j <= ib; ++j) {
    const double d = path.value1(j) - path.value1(pending);
    const int s = (d > 0.0) - (d < 0.0);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) keep.push_back(pending);
    last_sign = s;
    pending = j;
  }
  keep.push_back(ib);
  return keep;
}

double pvar_dp(const SampledPath& path, double p, const std::vector<std::size_t>& nodes) {
  const std::size_t m = nodes.size();
  if (m < 2) return 0.0;
  std::vector<double> best(m, 0.0);
  for (std::size_t j = 1; j < m; ++j) {
    double w = 0.0;
    const std::size_t nj = nodes[j];
#if defined(_OPENMP)
#pragma omp parallel for reduction(max : w) schedule(static) if (j > 4096)
#endif
    for (std::size_t i = 0; i < j; ++i) {
      const double cand = best[i] + std::pow(path.incr_norm(nodes[i], nj), p);
      if (cand > w) w = cand;
    }
    best[j] = w;
  }
  return std::pow(best[m - 1], 1.0 / p);
}

}  // namespace

double p_variation_seminorm(const SampledPath& path, double p, const Interval& window,
                            SeminormCache* cache) {
  if (!(p >= 1.0)) throw std::invalid_argument("p_variation_seminorm: need p >= 1");
  const auto [ia, ib] = path.window(window);
  if (ib - ia < 1) return 0.0;
  if (cache) {
    std::lock_guard<std::mutex> lock(cache->mu);
    auto it = cache->values.find({p, ia, ib});
    if (it != cache->values.end()) return it->second;
  }
  double out;
  if (path.is_scalar()) {
    out = pvar_dp(path, p, turning_points(path, ia, ib));
  } else {
    std::vector<std::size_t> nodes(ib - ia + 1);
    for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = ia + i;
    out = pvar_dp(path, p, nodes);
  }
  if (cache) {
    std::lock_guard<std::mutex> lock(cache->mu);
    cache->values.emplace(std::make_tuple(p, ia, ib), out);
  }
  return out;
}

double p_variation_seminorm(const SampledPath& path, double p) {
  return p_variation_seminorm(path, p, path.span());
}

double holder_seminorm(const SampledPath& path, double alpha, const Interval& window) {
  if (window.length() == 0.0) return 0.0;
  return holder_module(path, alpha, window.length(), window);
}

double holder_seminorm(const SampledPath& path, double alpha) {
  return holder_seminorm(path, alpha, path.span());
}

double holder_module(const SampledPath& path, double alpha, double delta, const Interval& window) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("holder_module: need alpha in (0,1]");
  if (!(delta > 0.0)) throw std::invalid_argument("holder_module: need delta > 0");
  const auto [ia, ib] = path.window(window);
  if (ib - ia < 1) return 0.0;
  const double dcap = delta * (1.0 + 1e-12);
  double sup = 0.0;
#if defined(_OPENMP)
#pragma omp parallel for reduction(max : sup) schedule(dynamic, 64) if (ib - ia > 2048)
#endif
  for (std::size_t i = ia; i < ib; ++i) {
    for (std::size_t j = i + 1; j <= ib; ++j) {
      const double dt = path.t(j) - path.t(i);
      if (dt > dcap) break;
      const double r = path.incr_norm(i, j) / std::pow(dt, alpha);
      if (r > sup) sup = r;
    }
  }
  return sup;
}

double holder_module(const SampledPath& path, double alpha, double delta) {
  return holder_module(path, alpha, delta, path.span());
}

bool PrecompactnessReport::bounded(double threshold) const {
  if (!std::isfinite(sup_initial)) return false;
  if (module_sup.empty()) return false;
  return modules_decreasing && module_sup.back() <= threshold;
}

PrecompactnessReport precompactness_check(const std::vector<SampledPath>& family, double alpha,
                                          std::vector<double> deltas) {
  if (family.empty()) throw std::invalid_argument("precompactness_check: empty family");
  if (deltas.empty()) throw std::invalid_argument("precompactness_check: no deltas");
  std::sort(deltas.begin(), deltas.end(), std::greater<double>());
  PrecompactnessReport rep;
  rep.deltas = deltas;
  for (const auto& u : family) {
    double s = 0.0;
    for (int c = 0; c < u.comps(); ++c) s += u.node(0)[c] * u.node(0)[c];
    rep.sup_initial = std::max(rep.sup_initial, std::sqrt(s));
  }
  for (double d : deltas) {
    double sup = 0.0;
    for (const auto& u : family) sup = std::max(sup, holder_module(u, alpha, d));
    rep.module_sup.push_back(sup);
  }
  rep.modules_decreasing = true;
  for (std::size_t i = 1; i < rep.module_sup.size(); ++i)
    if (rep.module_sup[i] > rep.module_sup[i - 1] * (1.0 + 1e-12)) rep.modules_decreasing = false;
  return rep;
}

namespace reference {

double p_variation_seminorm(const SampledPath& path, double p, const Interval& window) {
  if (!(p >= 1.0)) throw std::invalid_argument("p_variation_seminorm: need p >= 1");
  const auto [ia, ib] = path.window(window);
  if (ib - ia < 1) return 0.0;
  const std::size_t m = ib - ia + 1;
  std::vector<double> best(m, 0.0);
  for (std::size_t j = 1; j < m; ++j) {
    double w = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      const double cand = best[i] + std::pow(path.incr_norm(ia + i, ia + j), p);
      if (cand > w) w = cand;
    }
    best[j] = w;
  }
  return std::pow(best[m - 1], 1.0 / p);
}

double holder_seminorm(const SampledPath& path, double alpha, const Interval& window) {
  const auto [ia, ib] = path.window(window);
  double sup = 0.0;
  for (std::size_t i = ia; i < ib; ++i)
    for (std::size_t j = i + 1; j <= ib; ++j)
      sup = std::max(sup, path.incr_norm(i, j) / std::pow(path.t(j) - path.t(i), alpha));
  return sup;
}

}  // namespace reference

}  // namespace yde
