#pragma once

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "yde/path.hpp"

namespace yde {

// Shared memo for repeated window norms of one fixed path; keyed by
// (p, first index, last index), internally synchronized.
struct SeminormCache {
  std::mutex mu;
  std::map<std::tuple<double, std::size_t, std::size_t>, double> values;
};

/* Grid p-variation seminorm: sup over subpartitions of the window's grid
 * nodes of (sum |increment|^p)^(1/p).  Exact on the grid via the O(n^2)
 * subset DP; for scalar paths the DP runs on direction-change nodes only,
 * which is lossless for p >= 1 (same-sign increments merge superadditively).
 * Degenerate windows give 0.  Nonincreasing in p. */
double p_variation_seminorm(const SampledPath& path, double p, const Interval& window,
                            SeminormCache* cache = nullptr);
double p_variation_seminorm(const SampledPath& path, double p);

// sup over node pairs s < t in the window of |u(t)-u(s)| / (t-s)^alpha.
double holder_seminorm(const SampledPath& path, double alpha, const Interval& window);
double holder_seminorm(const SampledPath& path, double alpha);

// Holder module m(u, delta): the same sup restricted to t - s <= delta.
double holder_module(const SampledPath& path, double alpha, double delta, const Interval& window);
double holder_module(const SampledPath& path, double alpha, double delta);

struct PrecompactnessReport {
  double sup_initial{0.0};          // sup over the family of |u(a)|
  std::vector<double> deltas;       // probed widths, decreasing
  std::vector<double> module_sup;   // sup over the family of m(u, delta)
  bool modules_decreasing{false};   // nonincreasing along shrinking delta
  bool bounded(double threshold) const;
};

// Equicontinuity probe for a family on a common span: finite initial norms
// plus Holder modules vanishing with delta is the compactness criterion.
PrecompactnessReport precompactness_check(const std::vector<SampledPath>& family, double alpha,
                                          std::vector<double> deltas);

namespace reference {
// Plain O(n^2) implementations, no pruning, no parallelism.  Kept as the
// baseline the fast kernels are tested and benchmarked against.
double p_variation_seminorm(const SampledPath& path, double p, const Interval& window);
double holder_seminorm(const SampledPath& path, double alpha, const Interval& window);
}  // namespace reference

}  // namespace yde
