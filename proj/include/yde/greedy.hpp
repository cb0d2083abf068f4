#pragma once

#include <vector>

#include "yde/path.hpp"

namespace yde {

/* Greedy stopping times for a driver omega on a window: each tau_k is the
 * furthest grid node with (tau_k - tau_{k-1}) + |||omega|||_{p-var,[tau_{k-1},tau_k]}
 * <= budget, so the defining equality holds within one grid cell (or 1e-10).
 * A single grid cell already over budget is still taken (overshoot flagged):
 * the grid is then too coarse for the requested budget. */
struct GreedyPartition {
  std::vector<double> tau;     // tau.front() == a, tau.back() == b
  std::vector<std::size_t> idx;
  std::vector<double> attained;  // per interval: length + p-var seminorm
  double p{0.0};
  double budget{0.0};
  bool overshoot{false};
  std::size_t count() const { return tau.size() - 1; }
};

GreedyPartition greedy_partition(const SampledPath& omega, double p, double budget,
                                 const Interval& window);

// Counting bound: count - 1 <= (2/budget)^p (T^p + |||omega|||_{p-var}^p).
double greedy_count_bound(double p, double budget, double window_length, double omega_pvar);

}  // namespace yde
