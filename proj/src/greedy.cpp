#include "yde/greedy.hpp"

#include <cmath>
#include <stdexcept>

namespace yde {

namespace {

// Prefix p-variation powers from a fixed anchor: extending the window right
// by one node costs O(window); the whole sweep for one greedy interval is
// the same O(m^2) DP the seminorm uses, organized incrementally.
struct PrefixPvar {
  const SampledPath& omega;
  double p;
  std::size_t anchor;
  std::vector<double> best;  // best[j - anchor] = p-var^p over [anchor, j]

  PrefixPvar(const SampledPath& om, double p_, std::size_t a) : omega(om), p(p_), anchor(a) {
    best.assign(1, 0.0);
  }
  double extend_to(std::size_t j) {
    while (anchor + best.size() <= j) {
      const std::size_t nj = anchor + best.size();
      double w = 0.0;
      for (std::size_t i = 0; i < best.size(); ++i) {
        const double cand = best[i] + std::pow(omega.incr_norm(anchor + i, nj), p);
        if (cand > w) w = cand;
      }
      best.push_back(w);
    }
    return best[j - anchor];
  }
};

}  // namespace

GreedyPartition greedy_partition(const SampledPath& omega, double p, double budget,
                                 const Interval& window) {
  if (!(p >= 1.0)) throw std::invalid_argument("greedy_partition: need p >= 1");
  if (!(budget > 0.0)) throw std::domain_error("greedy_partition: need budget > 0");
  const auto [ia, ib] = omega.window(window);
  if (ib <= ia) throw std::invalid_argument("greedy_partition: degenerate window");

  GreedyPartition part;
  part.p = p;
  part.budget = budget;
  part.tau.push_back(omega.t(ia));
  part.idx.push_back(ia);

  const double tol = 1e-10;
  std::size_t anchor = ia;
  while (anchor < ib) {
    PrefixPvar prefix(omega, p, anchor);
    std::size_t pick = anchor;
    double attained = 0.0;
    for (std::size_t j = anchor + 1; j <= ib; ++j) {
      const double g = (omega.t(j) - omega.t(anchor)) + std::pow(prefix.extend_to(j), 1.0 / p);
      if (g <= budget + tol) {
        pick = j;
        attained = g;
        continue;
      }
      break;
    }
    if (pick == anchor) {  // one grid cell already exceeds the budget
      pick = anchor + 1;
      attained = (omega.t(pick) - omega.t(anchor)) + omega.incr_norm(anchor, pick);
      part.overshoot = true;
    }
    part.tau.push_back(omega.t(pick));
    part.idx.push_back(pick);
    part.attained.push_back(attained);
    anchor = pick;
  }
  return part;
}

double greedy_count_bound(double p, double budget, double window_length, double omega_pvar) {
  return std::pow(2.0 / budget, p) * (std::pow(window_length, p) + std::pow(omega_pvar, p));
}

}  // namespace yde
