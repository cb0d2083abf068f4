#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "yde/path.hpp"

namespace yde {

// SplitMix64 finalizer; stateless, used to decorrelate derived seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for ensemble member i: reproducible, order-free, no overlap for
// i != j in practice (finalizer of seed + i * odd constant).
std::uint64_t member_seed(std::uint64_t seed, std::uint64_t i);

/* mt19937_64 with an explicit Box-Muller normal on top.  The standard
 * library's normal_distribution is implementation-defined; this one gives
 * identical streams for identical seeds on any platform. */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform();  // [0, 1)
  double normal();   // standard normal
 private:
  std::mt19937_64 gen_;
  double spare_{0.0};
  bool has_spare_{false};
};

enum class FbmMethod { automatic, cholesky, circulant };

// Fractional Brownian motion on a uniform grid over [0, horizon].
// hurst must lie in (0.5, 1): the rough half is out of scope here.
struct FbmSpec {
  double hurst{0.7};
  double dt{1.0 / 128.0};
  double horizon{1.0};
  std::uint64_t seed{1};
  FbmMethod method{FbmMethod::automatic};
};

/* Exact-in-law Gaussian sample: increments have covariance
 * 0.5 dt^{2H} (|j+1|^{2H} - 2|j|^{2H} + |j-1|^{2H}).  Cholesky factors the
 * n x n increment covariance (valid for n <= 4096); circulant embedding
 * (Davies-Harte) handles long grids via FFT and checks the embedding
 * eigenvalues for nonnegativity.  automatic picks cholesky for n <= 512.
 * Identical spec => identical path, bit for bit. */
SampledPath fbm_sample(const FbmSpec& spec);

// Increment-covariance of fractional Gaussian noise at lag k (unit variance
// per unit time, step dt).
double fgn_covariance(double hurst, double dt, std::int64_t k);

}  // namespace yde
