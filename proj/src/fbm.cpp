#include "yde/fbm.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace yde {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t member_seed(std::uint64_t seed, std::uint64_t i) {
  return splitmix64(seed ^ splitmix64(i * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL));
}

double Rng::uniform() {
  // 53 significant bits, never exactly 1.
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

double fgn_covariance(double hurst, double dt, std::int64_t k) {
  const double h2 = 2.0 * hurst;
  const double ak = std::abs(static_cast<double>(k));
  return 0.5 * std::pow(dt, h2) *
         (std::pow(ak + 1.0, h2) - 2.0 * std::pow(ak, h2) +
          std::pow(std::abs(ak - 1.0), h2));
}

namespace {

// FFTW plan creation is not thread-safe; execution of a created plan is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> fgn_cholesky(double hurst, double dt, std::size_t n, Rng& rng) {
  Matrix cov(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = fgn_covariance(hurst, dt, static_cast<std::int64_t>(i - j));
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("fbm_sample: increment covariance is not positive definite");
  Vector xi(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) xi(static_cast<Eigen::Index>(i)) = rng.normal();
  Vector z = llt.matrixL() * xi;
  return std::vector<double>(z.data(), z.data() + n);
}

std::vector<double> fgn_circulant(double hurst, double dt, std::size_t n, Rng& rng) {
  const std::size_t m = 2 * n;
  std::vector<double> first(m);
  for (std::size_t j = 0; j <= n; ++j) first[j] = fgn_covariance(hurst, dt, static_cast<std::int64_t>(j));
  for (std::size_t j = n + 1; j < m; ++j) first[j] = first[m - j];

  fftw_complex* buf;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
    plan = fftw_plan_dft_1d(static_cast<int>(m), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  struct Guard {
    fftw_complex* b;
    fftw_plan p;
    ~Guard() {
      std::lock_guard<std::mutex> lock(fftw_mutex());
      fftw_destroy_plan(p);
      fftw_free(b);
    }
  } guard{buf, plan};

  for (std::size_t j = 0; j < m; ++j) {
    buf[j][0] = first[j];
    buf[j][1] = 0.0;
  }
  fftw_execute(plan);

  std::vector<double> lam(m);
  double lmax = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    lam[j] = buf[j][0];
    lmax = std::max(lmax, lam[j]);
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (lam[j] < -1e-8 * std::max(1.0, lmax))
      throw std::runtime_error("fbm_sample: circulant embedding is not nonnegative definite");
    if (lam[j] < 0.0) lam[j] = 0.0;
  }

  // Hermitian spectral draw; the inverse transform is then real.
  // Draw order is fixed: xi_0, (xi_k, eta_k) ascending, xi_{m/2}.
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
  buf[0][0] = std::sqrt(lam[0]) * rng.normal() * inv_sqrt_m;
  buf[0][1] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double s = std::sqrt(0.5 * lam[k]) * inv_sqrt_m;
    const double re = s * rng.normal();
    const double im = s * rng.normal();
    buf[k][0] = re;
    buf[k][1] = im;
    buf[m - k][0] = re;
    buf[m - k][1] = -im;
  }
  buf[n][0] = std::sqrt(lam[n]) * rng.normal() * inv_sqrt_m;
  buf[n][1] = 0.0;

  fftw_execute(plan);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = buf[j][0];
  return out;
}

}  // namespace

SampledPath fbm_sample(const FbmSpec& spec) {
  if (!(spec.hurst > 0.5) || !(spec.hurst < 1.0))
    throw std::invalid_argument("fbm_sample: hurst must lie in (0.5, 1)");
  if (!(spec.dt > 0.0) || !(spec.horizon > 0.0))
    throw std::invalid_argument("fbm_sample: dt and horizon must be positive");
  const double steps = spec.horizon / spec.dt;
  const auto n = static_cast<std::size_t>(std::llround(steps));
  if (n < 1 || std::abs(steps - static_cast<double>(n)) > 1e-9 * std::max(1.0, steps))
    throw std::invalid_argument("fbm_sample: horizon must be a multiple of dt");

  FbmMethod method = spec.method;
  if (method == FbmMethod::automatic)
    method = n <= 512 ? FbmMethod::cholesky : FbmMethod::circulant;
  if (method == FbmMethod::cholesky && n > 4096)
    throw std::invalid_argument("fbm_sample: cholesky is limited to 4096 increments");

  Rng rng(spec.seed);
  const std::vector<double> incr = method == FbmMethod::cholesky
                                       ? fgn_cholesky(spec.hurst, spec.dt, n, rng)
                                       : fgn_circulant(spec.hurst, spec.dt, n, rng);

  std::vector<double> times(n + 1), vals(n + 1);
  times[0] = 0.0;
  vals[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    times[i + 1] = spec.dt * static_cast<double>(i + 1);
    vals[i + 1] = vals[i] + incr[i];
  }
  times[n] = spec.horizon;
  return SampledPath(std::move(times), std::move(vals), 1, 1);
}

}  // namespace yde
