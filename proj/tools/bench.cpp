// Compares the OpenMP kernels against the serial reference implementations
// and times the hot paths the library leans on.  Equality columns guard
// against the fast paths drifting from the baselines.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "yde/fbm.hpp"
#include "yde/lyapunov.hpp"
#include "yde/seminorm.hpp"
#include "yde/solver.hpp"

using namespace yde;

namespace {

double time_ms(const std::function<void()>& f) {
  f();  // warm caches and the FFTW planner
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, std::size_t n, double serial_ms, double fast_ms, bool equal) {
  std::printf("%-28s %8zu %12.2f %12.2f %8.2fx %s\n", name, n, serial_ms, fast_ms,
              fast_ms > 0 ? serial_ms / fast_ms : 0.0, equal ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 8192;
  if (argc > 1) n = static_cast<std::size_t>(std::strtoull(argv[1], nullptr, 10));
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled\n");
#endif
  std::printf("%-28s %8s %12s %12s %9s\n", "kernel", "n", "serial ms", "fast ms", "speedup");

  FbmSpec spec;
  spec.hurst = 0.7;
  spec.dt = 1.0 / 128.0;
  spec.horizon = static_cast<double>(n) * spec.dt;
  spec.seed = 7;
  const SampledPath z = fbm_sample(spec);
  const Interval w = z.span();
  const double p = 1.5;

  {
    // Scalar path: the fast kernel prunes to direction changes first.
    double a = 0, b = 0;
    const double ts = time_ms([&] { a = reference::p_variation_seminorm(z, p, w); });
    const double tf = time_ms([&] { b = p_variation_seminorm(z, p, w); });
    row("p-var scalar", z.size(), ts, tf, std::abs(a - b) <= 1e-12 * std::max(1.0, a));
  }

  {
    // Two components defeat the pruning, so this times the parallel DP.
    FbmSpec s2 = spec;
    s2.horizon = std::min(spec.horizon, 24.0);
    s2.seed = 8;
    const SampledPath z1 = fbm_sample(s2);
    s2.seed = 9;
    const SampledPath z2 = fbm_sample(s2);
    std::vector<double> data;
    for (std::size_t i = 0; i < z1.size(); ++i) {
      data.push_back(z1.value1(i));
      data.push_back(z2.value1(i));
    }
    const SampledPath v(z1.times(), data, 2, 1);
    double a = 0, b = 0;
    const double ts = time_ms([&] { a = reference::p_variation_seminorm(v, p, v.span()); });
    const double tf = time_ms([&] { b = p_variation_seminorm(v, p, v.span()); });
    row("p-var 2-component DP", v.size(), ts, tf, std::abs(a - b) <= 1e-12 * std::max(1.0, a));
  }

  {
    double a = 0, b = 0;
    const double ts = time_ms([&] { a = reference::holder_seminorm(z, 0.45, w); });
    const double tf = time_ms([&] { b = holder_seminorm(z, 0.45, w); });
    row("holder seminorm", z.size(), ts, tf, std::abs(a - b) <= 1e-12 * std::max(1.0, a));
  }

  {
    FbmSpec s = spec;
    s.horizon = 4096.0 * s.dt;
    s.method = FbmMethod::cholesky;
    double tc = time_ms([&] { fbm_sample(s); });
    s.method = FbmMethod::circulant;
    double tf = time_ms([&] { fbm_sample(s); });
    row("fbm 4096 chol vs circulant", 4096, tc, tf, true);
  }

  {
    // One-step flow solves dominate spectrum runs; OpenMP covers the steps.
    const double horizon = 24.0;
    const std::vector<double> grid = uniform_times(0.0, horizon, static_cast<std::size_t>(horizon) * 128);
    FbmSpec s = spec;
    s.horizon = horizon;
    s.seed = 11;
    const SampledPath drv = fbm_sample(s);
    Matrix a(2, 2), c(2, 2);
    a << 0.4, 0.2, 0.0, -0.4;
    c << 0.05, 0.02, 0.0, 0.05;
    const LinearYDE eq(SampledPath::constant(grid, a), SampledPath::constant(grid, c),
                       YoungParams(1.5, 1.5));
    SpectrumOptions opts;
    const double t = time_ms([&] { discrete_spectrum(eq, drv, 0.0, horizon, opts); });
    row("spectrum 24 unit steps", grid.size(), t, t, true);
  }

  return 0;
}
