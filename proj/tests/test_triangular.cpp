#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "yde/fbm.hpp"
#include "yde/lyapunov.hpp"
#include "yde/triangular.hpp"

using namespace yde;

namespace {

SampledPath zero_driver(const std::vector<double>& times) {
  return SampledPath::constant(times, Matrix::Zero(1, 1));
}

SampledPath wavy_driver(const std::vector<double>& times) {
  return SampledPath::sample(times, [](double t) {
    return (std::sin(3.0 * t) + 0.4 * t) * Matrix::Identity(1, 1);
  });
}

SampledPath upper_constant(const std::vector<double>& times, const Matrix& m) {
  return SampledPath::constant(times, m);
}

}  // namespace

TEST_CASE("diagonal means separate convergent and oscillating entries") {
  // Three diagonals on [0, 50]: a constant, a fast sine whose mean dies like
  // 1/t, and a slow sine whose running mean keeps swinging at O(1) scale.
  const auto times = uniform_times(0.0, 50.0, 800);
  const auto A = SampledPath::sample(times, [](double t) {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 0.7;
    m(1, 1) = std::sin(2.0 * M_PI * t);
    m(2, 2) = std::sin(M_PI * t / 10.0);
    return m;
  });
  const TriangularYDE eq(A, SampledPath::constant(times, Matrix::Zero(3, 3)),
                         YoungParams(1.5, 1.5));

  const DiagonalMeans dm = diagonal_means(eq, {0.0, 50.0}, 0.02);
  REQUIRE(dm.series.size() == 3);
  REQUIRE(dm.finals.size() == 3);
  CHECK(dm.tol == 0.02);
  CHECK(dm.times.size() == 800);
  CHECK(dm.times.front() == doctest::Approx(0.0625));
  CHECK(dm.times.back() == doctest::Approx(50.0));

  // Constant diagonal: every running mean equals the constant.
  for (double v : dm.series[0]) CHECK(v == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(dm.finals[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(dm.exact[0]);

  // Full periods of sin(2 pi t) cancel exactly under the trapezoid rule.
  CHECK(std::abs(dm.finals[1]) < 1e-10);
  CHECK(dm.exact[1]);

  // Period-20 sine: mean at t = 50 is (10/pi)(1 - cos 5pi)/50 = 0.4/pi, and
  // the trailing-half oscillation is ~0.2, far beyond tol.
  CHECK(dm.finals[2] == doctest::Approx(0.4 / M_PI).epsilon(1e-4));
  CHECK_FALSE(dm.exact[2]);

  CHECK_FALSE(regularity_criterion(eq, {0.0, 50.0}, 0.02));
}

TEST_CASE("spectrum sorts diagonal means and keeps diagonal order in abar") {
  const auto times = uniform_times(0.0, 50.0, 800);
  const auto A = SampledPath::sample(times, [](double t) {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 0.7;
    m(1, 1) = std::sin(2.0 * M_PI * t);
    m(2, 2) = std::sin(M_PI * t / 10.0);
    m(0, 1) = 0.5;  // upper entries never enter the spectrum
    m(1, 2) = std::sin(t);
    return m;
  });
  Matrix cu = Matrix::Zero(3, 3);
  cu(0, 1) = 0.3;
  const TriangularYDE eq(A, upper_constant(times, cu), YoungParams(1.5, 1.5));

  const TriangularSpectrum sp = triangular_spectrum(eq, {0.0, 50.0}, 0.02);
  REQUIRE(sp.lambdas.size() == 3);
  CHECK(sp.lambdas[0] == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(sp.lambdas[1] == doctest::Approx(0.4 / M_PI).epsilon(1e-4));
  CHECK(std::abs(sp.lambdas[2]) < 1e-10);
  CHECK(sp.abar[0] == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(std::abs(sp.abar[1]) < 1e-10);
  CHECK(sp.abar[2] == doctest::Approx(0.4 / M_PI).epsilon(1e-4));
  CHECK(sp.exact[0]);
  CHECK(sp.exact[1]);
  CHECK_FALSE(sp.exact[2]);
  CHECK_FALSE(sp.all_exact);

  // All-constant system: spectrum is exact and the criterion holds.
  const auto ts2 = uniform_times(0.0, 10.0, 200);
  Matrix a2 = Matrix::Zero(2, 2);
  a2(0, 0) = 3.0;
  a2(1, 1) = -1.0;
  a2(0, 1) = 0.4;
  const TriangularYDE eq2(upper_constant(ts2, a2),
                          SampledPath::constant(ts2, Matrix::Zero(2, 2)),
                          YoungParams(1.5, 1.5));
  const TriangularSpectrum sp2 = triangular_spectrum(eq2, {0.0, 10.0});
  CHECK(sp2.lambdas[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sp2.lambdas[1] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(sp2.all_exact);
  CHECK(regularity_criterion(eq2, {0.0, 10.0}));
}

TEST_CASE("scalar closed form hits frozen exponentials") {
  const auto times = uniform_times(0.0, 1.0, 1024);
  const auto omega = wavy_driver(times);

  // Pure drift a = 2: z = z0 e^{2t}.
  const auto za = solve_1d_explicit(SampledPath::constant(times, 2.0 * Matrix::Identity(1, 1)),
                                    zero_driver(times), omega, 0.5, {0.0, 1.0});
  CHECK(za.value1(0) == 0.5);
  CHECK(za.value1(512) == doctest::Approx(0.5 * std::exp(1.0)).epsilon(1e-11));
  CHECK(za.value1(1024) == doctest::Approx(3.694528049465325).epsilon(1e-11));

  // Pure noise c = 1: z = z0 e^{omega(t) - omega(0)}, increments telescope.
  const auto zc = solve_1d_explicit(zero_driver(times),
                                    SampledPath::constant(times, Matrix::Identity(1, 1)),
                                    omega, 2.0, {0.0, 1.0});
  for (std::size_t j = 0; j < zc.size(); j += 64) {
    const double expect = 2.0 * std::exp(omega.value1(j) - omega.value1(0));
    CHECK(zc.value1(j) == doctest::Approx(expect).epsilon(1e-11));
    CHECK(zc.value1(j) > 0.0);
  }

  CHECK_THROWS_AS(solve_1d_explicit(SampledPath::constant(times, Matrix::Zero(2, 1)),
                                    zero_driver(times), omega, 1.0, {0.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("scalar closed form tracks the iterative solver on a rough driver") {
  FbmSpec spec;
  spec.hurst = 0.75;
  spec.dt = 1.0 / 4096;
  spec.horizon = 1.0;
  spec.seed = 7;
  const SampledPath omega = fbm_sample(spec);
  const auto& ts = omega.times();

  const auto a = SampledPath::constant(ts, 0.4 * Matrix::Identity(1, 1));
  const auto c = SampledPath::constant(ts, 0.3 * Matrix::Identity(1, 1));
  const auto ze = solve_1d_explicit(a, c, omega, 1.0, {0.0, 1.0});

  const LinearYDE eq(a, c, YoungParams(1.5, 1.5));
  Vector x0(1);
  x0 << 1.0;
  const SolveReport rep = picard_solve(eq, x0, omega, {0.0, 1.0});
  REQUIRE(rep.solution.size() == ze.size());
  double worst = 0.0;
  for (std::size_t j = 0; j < ze.size(); ++j) {
    const double denom = std::max(1.0, std::abs(ze.value1(j)));
    worst = std::max(worst, std::abs(rep.solution.comp(j, 0, 0) - ze.value1(j)) / denom);
  }
  // The two discretizations share left-point noise sums and differ only by
  // the cell-level rational-vs-exponential mismatch, cubic in the increment.
  CHECK(worst < 1e-6);
}

TEST_CASE("nonhomogeneous closed form degenerates correctly") {
  const auto times = uniform_times(0.0, 1.0, 256);
  const auto omega = wavy_driver(times);
  const auto a = SampledPath::sample(times, [](double t) {
    return (0.2 * std::sin(t)) * Matrix::Identity(1, 1);
  });
  const auto c = SampledPath::constant(times, 0.1 * Matrix::Identity(1, 1));
  const auto zero = zero_driver(times);

  // No forcing: reduces to the homogeneous closed form, same arithmetic.
  const auto xh = solve_1d_nonhomogeneous(a, c, zero, zero, omega, 0.7, {0.0, 1.0});
  const auto ze = solve_1d_explicit(a, c, omega, 0.7, {0.0, 1.0});
  REQUIRE(xh.size() == ze.size());
  for (std::size_t j = 0; j < xh.size(); ++j) CHECK(xh.value1(j) == ze.value1(j));

  // Pure integrator: x = x0 + left sum of h1, frozen value (n-1)/(2n).
  const auto tgrid = uniform_times(0.0, 1.0, 1000);
  const auto ramp = SampledPath::time_path(tgrid);
  const auto x1 = solve_1d_nonhomogeneous(zero_driver(tgrid), zero_driver(tgrid), ramp,
                                          zero_driver(tgrid), SampledPath::time_path(tgrid),
                                          0.25, {0.0, 1.0});
  CHECK(x1.value1(1000) == doctest::Approx(0.25 + 999.0 / 2000.0).epsilon(1e-12));

  // Pure noise forcing: x = x0 + omega(t) - omega(0).
  const auto one = SampledPath::constant(times, Matrix::Identity(1, 1));
  const auto x2 = solve_1d_nonhomogeneous(zero, zero, zero, one, omega, -0.5, {0.0, 1.0});
  for (std::size_t j = 0; j < x2.size(); j += 32) {
    const double expect = -0.5 + omega.value1(j) - omega.value1(0);
    CHECK(x2.value1(j) == doctest::Approx(expect).epsilon(1e-12));
  }

  CHECK_THROWS_AS(solve_1d_nonhomogeneous(a, c, SampledPath::constant(times, Matrix::Zero(2, 2)),
                                          zero, omega, 0.0, {0.0, 1.0}),
                  std::invalid_argument);

  // Homogeneous factor underflows to subnormal, reciprocal overflows.
  const auto tiny = uniform_times(0.0, 1.0, 100);
  CHECK_THROWS_AS(solve_1d_nonhomogeneous(SampledPath::constant(tiny, -800.0 * Matrix::Identity(1, 1)),
                                          zero_driver(tiny), SampledPath::constant(tiny, Matrix::Identity(1, 1)),
                                          zero_driver(tiny), SampledPath::time_path(tiny), 1.0, {0.0, 1.0}),
                  std::runtime_error);
}

TEST_CASE("nonhomogeneous closed form matches an augmented linear system") {
  // Embed dx = (a x + h1) dt + (c x + h2) domega as the first component of a
  // 2x2 system acting on (x, 1).
  const auto times = uniform_times(0.0, 1.0, 2048);
  const auto omega = wavy_driver(times);
  const auto A = SampledPath::sample(times, [](double t) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 0.3 + 0.2 * std::sin(2.0 * M_PI * t);
    m(0, 1) = std::cos(t);
    return m;
  });
  const auto C = SampledPath::sample(times, [](double t) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 0.15;
    m(0, 1) = 0.1 * std::sin(t);
    return m;
  });

  const auto xh = solve_1d_nonhomogeneous(component(A, 0, 0), component(C, 0, 0),
                                          component(A, 0, 1), component(C, 0, 1),
                                          omega, 0.25, {0.0, 1.0});

  const LinearYDE eq(A, C, YoungParams(1.5, 1.5));
  Vector x0(2);
  x0 << 0.25, 1.0;
  const SolveReport rep = picard_solve(eq, x0, omega, {0.0, 1.0});
  REQUIRE(rep.solution.size() == xh.size());
  for (std::size_t j = 0; j < xh.size(); j += 16) {
    CHECK(rep.solution.comp(j, 1, 0) == doctest::Approx(1.0).epsilon(1e-12));
    const double denom = std::max(1.0, std::abs(xh.value1(j)));
    CHECK(std::abs(rep.solution.comp(j, 0, 0) - xh.value1(j)) / denom < 5e-3);
  }
}

TEST_CASE("fundamental matrix of a diagonal system splits into scalar factors") {
  const auto times = uniform_times(0.0, 4.0, 256);
  const auto omega = wavy_driver(times);
  const auto A = SampledPath::sample(times, [](double t) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 0.5;
    m(1, 1) = -0.3 + 0.1 * std::cos(t);
    return m;
  });
  Matrix cd = Matrix::Zero(2, 2);
  cd(0, 0) = 0.2;
  cd(1, 1) = 0.1;
  const TriangularYDE eq(A, upper_constant(times, cd), YoungParams(1.5, 1.5));

  const TriangularFlow fl = triangular_fundamental(eq, omega, 2.0, 4.0);
  REQUIRE(fl.X.rows() == 2);
  REQUIRE(fl.X.size() == times.size());
  CHECK(fl.X.t(0) == 0.0);
  CHECK(fl.X.comp(0, 0, 0) == 1.0);
  CHECK(fl.X.comp(0, 1, 1) == 1.0);

  const auto y0 = solve_1d_explicit(component(A, 0, 0), component(eq.C, 0, 0), omega, 1.0,
                                    {0.0, 4.0});
  const auto y1 = solve_1d_explicit(component(A, 1, 1), component(eq.C, 1, 1), omega, 1.0,
                                    {0.0, 4.0});
  for (std::size_t j = 0; j < times.size(); ++j) {
    CHECK(fl.X.comp(j, 0, 1) == 0.0);
    CHECK(fl.X.comp(j, 1, 0) == 0.0);
    CHECK(fl.X.comp(j, 0, 0) == doctest::Approx(y0.value1(j)).epsilon(1e-13));
    CHECK(fl.X.comp(j, 1, 1) == doctest::Approx(y1.value1(j)).epsilon(1e-13));
  }
  CHECK(fl.base_infinite.cwiseAbs().maxCoeff() == 0.0);
  CHECK(fl.tail_bound.cwiseAbs().maxCoeff() == 0.0);
  CHECK(fl.warnings.empty());
  REQUIRE(fl.diagonal_mean_final.size() == 2);
  CHECK(fl.diagonal_mean_final[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fl.diagonal_mean_final[1] ==
        doctest::Approx(-0.3 + 0.05 * std::sin(2.0)).epsilon(1e-5));
}

TEST_CASE("coupled entry anchored at the start reproduces the two-exponential formula") {
  // a11 = 1 below a22 = 2: the mean gap points forward, so x01 integrates
  // from 0 and equals e^{2t} - e^t.
  const auto times = uniform_times(0.0, 2.0, 8192);
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 1.0;
  a(1, 1) = 2.0;
  const TriangularYDE eq(upper_constant(times, a),
                         SampledPath::constant(times, Matrix::Zero(2, 2)),
                         YoungParams(1.5, 1.5));
  const TriangularFlow fl = triangular_fundamental(eq, zero_driver(times), 1.0, 2.0);

  CHECK(fl.base_infinite.cwiseAbs().maxCoeff() == 0.0);
  CHECK(fl.warnings.empty());
  const std::size_t j1 = nearest_node(fl.X, 1.0);
  const std::size_t j2 = nearest_node(fl.X, 2.0);
  CHECK(fl.X.comp(j1, 0, 1) == doctest::Approx(4.670774270471605).epsilon(1e-3));
  CHECK(fl.X.comp(j2, 0, 1) ==
        doctest::Approx(std::exp(4.0) - std::exp(2.0)).epsilon(1e-3));
  CHECK(fl.X.comp(j1, 1, 1) == doctest::Approx(std::exp(2.0)).epsilon(1e-9));
  CHECK(fl.X.comp(j1, 1, 0) == 0.0);
}

TEST_CASE("coupled entry anchored at t_max decays at the slow rate") {
  // a11 = 2 above a22 = 1: the (0,1) integral is anchored at t_max and the
  // entry follows -e^t plus the truncation term e^{2t - t_max}.
  const auto times = uniform_times(0.0, 8.0, 2048);
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(0, 1) = 1.0;
  a(1, 1) = 1.0;
  const TriangularYDE eq(upper_constant(times, a),
                         SampledPath::constant(times, Matrix::Zero(2, 2)),
                         YoungParams(1.5, 1.5));
  const TriangularFlow fl = triangular_fundamental(eq, zero_driver(times), 4.0, 8.0);

  CHECK(fl.base_infinite(0, 1) == 1.0);
  CHECK(fl.base_infinite(0, 0) == 0.0);
  CHECK(fl.base_infinite(1, 1) == 0.0);
  CHECK(fl.warnings.empty());
  REQUIRE(fl.diagonal_mean_final.size() == 2);
  CHECK(fl.diagonal_mean_final[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fl.diagonal_mean_final[1] == doctest::Approx(1.0).epsilon(1e-12));

  // Geometric tail extrapolation is exact for a pure exponential integrand:
  // bound = sup_{[0,4]} e^{2s} * tail of int e^{-s} = e^8 * e^{-8} = 1.
  CHECK(fl.tail_bound(0, 1) == doctest::Approx(1.0).epsilon(0.01));

  for (std::size_t j = 0; j < fl.X.size(); j += 16) {
    const double t = fl.X.t(j);
    if (t > 4.0) break;
    const double truncated = std::exp(2.0 * t - 8.0) - std::exp(t);
    CHECK(std::abs(fl.X.comp(j, 0, 1) - truncated) <= 2e-3 * std::exp(t) + 1e-12);
  }

  // The anchored entry grows like the slow diagonal, not the fast one.
  CHECK(chi(component(fl.X, 0, 1), 0.1) < 1.05);
  CHECK(chi(component(fl.X, 0, 1), 0.1) > 0.8);
  CHECK(chi(component(fl.X, 0, 0), 0.1) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("equal diagonal means tie toward the start anchor") {
  const auto times = uniform_times(0.0, 4.0, 256);
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 1.0;
  a(1, 1) = 1.0;
  const TriangularYDE eq(upper_constant(times, a),
                         SampledPath::constant(times, Matrix::Zero(2, 2)),
                         YoungParams(1.5, 1.5));
  const TriangularFlow fl = triangular_fundamental(eq, zero_driver(times), 2.0, 4.0);

  CHECK(fl.base_infinite.cwiseAbs().maxCoeff() == 0.0);
  // x01 = t e^t exactly under left-point sums of constant integrands.
  const std::size_t j2 = nearest_node(fl.X, 2.0);
  CHECK(fl.X.comp(j2, 0, 1) == doctest::Approx(2.0 * std::exp(2.0)).epsilon(1e-12));

  const TriangularSpectrum sp = triangular_spectrum(eq, {0.0, 4.0});
  CHECK(sp.lambdas[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sp.lambdas[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("non-decaying truncated integrand raises a warning") {
  // Mean gap 0.005: the anchored integrand decays slower than 1% per unit,
  // so the geometric tail estimate is replaced by the pessimistic one.
  const auto times = uniform_times(0.0, 8.0, 512);
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 0.005;
  a(0, 1) = 1.0;
  const TriangularYDE eq(upper_constant(times, a),
                         SampledPath::constant(times, Matrix::Zero(2, 2)),
                         YoungParams(1.5, 1.5));
  const TriangularFlow fl = triangular_fundamental(eq, zero_driver(times), 4.0, 8.0);

  CHECK(fl.base_infinite(0, 1) == 1.0);
  REQUIRE(fl.warnings.size() == 1);
  CHECK(fl.warnings[0].find("(0,1)") != std::string::npos);
  CHECK(fl.tail_bound(0, 1) > 1.0);
}

TEST_CASE("three-by-three cascade composes scalar solutions column by column") {
  // Strictly decreasing diagonal: every coupled entry is anchored at t_max.
  // Limits: x01 = -e^{2t}, x12 = -e^t, x02 = -e^t / 2.
  const auto times = uniform_times(0.0, 10.0, 1280);
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 3.0;
  a(1, 1) = 2.0;
  a(2, 2) = 1.0;
  a(0, 1) = 1.0;
  a(1, 2) = 1.0;
  a(0, 2) = 2.0;
  const TriangularYDE eq(upper_constant(times, a),
                         SampledPath::constant(times, Matrix::Zero(3, 3)),
                         YoungParams(1.5, 1.5));
  const TriangularFlow fl = triangular_fundamental(eq, zero_driver(times), 3.0, 10.0);

  CHECK(fl.base_infinite(0, 1) == 1.0);
  CHECK(fl.base_infinite(1, 2) == 1.0);
  CHECK(fl.base_infinite(0, 2) == 1.0);
  CHECK(fl.warnings.empty());

  for (double t : {1.0, 2.0, 3.0}) {
    const std::size_t j = nearest_node(fl.X, t);
    CHECK(fl.X.comp(j, 0, 0) == doctest::Approx(std::exp(3.0 * t)).epsilon(1e-9));
    CHECK(fl.X.comp(j, 0, 1) == doctest::Approx(-std::exp(2.0 * t)).epsilon(0.01));
    CHECK(fl.X.comp(j, 1, 2) == doctest::Approx(-std::exp(t)).epsilon(0.01));
    CHECK(fl.X.comp(j, 0, 2) == doctest::Approx(-0.5 * std::exp(t)).epsilon(0.01));
    CHECK(fl.X.comp(j, 1, 0) == 0.0);
    CHECK(fl.X.comp(j, 2, 0) == 0.0);
    CHECK(fl.X.comp(j, 2, 1) == 0.0);
  }
}

TEST_CASE("triangular inputs are validated") {
  const auto times = uniform_times(0.0, 2.0, 64);
  Matrix low = Matrix::Zero(2, 2);
  low(1, 0) = 0.1;
  CHECK_THROWS_AS(TriangularYDE(upper_constant(times, low),
                                SampledPath::constant(times, Matrix::Zero(2, 2)),
                                YoungParams(1.5, 1.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(TriangularYDE(SampledPath::constant(times, Matrix::Zero(2, 3)),
                                SampledPath::constant(times, Matrix::Zero(2, 3)),
                                YoungParams(1.5, 1.5)),
                  std::invalid_argument);
  const auto other = uniform_times(0.0, 2.0, 32);
  CHECK_THROWS_AS(TriangularYDE(SampledPath::constant(times, Matrix::Zero(2, 2)),
                                SampledPath::constant(other, Matrix::Zero(2, 2)),
                                YoungParams(1.5, 1.5)),
                  std::invalid_argument);

  const TriangularYDE eq(SampledPath::constant(times, Matrix::Identity(2, 2)),
                         SampledPath::constant(times, Matrix::Zero(2, 2)),
                         YoungParams(1.5, 1.5));
  CHECK_THROWS_AS(diagonal_means(eq, {0.0, 2.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(diagonal_means(eq, {1.0, 1.0}), std::invalid_argument);

  const auto omega = zero_driver(times);
  CHECK_THROWS_AS(triangular_fundamental(eq, SampledPath::constant(times, Matrix::Zero(2, 1)),
                                         1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(triangular_fundamental(eq, omega, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(triangular_fundamental(eq, omega, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(triangular_fundamental(eq, omega, 2.0, 8.0), std::invalid_argument);

  // Diagonal blow-up past the representable range is reported, not returned.
  const auto big = SampledPath::constant(times, 500.0 * Matrix::Identity(1, 1));
  const TriangularYDE eq1(big, SampledPath::constant(times, Matrix::Zero(1, 1)),
                          YoungParams(1.5, 1.5));
  CHECK_THROWS_AS(triangular_fundamental(eq1, omega, 1.0, 2.0), std::runtime_error);
}
