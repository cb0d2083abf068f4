#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "yde/fbm.hpp"
#include "yde/seminorm.hpp"

using namespace yde;

namespace {

// Independent oracle: enumerate every sub-partition that keeps the endpoints.
double brute_force_pvar(const SampledPath& path, double p, const Interval& w) {
  const auto [ia, ib] = path.window(w);
  const std::size_t n = ib - ia;
  if (n == 0) return 0.0;
  double best = 0.0;
  // Interior nodes toggled by bitmask; n - 1 interior points.
  const std::size_t masks = std::size_t{1} << (n - 1);
  for (std::size_t mask = 0; mask < masks; ++mask) {
    std::vector<std::size_t> pts{ia};
    for (std::size_t j = 0; j + 1 < n; ++j)
      if (mask & (std::size_t{1} << j)) pts.push_back(ia + j + 1);
    pts.push_back(ib);
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < pts.size(); ++j)
      sum += std::pow(path.incr_norm(pts[j], pts[j + 1]), p);
    best = std::max(best, sum);
  }
  return std::pow(best, 1.0 / p);
}

SampledPath random_scalar_path(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> t, v;
  double tt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back(tt);
    v.push_back(u(gen));
    tt += 0.5 + 0.5 * std::abs(u(gen));
  }
  return SampledPath::scalar(t, v);
}

SampledPath random_vector_path(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> t, v;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back(static_cast<double>(i));
    v.push_back(u(gen));
    v.push_back(u(gen));
  }
  return SampledPath(t, v, 2, 1);
}

}  // namespace

TEST_CASE("p-variation frozen examples") {
  const auto lin = SampledPath::time_path(uniform_times(0.0, 1.0, 16));
  CHECK(p_variation_seminorm(lin, 2.0, {0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));

  const auto c = SampledPath::scalar({0.0, 0.5, 1.0}, {3.0, 3.0, 3.0});
  CHECK(p_variation_seminorm(c, 1.5, {0.0, 1.0}) == 0.0);

  // Zigzag (0,1,0,1): every increment contributes, 3^(1/1.5).
  const auto z = SampledPath::scalar({0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}, {0.0, 1.0, 0.0, 1.0});
  CHECK(p_variation_seminorm(z, 1.5, z.span()) ==
        doctest::Approx(2.08008382305190411).epsilon(1e-14));
}

TEST_CASE("dp agrees with exhaustive enumeration") {
  for (unsigned seed = 1; seed <= 6; ++seed) {
    const auto s = random_scalar_path(11, seed);
    const auto v = random_vector_path(11, seed + 100);
    for (double p : {1.2, 1.5, 1.9}) {
      CHECK(p_variation_seminorm(s, p, s.span()) ==
            doctest::Approx(brute_force_pvar(s, p, s.span())).epsilon(1e-12));
      CHECK(p_variation_seminorm(v, p, v.span()) ==
            doctest::Approx(brute_force_pvar(v, p, v.span())).epsilon(1e-12));
    }
    // Interior window.
    const Interval w{s.t(2), s.t(8)};
    CHECK(p_variation_seminorm(s, 1.5, w) ==
          doctest::Approx(brute_force_pvar(s, 1.5, w)).epsilon(1e-12));
  }
}

TEST_CASE("seminorm properties: superadditivity, monotonicity in p and window") {
  const auto s = random_scalar_path(40, 7);
  const double a = s.t(0), b = s.t(20), c = s.t(39);
  const double p = 1.5;
  const double vab = p_variation_seminorm(s, p, {a, b});
  const double vbc = p_variation_seminorm(s, p, {b, c});
  const double vac = p_variation_seminorm(s, p, {a, c});
  CHECK(std::pow(vab, p) + std::pow(vbc, p) <= std::pow(vac, p) * (1 + 1e-12));
  CHECK(vab <= vac * (1 + 1e-12));

  CHECK(p_variation_seminorm(s, 1.8, s.span()) <= p_variation_seminorm(s, 1.2, s.span()) * (1 + 1e-12));
}

TEST_CASE("holder bound dominates the variation seminorm") {
  const auto s = random_scalar_path(30, 9);
  const double r = 1.5, alpha = 1.0 / r;
  const Interval w = s.span();
  const double lhs = p_variation_seminorm(s, r, w);
  const double rhs = std::pow(w.length(), alpha) * holder_seminorm(s, alpha, w);
  CHECK(lhs <= rhs * (1 + 1e-12));
}

TEST_CASE("holder seminorm and module frozen examples") {
  const auto lin = SampledPath::time_path(uniform_times(0.0, 1.0, 10));
  CHECK(holder_seminorm(lin, 1.0, {0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));

  const auto two = SampledPath::scalar({0.0, 0.25}, {0.0, 1.0});
  CHECK(holder_seminorm(two, 0.5, two.span()) == doctest::Approx(2.0).epsilon(1e-14));

  const auto m = SampledPath::scalar({0.0, 1.0, 2.0}, {0.0, 1.0, 1.1});
  CHECK(holder_module(m, 1.0, 1.0, m.span()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(holder_module(m, 1.0, 2.0, m.span()) ==
        doctest::Approx(holder_seminorm(m, 1.0, m.span())).epsilon(1e-14));

  // Module is nondecreasing in delta and bounded by the seminorm.
  const auto s = random_scalar_path(25, 11);
  double prev = 0.0;
  for (double delta : {0.5, 1.0, 2.0, 4.0, 100.0}) {
    const double v = holder_module(s, 0.6, delta, s.span());
    CHECK(v >= prev - 1e-15);
    CHECK(v <= holder_seminorm(s, 0.6, s.span()) + 1e-15);
    prev = v;
  }
}

TEST_CASE("degenerate windows give zero, bad windows throw") {
  const auto s = random_scalar_path(10, 13);
  CHECK(p_variation_seminorm(s, 1.5, {s.t(3), s.t(3)}) == 0.0);
  CHECK(holder_seminorm(s, 0.5, {s.t(3), s.t(3)}) == 0.0);
  CHECK_THROWS_AS(p_variation_seminorm(s, 1.5, {s.t(0) - 1.0, s.t(3)}), std::domain_error);
  CHECK_THROWS_AS(p_variation_seminorm(s, 0.5, s.span()), std::invalid_argument);
}

TEST_CASE("reference implementations match the fast kernels") {
  FbmSpec spec;
  spec.horizon = 4.0;
  spec.dt = 1.0 / 64.0;
  spec.seed = 21;
  const auto w = fbm_sample(spec);
  CHECK(p_variation_seminorm(w, 1.5, w.span()) ==
        doctest::Approx(reference::p_variation_seminorm(w, 1.5, w.span())).epsilon(1e-13));
  CHECK(holder_seminorm(w, 0.45, w.span()) ==
        doctest::Approx(reference::holder_seminorm(w, 0.45, w.span())).epsilon(1e-13));

  const auto v = random_vector_path(120, 17);
  CHECK(p_variation_seminorm(v, 1.4, v.span()) ==
        doctest::Approx(reference::p_variation_seminorm(v, 1.4, v.span())).epsilon(1e-13));
}

TEST_CASE("cache returns identical values across repeated windows") {
  const auto s = random_scalar_path(60, 19);
  SeminormCache cache;
  const Interval w{s.t(5), s.t(50)};
  const double v0 = p_variation_seminorm(s, 1.5, w, &cache);
  const double v1 = p_variation_seminorm(s, 1.5, w, &cache);
  CHECK(v0 == v1);
  CHECK(v0 == p_variation_seminorm(s, 1.5, w));
}

TEST_CASE("product seminorm bound on random polynomial paths") {
  // |||C x|||_q <= |C|_inf |||x|||_q + |x|_inf |||C|||_q on a shared grid.
  std::mt19937 gen(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto times = uniform_times(0.0, 1.0, 64);
  for (int rep = 0; rep < 4; ++rep) {
    double c0 = u(gen), c1 = u(gen), c2 = u(gen), c3 = u(gen);
    double x0 = u(gen), x1 = u(gen), x2 = u(gen), x3 = u(gen);
    const auto C = SampledPath::sample(times, [&](double t) {
      Matrix m(2, 2);
      m << c0 + c1 * t, c2 * t * t, c3 * t, c0 - c2 * t * t * t;
      return m;
    });
    const auto x = SampledPath::sample(times, [&](double t) {
      Matrix m(2, 1);
      m << x0 + x1 * t + x3 * t * t, x2 - x1 * t * t;
      return m;
    });
    const auto cx = SampledPath::sample(times, [&](double t) {
      return Matrix(C.value_at(t) * x.value_at(t));
    });
    const double q = 1.5;
    double c_sup = 0.0, x_sup = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      c_sup = std::max(c_sup, C.value(i).norm());
      x_sup = std::max(x_sup, x.value(i).norm());
    }
    const double lhs = p_variation_seminorm(cx, q, cx.span());
    const double rhs = c_sup * p_variation_seminorm(x, q, x.span()) +
                       x_sup * p_variation_seminorm(C, q, C.span());
    CHECK(lhs <= rhs * (1 + 1e-12));
  }
}

TEST_CASE("precompactness probe") {
  const auto zero = SampledPath::scalar({0.0, 1.0}, {0.0, 0.0});
  const auto rep0 = precompactness_check({zero}, 0.5, {1.0, 0.5});
  CHECK(rep0.sup_initial == 0.0);
  CHECK(rep0.module_sup[0] == 0.0);
  CHECK(rep0.bounded(0.1));

  const auto times = uniform_times(0.0, 1.0, 32);
  const auto f1 = SampledPath::time_path(times);
  const auto f2 = SampledPath::sample(times, [](double t) {
    Matrix m(1, 1);
    m << 2.0 * t;
    return m;
  });
  const auto rep = precompactness_check({f1, f2}, 0.5, {0.25});
  CHECK(rep.sup_initial == 0.0);
  CHECK(rep.module_sup[0] == doctest::Approx(2.0 * std::sqrt(0.25)).epsilon(1e-12));

  // Shifted copies of one fBm sample: modules shrink with delta.
  FbmSpec spec;
  spec.horizon = 6.0;
  spec.dt = 1.0 / 128.0;
  spec.seed = 27;
  const auto w = fbm_sample(spec);
  std::vector<SampledPath> family;
  for (int k = 0; k < 4; ++k) family.push_back(wiener_shift(w, static_cast<double>(k)));
  // Common span: restrict to [0, 2].
  for (auto& f : family) f = slice(f, {0.0, 2.0});
  const auto repf = precompactness_check(family, 0.55, {1.0, 0.5, 0.25, 0.125});
  CHECK(repf.modules_decreasing);
  CHECK(repf.bounded(100.0));

  CHECK_THROWS_AS(precompactness_check({}, 0.5, {1.0}), std::invalid_argument);
}
