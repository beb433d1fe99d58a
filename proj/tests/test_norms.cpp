#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "utm/error.hpp"
#include "utm/norms.hpp"

using namespace utm;

namespace {

PiecewiseLinear two_sided_exp() {
  return PiecewiseLinear::sample([](double x) { return std::exp(-std::abs(x)); }, -30.0, 60.0, 60001);
}

SolutionField constant_field(double v, double T) {
  SolutionField f = make_field(GridSpec{101, 11, 1.0, T}.xs(), GridSpec{101, 11, 1.0, T}.ts());
  std::fill(f.values.data.begin(), f.values.data.end(), v);
  return f;
}

}  // namespace

TEST_SUITE("norms") {
  TEST_CASE("whole-line Sobolev norm") {
    CHECK(hs_norm_line(PiecewiseLinear(-1.0, 0.1, std::vector<double>(21, 0.0)), 0.7).value == 0.0);
    CHECK(hs_norm_line(two_sided_exp(), 0.0).value == doctest::Approx(1.0).epsilon(1e-6));
    // Fourier side: |f^|^2 = 4 / (1+xi^2)^2, so the s = 1 norm squared is (1/2pi) int 4/(1+xi^2) = 2.
    CHECK(hs_norm_line(two_sided_exp(), 1.0).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  }

  TEST_CASE("whole-line norm: homogeneity, triangle inequality, monotone in s") {
    const PiecewiseLinear f = PiecewiseLinear::sample([](double x) { return std::exp(-x * x); }, -8.0, 16.0, 3201);
    const PiecewiseLinear g = PiecewiseLinear::sample([](double x) { return x * std::exp(-x * x / 2); }, -8.0, 16.0, 3201);
    const double nf = hs_norm_line(f, 0.8).value;
    CHECK(hs_norm_line(f.scaled(-3.0), 0.8).value == doctest::Approx(3.0 * nf).epsilon(1e-10));
    CHECK(hs_norm_line(f.plus(g), 0.8).value <= nf + hs_norm_line(g, 0.8).value);
    double prev = 0.0;
    for (double s : {0.0, 0.3, 0.7, 1.2}) {
      const double v = hs_norm_line(f, s).value;
      CHECK(v >= prev);
      prev = v;
    }
  }

  TEST_CASE("jumps make high orders diverge") {
    const PiecewiseLinear box(0.0, 1.0, {0.0, 1.0, 1.0, 0.0}, {1.0, 1.0, 0.0, 0.0});
    CHECK(std::isfinite(hs_norm_line(box, 0.25).value));
    CHECK_THROWS_AS(hs_norm_line(box, 0.75), Error);
  }

  TEST_CASE("physical norms") {
    const PiecewiseLinear c(0.0, 0.01, std::vector<double>(101, 2.0));
    const NormReport rc = hs_norm_physical(c, 0.4, PhysicalDomain::Interval);
    CHECK(rc.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(rc.parts.at("seminorm")) < 1e-12);
    const PiecewiseLinear e = PiecewiseLinear::sample([](double x) { return std::exp(-x); }, 0.0, 40.0, 8001);
    CHECK(hs_norm_physical(e, 0.0, PhysicalDomain::HalfLine).value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
    const PiecewiseLinear x = PiecewiseLinear::sample([](double t) { return t; }, 0.0, 1.0, 1001);
    CHECK(hs_norm_physical(x, 1.0, PhysicalDomain::Interval).value ==
          doctest::Approx(1.0 / std::sqrt(3.0) + 1.0).epsilon(1e-6));
    CHECK_THROWS_AS(hs_norm_physical(PiecewiseLinear(0.0, 0.1, {1.0, 2.0, 3.0}), 1.0, PhysicalDomain::Interval), Error);
  }

  TEST_CASE("fractional seminorm of a linear function") {
    // f(x) = x on (0, 1): int int |x-y|^{1-2b} = 2 / ((2-2b)(3-2b)).
    const double b = 0.3;
    const PiecewiseLinear x = PiecewiseLinear::sample([](double t) { return t; }, 0.0, 1.0, 2001);
    const NormReport r = hs_norm_physical(x, b, PhysicalDomain::Interval);
    const double exact = std::sqrt(2.0 / ((2 - 2 * b) * (3 - 2 * b)));
    CHECK(std::abs(r.parts.at("seminorm") - exact) < 1e-4 + r.error_bar);
  }

  TEST_CASE("time norms") {
    CHECK(ht_norm(fixtures::constant_signal(3.0, 0.5), 0.6, 0.5).value == doctest::Approx(3.0 * std::sqrt(0.5)));
    CHECK(ht_norm(fixtures::constant_signal(0.0, 0.5), 0.6, 0.5).value == 0.0);
    const PiecewiseLinear t = PiecewiseLinear::sample([](double v) { return v; }, 0.0, 1.0, 1001);
    CHECK(ht_norm(t, 0.0, 1.0).value == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));
  }

  TEST_CASE("C^alpha L^p norm") {
    CHECK(calpha_lp_norm(constant_field(0.0, 0.5), 0.1, 2) == 0.0);
    CHECK(calpha_lp_norm(constant_field(1.0, 0.5), 0.1, 2) == doctest::Approx(std::pow(0.5, 0.1)).epsilon(1e-9));
    SolutionField f = constant_field(0.0, 0.5);
    for (std::size_t j = 1; j < f.t_grid.size(); ++j)
      for (std::size_t i = 0; i < f.x_grid.size(); ++i) f.values(j, i) = std::pow(f.t_grid[j], -0.05);
    CHECK(calpha_lp_norm(f, 0.1, 2) == doctest::Approx(std::pow(0.5, 0.05)).epsilon(1e-9));
  }

  TEST_CASE("exponents") {
    CHECK(b_midpoint(0.25) == doctest::Approx(0.4375));
    CHECK(alpha_exponent(0.25, 3) == doctest::Approx(1.0 / 48.0));
  }

  TEST_CASE("data and solution norms") {
    ProblemSpec sp;
    sp.length = 5.0;
    sp.T = 0.25;
    sp.s = classify_regime(0.25, 3);
    sp.u0 = fixtures::zero_profile(5.0);
    sp.g0 = fixtures::constant_signal(0.0, 0.25);
    sp.grid = GridSpec{11, 6, 1.0, 0.25};
    CHECK(data_norm(sp) == 0.0);
    CHECK(xy_norm(make_field(sp.grid.xs(), sp.grid.ts()), sp).value == 0.0);
    sp.g0 = fixtures::constant_signal(1.0, 0.25);
    CHECK(data_norm(sp) == doctest::Approx(0.5).epsilon(1e-9));
  }
}
