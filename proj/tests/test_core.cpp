#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "utm/error.hpp"
#include "utm/numerics.hpp"

using namespace utm;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::Config;
}

ProblemSpec smooth_halfline(double u0_at_0, double g0_at_0) {
  ProblemSpec sp;
  sp.domain = DomainKind::HalfLine;
  sp.length = 10.0;
  sp.T = 0.5;
  sp.s = classify_regime(1.0, 3);
  sp.u0 = SampledProfile(PiecewiseLinear::sample([=](double x) { return u0_at_0 * std::exp(-x * x); }, 0, 10, 201));
  sp.g0 = fixtures::constant_signal(g0_at_0, 0.5);
  sp.grid.n_x = 5;
  sp.grid.x_max = 2.0;
  sp.grid.n_t = 5;
  sp.grid.t_max = 0.5;
  return sp;
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("regime classification") {
    const SobolevIndex a = classify_regime(1.0, 3);
    CHECK(a.regime == Regime::Smooth);
    CHECK(a.m == doctest::Approx(0.75));
    const SobolevIndex b = classify_regime(0.25, 3);
    CHECK(b.regime == Regime::Rough);
    CHECK(b.m == doctest::Approx(0.375));
    CHECK(code_of([] { classify_regime(0.5, 3); }) == ErrorCode::OutOfRange);
    CHECK(code_of([] { classify_regime(1.5, 3); }) == ErrorCode::OutOfRange);
    CHECK(code_of([] { classify_regime(0.1, 3); }) == ErrorCode::OutOfRange);
    for (double s = 0.17; s < 1.5; s += 0.01) {
      try {
        const SobolevIndex idx = classify_regime(s, 3);
        CHECK(idx.m == doctest::Approx((2.0 * s + 1.0) / 4.0));
        CHECK((idx.regime == Regime::Smooth) == (s > 0.5));
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfRange);
      }
    }
  }

  TEST_CASE("validation") {
    CHECK_NOTHROW(validate_problem(smooth_halfline(1.0, 1.0)));
    CHECK(code_of([] { validate_problem(smooth_halfline(1.0, 0.0)); }) == ErrorCode::IncompatibleData);

    ProblemSpec p2 = smooth_halfline(1.0, 1.0);
    p2.p = 2;
    p2.s = classify_regime(1.0, 2);
    p2.form = NonlinearityForm::PowerUp;
    CHECK(code_of([&] { validate_problem(p2); }) == ErrorCode::BadNonlinearity);

    ProblemSpec late = smooth_halfline(1.0, 1.0);
    late.T = 1.0;
    CHECK(code_of([&] { validate_problem(late); }) == ErrorCode::BadHorizon);

    ProblemSpec fat = smooth_halfline(1.0, 1.0);
    fat.u0 = SampledProfile(PiecewiseLinear::sample([](double x) { return std::exp(-x); }, 0, 10, 201));
    CHECK(code_of([&] { validate_problem(fat); }) == ErrorCode::TailTooFat);
  }

  TEST_CASE("validation is idempotent") {
    ProblemSpec sp = smooth_halfline(1.0, 1.0);
    sp.p = 5;
    sp.s = classify_regime(1.0, 5);
    const ProblemSpec a = validate_problem(sp);
    const ProblemSpec b = validate_problem(a);
    CHECK(a.form == NonlinearityForm::PowerUp);
    CHECK(b.form == a.form);
    CHECK(b.u0.right_values() == a.u0.right_values());
    CHECK(b.g0.right_values() == a.g0.right_values());
    CHECK(b.T == a.T);
  }

  TEST_CASE("piecewise-linear evaluation conventions") {
    const PiecewiseLinear f(0.0, 0.5, {1.0, 2.0, 0.0}, {1.0, 3.0, 0.0});
    CHECK(f(0.5) == doctest::Approx(2.0));  // left-continuous
    CHECK(f.right_limit(0.5) == doctest::Approx(3.0));
    CHECK(f(0.75) == doctest::Approx(1.5));
    CHECK(f(-0.1) == 0.0);
    CHECK(f(1.1) == 0.0);
    CHECK(f.has_jumps());
  }

  TEST_CASE("exact exponential moments of the interpolant") {
    const PiecewiseLinear f = PiecewiseLinear::sample([](double x) { return x; }, 0.0, 1.0, 11);
    // int_0^1 x e^{c x} dx = ((c - 1) e^c + 1) / c^2
    for (cplx c : {cplx(0.0, 0.0), cplx(1e-9, 0.0), cplx(-3.0, 2.0), cplx(0.0, 40.0)}) {
      const cplx want = std::abs(c) < 1e-6 ? 0.5 + c / 3.0 : ((c - 1.0) * std::exp(c) + 1.0) / (c * c);
      CHECK(std::abs(f.exp_integral(c) - want) < 1e-12);
    }
    CHECK(f.exp_integral(cplx(0.0, 0.0), 0.25, 0.75).real() == doctest::Approx(0.25));
  }

  TEST_CASE("grid spec") {
    GridSpec g;
    g.n_x = 1;
    CHECK(code_of([&] { g.check(); }) == ErrorCode::BadGrid);
    g.n_x = 3;
    g.x_max = 2.0;
    CHECK(g.xs() == std::vector<double>{0.0, 1.0, 2.0});
  }

  TEST_CASE("parallel_for covers every index once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 4);
    for (int h : hits) CHECK(h == 1);
  }
}
