#include <cmath>
#include <limits>

#include "doctest.h"
#include "helpers.hpp"
#include "utm/error.hpp"
#include "utm/nonlinear.hpp"
#include "utm/norms.hpp"
#include "utm/numerics.hpp"
#include "utm/oracle.hpp"

using namespace utm;

TEST_SUITE("nonlinear") {
  TEST_CASE("nonlinearity forms") {
    CHECK(apply_nonlinearity(-2.0, 3, NonlinearityForm::PowerUp) == -8.0);
    CHECK(apply_nonlinearity(-2.0, 3, NonlinearityForm::AbsPower) == -8.0);
    CHECK(apply_nonlinearity(-2.0, 2, NonlinearityForm::AbsPower) == -4.0);
    CHECK(apply_nonlinearity(0.0, 5, NonlinearityForm::AbsPower) == 0.0);
    CHECK_THROWS_AS(apply_nonlinearity(1.0, 2, NonlinearityForm::PowerUp), Error);
    Matrix m(1, 2);
    m(0, 0) = 2.0;
    m(0, 1) = -1.5;
    apply_nonlinearity(m, 2, NonlinearityForm::AbsPower);
    CHECK(m(0, 0) == 4.0);
    CHECK(m(0, 1) == -2.25);
  }

  TEST_CASE("lifespan") {
    CHECK(lifespan(1.0, 3, 1.0, Regime::Smooth, 0.0, 1.0).value == doctest::Approx(1.0 / 576.0).epsilon(1e-15));
    CHECK(lifespan(0.0, 3, 1.0, Regime::Smooth, 0.0, 0.7).value == 0.7);
    CHECK(lifespan(0.0, 3, 1.0, Regime::Rough, 1.0 / 48.0, 0.7).value == 0.7);
    CHECK(lifespan_exact(Rational(1), 3, Rational(1), Rational(1)) == Rational(1, 576));
    const LifespanResult r = lifespan(1.0, 3, 1.0, Regime::Rough, alpha_exponent(0.25, 3), 1.0, 1e-12);
    const double expected = -48.0 * std::log(96.0) - 144.0 * std::log(2.0);
    CHECK(r.log_value == doctest::Approx(expected).epsilon(1e-14));
    CHECK(r.underflow);
    CHECK(r.value < 1e-130);
  }

  TEST_CASE("contraction ratio") {
    PicardTrace t;
    t.difference_norms = {0.1, 0.04};
    CHECK(contraction_ratio(t) == doctest::Approx(0.4));
    t.difference_norms = {0.1, 0.1};
    CHECK(contraction_ratio(t) == doctest::Approx(1.0));
    t.difference_norms = {0.1};
    CHECK_THROWS_AS(contraction_ratio(t), Error);
  }

  TEST_CASE("difference bound") {
    const DifferenceBound a = nonlinearity_difference_bound(1.0, 0.0, 2);
    CHECK(a.lhs == doctest::Approx(1.0));
    CHECK(a.rhs == doctest::Approx(16.0));
    CHECK(nonlinearity_difference_bound({0.3, -0.2}, {0.3, -0.2}, 4).lhs == 0.0);
    const DifferenceBound b = nonlinearity_difference_bound(2.0, 1.0, 3);
    CHECK(b.lhs == doctest::Approx(7.0));
    CHECK(b.rhs == doctest::Approx(240.0));
  }

  TEST_CASE("Picard on zero data") {
    ProblemSpec sp;
    sp.domain = DomainKind::Interval;
    sp.length = 1.0;
    sp.T = 0.05;
    sp.s = classify_regime(1.0, 3);
    sp.u0 = fixtures::zero_profile(1.0);
    sp.g0 = fixtures::constant_signal(0.0, 0.05);
    sp.h0 = sp.g0;
    sp.grid = GridSpec{11, 6, 1.0, 0.05};
    const PicardResult r = picard_solve(sp);
    CHECK(r.trace.converged);
    CHECK(r.trace.iterations == 1);
    for (double v : r.field.values.data) CHECK(v == 0.0);
  }

  TEST_CASE("Picard past the lifespan is refused") {
    ProblemSpec sp;
    sp.domain = DomainKind::Interval;
    sp.length = 1.0;
    sp.T = 0.5;
    sp.s = classify_regime(1.0, 3);
    sp.u0 = SampledProfile(fixtures::sampled([](double x) { return 3.0 * std::sin(kPi * x); }, 0.0, 1.0, 101));
    sp.g0 = fixtures::constant_signal(0.0, 0.5);
    sp.h0 = sp.g0;
    sp.grid = GridSpec{11, 6, 1.0, 0.5};
    CHECK_THROWS_AS(picard_solve(sp), Error);
  }

  TEST_CASE("small-data Picard agrees with IMEX") {
    ProblemSpec sp;
    sp.domain = DomainKind::Interval;
    sp.length = 1.0;
    sp.T = 0.05;
    sp.s = classify_regime(1.0, 3);
    sp.u0 = SampledProfile(fixtures::sampled([](double x) { return 0.01 * std::sin(kPi * x); }, 0.0, 1.0, 201));
    sp.g0 = fixtures::constant_signal(0.0, 0.05);
    sp.h0 = sp.g0;
    sp.grid = GridSpec{21, 11, 1.0, 0.05};
    PicardOptions opts;
    opts.ignore_lifespan = true;
    const PicardResult r = picard_solve(sp, opts);
    CHECK(r.trace.converged);
    const OracleRun fd = fd_solve(validate_problem(sp), GridSpec{201, 201, 1.0, 0.05}, true);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < 21; ++i) {
      const double a = r.field.at(i, 10);
      const double b = fd.field.at(10 * i, 200);
      num += (a - b) * (a - b);
      den += b * b;
    }
    CHECK(std::sqrt(num / den) < 1e-3);
  }
}
