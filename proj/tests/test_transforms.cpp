#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "utm/numerics.hpp"
#include "utm/transforms.hpp"

using namespace utm;

TEST_SUITE("transforms") {
  TEST_CASE("half-line Fourier transform") {
    const SampledProfile e(PiecewiseLinear::sample([](double x) { return std::exp(-x); }, 0.0, 40.0, 40001));
    CHECK(std::abs(half_line_fourier(e, 0.0) - 1.0) < 1e-7);
    CHECK(std::abs(half_line_fourier(e, cplx(0.0, -1.0)) - 0.5) < 1e-7);
    // 1 / (1 + i k) for real k
    CHECK(std::abs(half_line_fourier(e, 3.0) - 1.0 / cplx(1.0, 3.0)) < 1e-7);
    CHECK(std::abs(half_line_fourier(fixtures::zero_profile(5.0), 2.0)) == 0.0);
  }

  TEST_CASE("interval Fourier transform") {
    const SampledProfile one(PiecewiseLinear(0.0, 0.01, std::vector<double>(101, 1.0)));
    CHECK(std::abs(interval_fourier(one, 1.0, 2.0 * kPi)) < 1e-12);
    CHECK(std::abs(interval_fourier(one, 1.0, 0.0) - 1.0) < 1e-12);
    CHECK(std::abs(interval_fourier(fixtures::zero_profile(1.0), 1.0, 1.0)) == 0.0);
  }

  TEST_CASE("time transform") {
    const SampledSignal one = fixtures::constant_signal(1.0, 2.0, 201);
    CHECK(std::abs(time_transform(one, cplx(0.0, kPi), 2.0)) < 1e-12);
    CHECK(std::abs(time_transform(one, 0.0, 0.5) - 0.5) < 1e-12);
    CHECK(std::abs(time_transform(fixtures::constant_signal(0.0, 1.0), cplx(0.0, 1.0), 1.0)) == 0.0);
  }

  TEST_CASE("even reflection of the initial datum") {
    const SampledProfile e(PiecewiseLinear::sample([](double x) { return std::exp(-x); }, 0.0, 30.0, 30001));
    const ExtensionRecord rec = extend_initial_datum(e, classify_regime(1.0, 3), false);
    CHECK(rec.method == ExtensionMethod::EvenReflection);
    for (double x : {-2.0, -0.3, 0.0, 0.7}) CHECK(rec.extended(x) == doctest::Approx(std::exp(-std::abs(x))).epsilon(1e-6));

    // Ratio of L2 norms is sqrt 2 (computed by the s = 0 path of the ratio).
    SobolevIndex s0;
    s0.s = 0.0;
    s0.m = 0.25;
    const ExtensionRecord r0 = extend_initial_datum(e, s0, true);
    CHECK(r0.norm_ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));

    const ExtensionRecord z = extend_initial_datum(fixtures::zero_profile(5.0), classify_regime(1.0, 3), true);
    CHECK(z.norm_ratio == 1.0);
    CHECK(z.extended.max_abs() == 0.0);
  }

  TEST_CASE("boundary datum extension") {
    const ExtensionRecord rough = extend_boundary_datum(fixtures::constant_signal(1.0, 0.5), classify_regime(0.25, 3),
                                                        0.5, false);
    CHECK(rough.extended(0.25) == doctest::Approx(1.0));
    CHECK(rough.extended(0.5) == doctest::Approx(1.0));
    CHECK(rough.extended(0.5001) == doctest::Approx(0.0));
    CHECK(rough.extended(1.5) == 0.0);

    const SampledSignal lin(PiecewiseLinear::sample([](double t) { return t; }, 0.0, 0.5, 501));
    const ExtensionRecord smooth = extend_boundary_datum(lin, classify_regime(1.0, 3), 0.5, false);
    CHECK(smooth.extended(0.75) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(smooth.extended(0.3) == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(smooth.extended(2.0) == doctest::Approx(0.0));

    const ExtensionRecord zero =
        extend_boundary_datum(fixtures::constant_signal(0.0, 0.5), classify_regime(1.0, 3), 0.5, false);
    CHECK(zero.extended.max_abs() == 0.0);
  }

  TEST_CASE("smooth cutoff") {
    CHECK(smooth_cutoff(0.0) == 1.0);
    CHECK(smooth_cutoff(-1.0) == 1.0);
    CHECK(smooth_cutoff(2.5) == 0.0);
    const double mid = smooth_cutoff(1.5);
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    double prev = 1.0;
    for (double t = 1.0; t <= 2.0; t += 0.01) {
      CHECK(smooth_cutoff(t) <= prev);
      prev = smooth_cutoff(t);
    }
  }

  TEST_CASE("transform error estimate shrinks with refinement") {
    auto f = [](double x) { return std::exp(-x) * std::cos(3.0 * x); };
    const auto coarse = half_line_fourier_estimate(SampledProfile(PiecewiseLinear::sample(f, 0, 30, 3001)), 2.0);
    const auto fine = half_line_fourier_estimate(SampledProfile(PiecewiseLinear::sample(f, 0, 30, 6001)), 2.0);
    CHECK(fine.error < coarse.error);
  }
}
