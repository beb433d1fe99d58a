#include <cmath>

#include "doctest.h"
#include "utm/contours.hpp"
#include "utm/numerics.hpp"

using namespace utm;

TEST_SUITE("contours") {
  TEST_CASE("boundary of D+") {
    const ContourNodeSet set = dplus_boundary_nodes(10.0, 16);
    bool saw_a3 = false;
    for (std::size_t n = 0; n < set.nodes.size(); ++n) {
      const cplx k = set.nodes[n];
      CHECK(std::abs(k.imag() - std::abs(k.real())) < 1e-12);
      CHECK(std::abs(set.k_squared[n].real()) < 1e-9 * std::max(1.0, std::norm(k)));
      CHECK(std::abs(set.k_squared[n] - k * k) < 1e-9 * std::max(1.0, std::norm(k)));
      if (k.real() < 0.0) saw_a3 = true;
    }
    CHECK(saw_a3);
    const cplx a3_unit = kA3;
    CHECK(a3_unit.real() == doctest::Approx(-0.70711).epsilon(1e-5));
    CHECK(a3_unit.imag() == doctest::Approx(0.70711).epsilon(1e-5));
    CHECK(std::abs(kA * kA - cplx(0.0, 1.0)) < 1e-15);

    // Zero integrand integrates to zero; the constant 1 integrates to the chord a R - a^3 R.
    cplx zero = 0.0;
    cplx one = 0.0;
    for (std::size_t n = 0; n < set.nodes.size(); ++n) {
      zero += set.weights[n] * std::exp(cplx(0.0, 1.0) * set.nodes[n] - set.k_squared[n] * 0.1) * 0.0;
      one += set.weights[n];
    }
    CHECK(std::abs(zero) == 0.0);
    CHECK(std::abs(one - (kA - kA3) * 10.0) < 1e-10);
  }

  TEST_CASE("substituted real nodes") {
    for (int n : {4, 8, 16}) {
      const ContourNodeSet set = substituted_halfline_nodes(25.0, n);
      cplx sum = 0.0;
      for (std::size_t i = 0; i < set.nodes.size(); ++i) {
        CHECK(set.nodes[i].imag() == 0.0);
        CHECK(set.nodes[i].real() > 0.0);
        sum += set.weights[i];
      }
      CHECK(std::abs(sum - 25.0) < 1e-10);
    }
    const double kappa = 3.0;
    const double x = 0.7;
    CHECK(std::abs(std::exp(cplx(0.0, 1.0) * kA3 * kappa * x)) ==
          doctest::Approx(std::exp(-kappa * x / std::sqrt(2.0))));
  }

  TEST_CASE("radial rule integrates smooth oscillation") {
    PhaseModel model;
    model.space_extent = 5.0;
    const RadialRule rule = radial_rule(40.0, 16, model, 4.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.r.size(); ++i) acc += rule.w[i] * std::cos(5.0 * rule.r[i]);
    CHECK(acc == doctest::Approx(std::sin(200.0) / 5.0).epsilon(1e-10));
  }

  TEST_CASE("truncation choice") {
    const TruncationChoice a = choose_truncation(1.0, SpectralDecay{1.0, 0.0, 0.0}, 1e-12);
    CHECK(a.R == doctest::Approx(std::sqrt(2.0) * std::log(1e12)).epsilon(1e-3));
    const TruncationChoice b = choose_truncation(1.0, SpectralDecay{1.0, 0.0, 0.0}, 1.0);
    CHECK(b.R == doctest::Approx(1.0));
    const TruncationChoice c = choose_truncation(0.0, SpectralDecay{0.0, 0.0, 1.0}, 1e-8);
    CHECK(c.R == doctest::Approx(1e4).epsilon(1e-3));
    const TruncationChoice d = choose_truncation(0.0, SpectralDecay{1.0, 0.0, 0.0}, 1e-8);
    CHECK(d.no_decay);
  }

  TEST_CASE("spectral envelope of a profile") {
    const PiecewiseLinear box(0.0, 0.5, std::vector<double>(3, 1.0));
    const SpectralDecay B = SpectralDecay::of(box);
    CHECK(B.v0 == doctest::Approx(2.0));
    CHECK(B.c0 == 0.0);
    for (double xi : {3.0, 10.0, 100.0}) {
      const double exact = std::abs(2.0 * std::sin(0.5 * xi) / xi);
      CHECK(exact <= B(xi) + 1e-12);
    }
  }
}
