#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "utm/error.hpp"
#include "utm/numerics.hpp"
#include "utm/oracle.hpp"

using namespace utm;

namespace {

ProblemSpec interval_spec(const std::function<double(double)>& u0, double h) {
  ProblemSpec sp;
  sp.domain = DomainKind::Interval;
  sp.length = 1.0;
  sp.T = 0.1;
  sp.s = classify_regime(1.0, 3);
  sp.u0 = SampledProfile(fixtures::sampled(u0, 0.0, 1.0, 1001));
  sp.g0 = fixtures::constant_signal(0.0, 0.1);
  sp.h0 = fixtures::constant_signal(h, 0.1);
  sp.grid = GridSpec{11, 2, 1.0, 0.1};
  return validate_problem(sp);
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("catalog") {
    CHECK(exact_solution("Erfc", {}, 1.0, 0.25) == doctest::Approx(std::erfc(1.0)));
    CHECK(exact_solution(ExactName::EigenDecay, {{"n", 1}, {"l", 1}}, 0.5, 0.1) ==
          doctest::Approx(std::exp(-kPi * kPi * 0.1)));
    CHECK(exact_solution("SteadyLinear", {{"a", 0}, {"b", 1}, {"l", 1}}, 0.3, 7.0) == doctest::Approx(0.3));
    CHECK(exact_solution("GaussianIVP", {}, 0.0, 0.25) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(exact_solution("ManufacturedForced", {}, 0.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
    CHECK(exact_forcing(ExactName::Erfc, {}, 0.5, 0.5) == 0.0);
    CHECK_THROWS_AS(exact_name("Nope"), Error);
    CHECK(exact_name(to_string(ExactName::SteadyLinear)) == ExactName::SteadyLinear);
  }

  TEST_CASE("manufactured forcing is u_t - u_xx") {
    const double x = 0.7, t = 0.4, e = 1e-4;
    auto u = [](double a, double b) { return exact_solution(ExactName::ManufacturedForced, {}, a, b); };
    const double ut = (u(x, t + e) - u(x, t - e)) / (2 * e);
    const double uxx = (u(x + e, t) - 2 * u(x, t) + u(x - e, t)) / (e * e);
    CHECK(exact_forcing(ExactName::ManufacturedForced, {}, x, t) == doctest::Approx(ut - uxx).epsilon(1e-6));
  }

  TEST_CASE("Crank-Nicolson") {
    const ProblemSpec eig = interval_spec([](double x) { return std::sin(kPi * x); }, 0.0);
    const OracleRun run = fd_solve(eig, GridSpec{401, 401, 1.0, 0.1});
    CHECK(std::abs(run.field.at(200, 400) - std::exp(-kPi * kPi * 0.1)) < 1e-4);
    CHECK_FALSE(run.stability_warning);
    const ProblemSpec st = interval_spec([](double x) { return x; }, 1.0);
    const OracleRun sr = fd_solve(st, GridSpec{51, 21, 1.0, 0.1});
    for (std::size_t i = 0; i < 51; ++i) CHECK(std::abs(sr.field.at(i, 20) - sr.field.x_grid[i]) < 1e-13);
  }

  TEST_CASE("Richardson order") {
    const ProblemSpec eig = interval_spec([](double x) { return std::sin(kPi * x); }, 0.0);
    const OracleRun run = fd_richardson(eig, GridSpec{21, 21, 1.0, 0.1});
    CHECK(std::abs(run.convergence_order_estimate - 2.0) < 0.2);
  }

  TEST_CASE("Laplace transform bound") {
    const PiecewiseLinear e = fixtures::sampled([](double t) { return std::exp(-t); }, 0.0, 40.0, 40001);
    const LaplaceBound b = laplace_bound_test(e);
    CHECK(b.lhs == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(b.rhs == doctest::Approx(std::sqrt(kPi / 2.0)).epsilon(1e-6));
    CHECK(b.ratio == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-6));
    CHECK(laplace_bound_test(PiecewiseLinear(0.0, 0.1, std::vector<double>(11, 0.0))).lhs == 0.0);
    CHECK_THROWS_AS(laplace_bound_test(fixtures::sampled([](double t) { return std::exp(-t); }, 0.0, 2.0, 201)), Error);
    std::mt19937_64 rng(7);
    for (int k = 0; k < 5; ++k) CHECK(laplace_bound_test(random_decaying_profile(rng)).ratio < 1.0);
  }

  TEST_CASE("audits") {
    const AuditReport z = estimate_audit("zero-data");
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
    CHECK(z.ratio == 0.0);
    CHECK(z.passed);
    CHECK(estimate_audit("ivp-gaussian-s0").passed);
    CHECK_THROWS_AS(estimate_audit("nope"), Error);
  }
}
