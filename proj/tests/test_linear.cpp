#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "utm/error.hpp"
#include "utm/linear.hpp"
#include "utm/numerics.hpp"
#include "utm/oracle.hpp"

using namespace utm;

namespace {

const PiecewiseLinear& gaussian_line() {
  static const PiecewiseLinear g =
      PiecewiseLinear::sample([](double x) { return std::exp(-x * x); }, -10.0, 20.0, 4001);
  return g;
}

ProblemSpec gaussian_halfline() {
  ProblemSpec sp;
  sp.domain = DomainKind::HalfLine;
  sp.length = 10.0;
  sp.T = 0.5;
  sp.s = classify_regime(1.0, 3);
  sp.u0 = SampledProfile(PiecewiseLinear::sample([](double x) { return std::exp(-x * x); }, 0.0, 10.0, 2001));
  sp.g0 = SampledSignal(PiecewiseLinear::sample([](double t) { return 1.0 / std::sqrt(1.0 + 4.0 * t); }, 0, 0.5, 1001));
  sp.grid.n_x = 9;
  sp.grid.x_max = 2.0;
  sp.grid.n_t = 3;
  sp.grid.t_max = 0.5;
  return validate_problem(sp);
}

ProblemSpec zero_interval() {
  ProblemSpec sp;
  sp.domain = DomainKind::Interval;
  sp.length = 1.0;
  sp.T = 0.5;
  sp.s = classify_regime(1.0, 3);
  sp.u0 = fixtures::zero_profile(1.0);
  sp.g0 = fixtures::constant_signal(0.0, 0.5);
  sp.h0 = sp.g0;
  sp.grid.n_x = 5;
  sp.grid.x_max = 1.0;
  sp.grid.n_t = 5;
  sp.grid.t_max = 0.5;
  return sp;
}

SampledField gaussian_forcing(double t_end, std::size_t rows) {
  SampledField F;
  F.dx = 0.01;
  F.dt = t_end / static_cast<double>(rows - 1);
  F.values = Matrix(rows, 1001);
  for (std::size_t k = 0; k < rows; ++k)
    for (std::size_t i = 0; i < 1001; ++i) F.values(k, i) = std::exp(-F.x(i) * F.x(i));
  return F;
}

}  // namespace

TEST_SUITE("linear") {
  TEST_CASE("heat IVP against the Gaussian evolution") {
    CHECK(solve_heat_ivp(gaussian_line(), 0.0, 0.25) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(solve_heat_ivp(gaussian_line(), 1.0, 0.25) ==
          doctest::Approx(std::exp(-0.5) / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(solve_heat_ivp(gaussian_line(), 0.3, 0.0) == doctest::Approx(std::exp(-0.09)).epsilon(1e-6));
    CHECK(solve_heat_ivp(PiecewiseLinear(-1.0, 0.5, std::vector<double>(5, 0.0)), 0.0, 0.3) == 0.0);
  }

  TEST_CASE("forced IVP") {
    Tolerances tol;
    tol.quad = 1e-7;
    const SampledField F = gaussian_forcing(2.0, 11);
    CHECK(solve_forced_ivp(F, 0.0, 2.0, tol) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(solve_forced_ivp(F, 0.0, 0.0) == 0.0);
    SampledField M;
    M.dx = 0.01;
    M.dt = 0.02;
    M.values = Matrix(51, 1001);
    for (std::size_t k = 0; k < 51; ++k)
      for (std::size_t i = 0; i < 1001; ++i)
        M.values(k, i) = exact_forcing(ExactName::ManufacturedForced, {}, M.x(i), M.t(k));
    CHECK(solve_forced_ivp(M, 0.0, 1.0, tol) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-4));
    SampledField Z = M;
    std::fill(Z.values.data.begin(), Z.values.data.end(), 0.0);
    CHECK(solve_forced_ivp(Z, 0.4, 0.5) == 0.0);
  }

  TEST_CASE("pure half-line problem") {
    const PiecewiseLinear g(0.0, 0.005, std::vector<double>(101, 1.0));
    CHECK(solve_pure_halfline(g, 1.0, 0.25) == doctest::Approx(std::erfc(1.0)).epsilon(1e-7));
    CHECK(solve_pure_halfline(g, 0.0, 0.3) == doctest::Approx(1.0));
    CHECK(solve_pure_halfline(g, 0.5, 0.0) == 0.0);
    CHECK(solve_pure_halfline(PiecewiseLinear(0.0, 0.1, std::vector<double>(6, 0.0)), 1.0, 0.3) == 0.0);
    const PiecewiseLinear smooth = PiecewiseLinear::sample(
        [](double t) { return std::sin(kPi * t) * std::sin(kPi * t); }, 0.0, 1.0, 1001);
    CHECK(solve_pure_halfline(smooth, 0.0, 0.3) == doctest::Approx(smooth(0.3)));
  }

  TEST_CASE("causal and literal quadratures agree") {
    const PiecewiseLinear g = PiecewiseLinear::sample(
        [](double t) { return std::sin(kPi * t) * std::sin(kPi * t); }, 0.0, 1.0, 1001);
    for (double x : {0.3, 1.0}) {
      const double a = solve_pure_halfline(g, x, 0.4, {}, BoundaryQuadrature::Causal);
      const double b = solve_pure_halfline(g, x, 0.4, {}, BoundaryQuadrature::Literal);
      CHECK(std::abs(a - b) < 1e-6);
    }
  }

  TEST_CASE("pure interval problem") {
    const PiecewiseLinear h(0.0, 0.005, std::vector<double>(101, 1.0));
    CHECK(solve_pure_interval(h, 1.0, 1.0, 0.3) == doctest::Approx(1.0));
    CHECK(solve_pure_interval(h, 1.0, 0.0, 0.3) == 0.0);
    CHECK(solve_pure_interval(PiecewiseLinear(0.0, 0.1, std::vector<double>(6, 0.0)), 1.0, 0.5, 0.3) == 0.0);
    // Crank-Nicolson reference for h = 1 on (0, 0.5].
    ProblemSpec sp = zero_interval();
    sp.s = classify_regime(0.25, 3);
    sp.h0 = fixtures::constant_signal(1.0, 0.5, 101);
    GridSpec g;
    g.n_x = 401;
    g.n_t = 801;
    g.t_max = 0.4;
    const OracleRun fd = fd_solve(sp, g);
    const double ref = fd.field.at(200, 800);
    const double v = solve_pure_interval(h, 1.0, 0.5, 0.4);
    CHECK(std::abs(v - 0.5) < 2e-2);
    CHECK(std::abs(v - ref) < 1e-4);
  }

  TEST_CASE("interval ratio near k = 0") {
    for (double x : {0.0, 0.3, 1.0}) CHECK(std::abs(interval_ratio(cplx(1e-8, 1e-8), x, 1.0, 1e-3) - x) < 1e-12);
    for (double r : {1e-4, 1e-3, 2e-3}) {
      const cplx z = std::polar(r, 0.7);
      CHECK(std::abs(interval_ratio_series(z, 0.4, 1.0) - interval_ratio_direct(z, 0.4, 1.0)) < 1e-12);
    }
    // Large |z| on either side of the real axis stays finite.
    CHECK(std::isfinite(std::abs(interval_ratio(cplx(300.0, 200.0), 0.4, 1.0, 1e-3))));
    CHECK(std::isfinite(std::abs(interval_ratio(cplx(300.0, -200.0), 0.4, 1.0, 1e-3))));
  }

  TEST_CASE("decomposed half-line solve") {
    const ProblemSpec sp = gaussian_halfline();
    const LinearSolveReport rep = solve_halfline_decomposed(sp);
    CHECK(rep.components.size() == 4);
    CHECK(rep.field.at(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
    for (std::size_t j = 0; j < rep.field.t_grid.size(); ++j)
      for (std::size_t i = 0; i < rep.field.x_grid.size(); ++i) {
        const double x = rep.field.x_grid[i];
        const double t = rep.field.t_grid[j];
        CHECK(rep.field.at(i, j) == doctest::Approx(std::exp(-x * x / (1 + 4 * t)) / std::sqrt(1 + 4 * t)).epsilon(1e-6));
      }
    // Components sum to the field.
    for (std::size_t k = 0; k < rep.field.values.data.size(); ++k) {
      double sum = 0.0;
      for (const auto& [name, f] : rep.components) sum += f.values.data[k];
      CHECK(sum == doctest::Approx(rep.field.values.data[k]).epsilon(1e-12));
    }
  }

  TEST_CASE("zero data gives zero fields") {
    ProblemSpec sp = gaussian_halfline();
    sp.u0 = fixtures::zero_profile(10.0);
    sp.g0 = fixtures::constant_signal(0.0, 0.5);
    const LinearSolveReport rep = solve_halfline_decomposed(validate_problem(sp));
    for (double v : rep.field.values.data) CHECK(v == 0.0);
    for (const auto& [name, f] : rep.components)
      for (double v : f.values.data) CHECK(v == 0.0);
    for (double v : solve_halfline_direct(validate_problem(sp)).values.data) CHECK(v == 0.0);
    for (double v : solve_interval(validate_problem(zero_interval())).field.values.data) CHECK(v == 0.0);
  }

  TEST_CASE("direct five-term formula matches the IVP restriction") {
    const ProblemSpec sp = gaussian_halfline();
    const SolutionField f = solve_halfline_direct(sp);
    for (std::size_t j = 0; j < f.t_grid.size(); ++j)
      for (std::size_t i = 0; i < f.x_grid.size(); ++i) {
        const double x = f.x_grid[i];
        const double t = f.t_grid[j];
        CHECK(std::abs(f.at(i, j) - std::exp(-x * x / (1 + 4 * t)) / std::sqrt(1 + 4 * t)) < 1e-6);
      }
  }

  TEST_CASE("forced half-line solve with a manufactured solution") {
    ProblemSpec sp = gaussian_halfline();
    sp.length = 8.0;
    sp.u0 = fixtures::zero_profile(8.0, 801);
    sp.g0 = SampledSignal(PiecewiseLinear::sample([](double t) { return -std::expm1(-t); }, 0.0, 0.5, 501));
    SampledField F;
    F.dx = 0.01;
    F.dt = 0.01;
    F.values = Matrix(51, 801);
    for (std::size_t k = 0; k < 51; ++k)
      for (std::size_t i = 0; i < 801; ++i) F.values(k, i) = exact_forcing(ExactName::ManufacturedForced, {}, F.x(i), F.t(k));
    sp.forcing = F;
    sp.tol.quad = 1e-8;
    const ProblemSpec v = validate_problem(sp);
    const LinearSolveReport dec = solve_halfline_decomposed(v);
    const SolutionField dir = solve_halfline_direct(v);
    for (std::size_t j = 0; j < dec.field.t_grid.size(); ++j)
      for (std::size_t i = 0; i < dec.field.x_grid.size(); ++i) {
        const double exact = exact_solution(ExactName::ManufacturedForced, {}, dec.field.x_grid[i], dec.field.t_grid[j]);
        CHECK(std::abs(dec.field.at(i, j) - exact) < 1e-4);
        CHECK(std::abs(dir.at(i, j) - dec.field.at(i, j)) < 1e-5);
      }
  }

  TEST_CASE("interval solves") {
    ProblemSpec sp = zero_interval();
    sp.T = 0.1;
    sp.u0 = SampledProfile(PiecewiseLinear::sample([](double x) { return std::sin(kPi * x); }, 0.0, 1.0, 1001));
    sp.g0 = fixtures::constant_signal(0.0, 0.1);
    sp.h0 = sp.g0;
    sp.grid.n_x = 11;
    sp.grid.t_max = 0.1;
    sp.grid.n_t = 2;
    const LinearSolveReport rep = solve_interval(validate_problem(sp));
    CHECK(rep.field.at(5, 1) == doctest::Approx(std::exp(-kPi * kPi * 0.1)).epsilon(1e-5));

    ProblemSpec st = zero_interval();
    st.u0 = SampledProfile(PiecewiseLinear::sample([](double x) { return x; }, 0.0, 1.0, 101));
    st.h0 = fixtures::constant_signal(1.0, 0.5);
    const LinearSolveReport sr = solve_interval(validate_problem(st));
    for (std::size_t j = 0; j < sr.field.t_grid.size(); ++j)
      for (std::size_t i = 0; i < sr.field.x_grid.size(); ++i) CHECK(std::abs(sr.field.at(i, j) - sr.field.x_grid[i]) < 1e-12);
  }

  TEST_CASE("interval without the affine lift still agrees with the oracle") {
    ProblemSpec sp = zero_interval();
    sp.s = classify_regime(1.0, 3);
    sp.u0 = SampledProfile(PiecewiseLinear::sample([](double x) { return x + std::sin(kPi * x); }, 0.0, 1.0, 1001));
    sp.h0 = SampledSignal(PiecewiseLinear::sample([](double t) { return std::cos(t); }, 0.0, 0.5, 501));
    sp.grid.n_x = 11;
    sp.grid.n_t = 3;
    sp.affine_lift = false;
    const ProblemSpec v = validate_problem(sp);
    const LinearSolveReport rep = solve_interval(v);
    GridSpec g;
    g.n_x = 801;
    g.n_t = 1601;
    g.t_max = 0.5;
    const OracleRun fd = fd_solve(v, g);
    for (std::size_t i = 0; i < 11; ++i) CHECK(std::abs(rep.field.at(i, 2) - fd.field.at(80 * i, 1600)) < 1e-4);
  }

  TEST_CASE("boundary traces") {
    ProblemSpec st = zero_interval();
    st.h0 = fixtures::constant_signal(0.0, 0.5);
    const LinearSolveReport sr = solve_interval(validate_problem(st));
    const SampledSignal right = boundary_trace(sr.field, End::Right);
    CHECK(right.max_abs() == 0.0);

    ProblemSpec er = gaussian_halfline();
    er.s = classify_regime(0.25, 3);
    er.u0 = fixtures::zero_profile(10.0);
    er.g0 = fixtures::constant_signal(1.0, 0.5);
    const LinearSolveReport hr = solve_halfline_decomposed(validate_problem(er));
    const SampledSignal left = boundary_trace(hr.field, End::Left);
    for (std::size_t j = 1; j < hr.field.t_grid.size(); ++j) CHECK(left(hr.field.t_grid[j]) == doctest::Approx(1.0));
    CHECK_THROWS_AS(boundary_trace(hr.field, End::Right), Error);
  }
}
