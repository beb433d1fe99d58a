#pragma once

#include <optional>
#include <string>
#include <vector>

#include "utm/core.hpp"
#include "utm/piecewise.hpp"

namespace utm {

struct QuadratureDiagnostics {
  std::string term;
  double radius = 0.0;
  double residual = 0.0;  // bound on the truncated tail
  std::size_t nodes = 0;
  bool warning = false;   // truncation capped above tolerance
};

struct LinearSolveReport {
  SolutionField field;
  std::vector<std::pair<std::string, SolutionField>> components;
  std::vector<QuadratureDiagnostics> quadrature_residuals;

  bool residual_warning() const;
};

/// Whole-line heat IVP, U(x,t) = (1/pi) Re int_0^inf e^{i xi x - xi^2 t} U0^(xi) dxi.
class IvpEvaluator {
 public:
  IvpEvaluator(const PiecewiseLinear& U0, double t_min, double x_extent, const Tolerances& tol);
  Matrix eval(const std::vector<double>& xs, const std::vector<double>& ts) const;
  const QuadratureDiagnostics& diagnostics() const { return diag_; }

 private:
  double cutoff(double t) const;

  PiecewiseLinear U0_;
  Tolerances tol_;
  bool zero_ = false;
  double scale_ = 0.0;
  double v0_ = 0.0;
  double v1_ = 0.0;
  std::vector<double> xi_;
  std::vector<double> w_;
  std::vector<cplx> hat_;
  QuadratureDiagnostics diag_;
};

/// Zero-data forced IVP on the whole line. F is sampled on x >= 0 and extended
/// evenly (or by zero) to x < 0.
class ForcedIvpEvaluator {
 public:
  ForcedIvpEvaluator(const SampledField& F, bool even, double x_extent, double t_max, const Tolerances& tol);
  Matrix eval(const std::vector<double>& xs, const std::vector<double>& ts) const;
  const QuadratureDiagnostics& diagnostics() const { return diag_; }

 private:
  std::size_t rows_ = 0;
  double dt_ = 1.0;
  bool zero_ = false;
  Tolerances tol_;
  std::vector<double> xi_;
  std::vector<double> w_;
  std::vector<cplx> hat_;  // hat_[n * rows_ + k]
  QuadratureDiagnostics diag_;
};

enum class BoundaryQuadrature {
  Causal,   // g truncated at the evaluation time, contour rotated into the decay sector
  Literal,  // full transform of the extended datum on the real kappa axis
};

enum class BoundaryGeometry { HalfLine, Interval };

/// Pure IBVP with zero initial datum and zero forcing: boundary datum g at
/// x = 0 (half-line) or at x = l with zero at x = 0 (interval).
Matrix pure_boundary_grid(const PiecewiseLinear& g, BoundaryGeometry geometry, double ell,
                          const std::vector<double>& xs, const std::vector<double>& ts, const Tolerances& tol,
                          BoundaryQuadrature mode = BoundaryQuadrature::Causal,
                          QuadratureDiagnostics* diag = nullptr);

double solve_heat_ivp(const PiecewiseLinear& U0, double x, double t, const Tolerances& tol = {});
double solve_forced_ivp(const SampledField& F, double x, double t, const Tolerances& tol = {});
double solve_pure_halfline(const PiecewiseLinear& g, double x, double t, const Tolerances& tol = {},
                           BoundaryQuadrature mode = BoundaryQuadrature::Causal);
double solve_pure_interval(const PiecewiseLinear& h, double ell, double x, double t, const Tolerances& tol = {},
                           BoundaryQuadrature mode = BoundaryQuadrature::Causal);

/// sin(z x) / sin(z l), by a Taylor ratio for |z| < k_switch / l.
cplx interval_ratio(cplx z, double x, double ell, double k_switch);
cplx interval_ratio_series(cplx z, double x, double ell);
cplx interval_ratio_direct(cplx z, double x, double ell);

LinearSolveReport solve_halfline_decomposed(const ProblemSpec& spec);

/// Five-term formula over the real axis and the boundary of D+.
SolutionField solve_halfline_direct(const ProblemSpec& spec);
SolutionField solve_halfline_direct(const ProblemSpec& spec, const std::vector<double>& xs,
                                    const std::vector<double>& ts,
                                    std::vector<QuadratureDiagnostics>* diags = nullptr);

LinearSolveReport solve_interval(const ProblemSpec& spec);

/// Dispatches on the domain kind.
LinearSolveReport solve_linear(const ProblemSpec& spec);

enum class End { Left, Right };
SampledSignal boundary_trace(const SolutionField& field, End end);

}  // namespace utm
