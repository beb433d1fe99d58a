#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "utm/core.hpp"
#include "utm/piecewise.hpp"

namespace utm {

enum class FdMethod { CrankNicolson, IMEX };

struct OracleRun {
  FdMethod method = FdMethod::CrankNicolson;
  GridSpec grid;
  SolutionField field;
  double convergence_order_estimate = 0.0;  // NaN unless a Richardson triple was run
  bool stability_warning = false;
};

/// Crank-Nicolson on [0, length] with Dirichlet data (zero at the far end on the
/// half-line). With `nonlinear`, the reaction term is added explicitly by
/// Adams-Bashforth extrapolation. The grid supplies n_x, n_t and t_max.
OracleRun fd_solve(const ProblemSpec& spec, const GridSpec& grid, bool nonlinear = false);

/// Runs the grid, its refinement and double refinement (factor 2 in x and t)
/// and estimates the order from the common points. Returns the finest run.
OracleRun fd_richardson(const ProblemSpec& spec, const GridSpec& grid, bool nonlinear = false);

using Params = std::map<std::string, double>;

enum class ExactName { GaussianIVP, Erfc, EigenDecay, SteadyLinear, ManufacturedForced };
ExactName exact_name(const std::string& name);
const char* to_string(ExactName name);

/// GaussianIVP: (1+4t)^{-1/2} e^{-x^2/(1+4t)}; Erfc: erfc(x / 2 sqrt t);
/// EigenDecay (n, l): e^{-(n pi/l)^2 t} sin(n pi x/l); SteadyLinear (a, b, l);
/// ManufacturedForced: (1 - e^{-t}) e^{-x^2}.
double exact_solution(ExactName name, const Params& params, double x, double t);
double exact_solution(const std::string& name, const Params& params, double x, double t);
/// u_t - u_xx of the catalog entry (nonzero only for ManufacturedForced).
double exact_forcing(ExactName name, const Params& params, double x, double t);

struct LaplaceBound {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// ||L phi||_{L2(0,inf)} against sqrt(pi) ||phi||_{L2(0,inf)}. Unless
/// `compact` is set, phi must have decayed below tail_tol at its last knot;
/// it is taken as zero beyond it either way.
LaplaceBound laplace_bound_test(const PiecewiseLinear& phi, double tail_tol = 1e-10, bool compact = false);

/// Nonnegative piecewise-linear profile with random knot values under an
/// exponential envelope, truncated once the envelope drops below 1e-12.
PiecewiseLinear random_decaying_profile(std::mt19937_64& rng);

struct AuditReport {
  std::string scenario;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double bound = 0.0;  // asserted upper bound on the ratio, or infinity
  bool passed = false;
  std::vector<double> series;  // ratio per time level or per data scaling
};

std::vector<std::string> audit_scenarios();
AuditReport estimate_audit(const std::string& scenario);

}  // namespace utm
