#pragma once

#include <map>
#include <string>

#include "utm/core.hpp"
#include "utm/piecewise.hpp"

namespace utm {

struct NormReport {
  double value = 0.0;
  std::map<std::string, double> parts;
  double grid_step = 0.0;
  std::size_t samples = 0;
  double refinement_delta = 0.0;
  double error_bar = 0.0;  // diagonal-cell contribution bound of fractional seminorms
};

enum class PhysicalDomain { HalfLine, Interval };

/// (int (1+xi^2)^s |f^(xi)|^2 dxi / 2 pi)^{1/2}, normalized so s = 0 gives the L2 norm.
NormReport hs_norm_line(const PiecewiseLinear& f, double s);

/// sum_{j <= floor(s)} ||d^j f||_{L2} plus the Gagliardo seminorm of order s - floor(s).
NormReport hs_norm_physical(const PiecewiseLinear& f, double s, PhysicalDomain domain);

/// ||g||_{L2(0,T)} + ||g||_m on (0, T).
NormReport ht_norm(const PiecewiseLinear& g, double m, double T);

/// sup_j t_j^alpha ||u(., t_j)||_{L^p}.
double calpha_lp_norm(const SolutionField& field, double alpha, int p);

/// b at the midpoint of ((2s+1)/4, 1/2) and alpha = (1/p)(1/2 - b).
double b_midpoint(double s);
double alpha_exponent(double s, int p);

double data_norm(const ProblemSpec& spec);

/// X norm (sup_t H^s_x + sup_x H^m_t); the rough regime adds the C^alpha L^p term.
NormReport xy_norm(const SolutionField& field, const ProblemSpec& spec);

}  // namespace utm
