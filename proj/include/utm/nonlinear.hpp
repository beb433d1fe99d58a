#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <utility>
#include <vector>

#include "utm/core.hpp"

namespace utm {

using Rational = boost::multiprecision::cpp_rational;

double apply_nonlinearity(double u, int p, NonlinearityForm form);
void apply_nonlinearity(Matrix& u, int p, NonlinearityForm form);

struct LifespanResult {
  double value = 0.0;
  double log_value = 0.0;
  bool underflow = false;  // below the supplied time resolution
};

/// Smooth: min{T, 1 / (p^2 (2c)^{2p} d^{2(p-1)})}.
/// Rough: min{T, ((2^{p+2} p)^{1/alpha} (2c)^{p/alpha} d^{(p-1)/alpha})^{-1}}, in log space.
LifespanResult lifespan(double data_norm, int p, double c_sp, Regime regime, double alpha, double T,
                        double resolution = 0.0);

/// The smooth formula evaluated exactly for rational inputs.
Rational lifespan_exact(const Rational& data_norm, int p, const Rational& c_sp, const Rational& T);

struct PicardTrace {
  std::vector<double> iterate_norms;
  std::vector<double> difference_norms;
  std::vector<double> ratios;
  bool converged = false;
  bool non_contraction = false;
  int iterations = 0;
  double T_star = 0.0;
  double lifespan = 0.0;
  double fixed_point_residual = 0.0;
};

struct PicardOptions {
  bool ignore_lifespan = false;  // run at spec.T even when it exceeds the guaranteed lifespan
  double ratio_floor = 1e-14;
  double forced_quad = 1e-7;  // relative quadrature target of the nonlinear forcing solves
};

struct PicardResult {
  SolutionField field;
  PicardTrace trace;
};

/// u_{n+1} = S[u0, g0 (, h0); f + N(u_n)] on the spec grid, which is stretched
/// to cover [0, length] x [0, T] so the sampled nonlinearity is a valid forcing.
PicardResult picard_solve(const ProblemSpec& spec, const PicardOptions& opts = {});

double contraction_ratio(const PicardTrace& trace, double floor = 1e-14);

struct DifferenceBound {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// | |v|^{p-1} v - |w|^{p-1} w |  against  2^{p+1} p (|v|^{p-1} + |w|^{p-1}) |v - w|.
DifferenceBound nonlinearity_difference_bound(std::complex<double> v, std::complex<double> w, int p);

}  // namespace utm
