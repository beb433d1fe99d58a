#pragma once

#include <functional>
#include <vector>

#include "utm/piecewise.hpp"

namespace utm {

struct Ray {
  double angle = 0.0;
  cplx direction{1.0, 0.0};

  static Ray at(double angle);
};

struct ContourNodeSet {
  std::vector<cplx> nodes;
  std::vector<cplx> weights;    // include the ray direction and orientation
  std::vector<cplx> k_squared;
  std::vector<int> ray_index;
  std::vector<Ray> rays;
  double R = 0.0;
  double error_estimate = 0.0;
};

/// Oscillation of an integrand along a ray parameterized by r >= 0:
/// time factor e^{i r^2 t e^{2i phi}} for t up to time_span, spatial factor
/// with phase rate space_phase * x and decay space_decay * x for x up to space_extent.
struct PhaseModel {
  double time_span = 0.0;
  double angle = 0.0;
  double space_extent = 0.0;
  double space_phase = 1.0;
  double space_decay = 0.0;
  double log_eps = 32.0;

  double rate(double r) const;
};

/// Real quadrature rule on [0, R]: geometric panels toward 0, then panels
/// sized to `phase_per_panel` radians of the model's oscillation.
struct RadialRule {
  std::vector<double> r;
  std::vector<double> w;
  double R = 0.0;
};
RadialRule radial_rule(double R, int n, const PhaseModel& model, double phase_per_panel = 8.0);

/// Number of panels radial_rule would build, stopping early past `limit`.
std::size_t panel_count(double R, const PhaseModel& model, double phase_per_panel, std::size_t limit);

/// Largest R <= R_max whose rule stays within `max_nodes` nodes.
double radius_for_budget(double R_max, int n, const PhaseModel& model, double phase_per_panel, double max_nodes);

/// Positively oriented boundary of D+ = {Im k >= |Re k|}: the a^3 ray inward,
/// then the a ray outward.
ContourNodeSet dplus_boundary_nodes(double R, int n, const PhaseModel& model = {});

/// Real kappa nodes on (0, R] for the substituted pure-IBVP integrals.
ContourNodeSet substituted_halfline_nodes(double R, int n, const PhaseModel& model = {});

/// Envelope B(R) = c0 + v0/R + v1/R^2 of a spectral datum.
struct SpectralDecay {
  double c0 = 0.0;
  double v0 = 0.0;
  double v1 = 0.0;

  double operator()(double R) const { return c0 + v0 / R + v1 / (R * R); }
  static SpectralDecay of(const PiecewiseLinear& f);
};

struct TruncationChoice {
  double R = 0.0;
  double residual = 0.0;
  bool capped = false;
  bool no_decay = false;
};

/// Smallest R in [R_min, R_max] with bound(R) < tol, for bounds that are
/// eventually decreasing.
TruncationChoice choose_truncation(const std::function<double(double)>& bound, double tol, double R_min = 1.0,
                                   double R_max = 1e6);

/// Smallest R with e^{-x_min R decay_rate} B(R) < tol.
TruncationChoice choose_truncation(double x_min, const SpectralDecay& B, double tol,
                                   double decay_rate = 0.70710678118654752440, double R_min = 1.0,
                                   double R_max = 1e6);

}  // namespace utm
