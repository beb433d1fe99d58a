#pragma once

#include <optional>
#include <string>
#include <vector>

#include "utm/piecewise.hpp"

namespace utm {

enum class Regime { Smooth, Rough };

struct SobolevIndex {
  double s = 1.0;
  double m = 0.75;
  Regime regime = Regime::Smooth;
};

SobolevIndex classify_regime(double s, int p);

enum class DomainKind { HalfLine, Interval };
enum class NonlinearityForm { PowerUp, AbsPower };

const char* to_string(Regime r);
const char* to_string(DomainKind d);
const char* to_string(NonlinearityForm f);

struct Tolerances {
  double quad = 1e-10;        // absolute quadrature target, relative to the data scale
  double compat = 1e-8;       // compatibility u0(0) = g0(0), relative
  double tail = 1e-10;        // |u0(L)| bound on the half-line
  double iter = 1e-8;         // Picard stopping tolerance
  int max_iter = 50;
  int gauss_order = 16;       // nodes per panel
  double panel_phase = 4.0;   // radians of oscillation per panel
  double max_radius = 4e4;    // truncation cap for contour integrals
  double contour_angle = 0.2617993877991494;  // pi/12 rotation of the pure-IBVP contour
  double k_switch = 1e-3;     // times 1/l: series branch of the interval ratio
  int trace_samples = 2001;   // knots on [0, T] for boundary corrections
  double literal_nodes = 4e5; // node budget for contours without rotation
  int threads = 0;
};

struct GridSpec {
  std::size_t n_x = 2;
  std::size_t n_t = 2;
  double x_max = 1.0;
  double t_max = 1.0;

  void check() const;
  double dx() const { return x_max / static_cast<double>(n_x - 1); }
  double dt() const { return t_max / static_cast<double>(n_t - 1); }
  std::vector<double> xs() const;
  std::vector<double> ts() const;
};

struct ProblemSpec {
  DomainKind domain = DomainKind::HalfLine;
  double length = 10.0;  // L_trunc on the half-line, l on the interval
  double T = 0.5;
  SobolevIndex s;
  int p = 3;
  NonlinearityForm form = NonlinearityForm::AbsPower;
  SampledProfile u0;
  SampledSignal g0;
  SampledSignal h0;
  std::optional<SampledField> forcing;
  Tolerances tol;
  double c_sp = 1.0;
  bool affine_lift = true;  // interval: subtract a + (b - a) x / l before the decomposition
  GridSpec grid;            // evaluation grid of the solution field
};

/// Checks every invariant and returns the normalized spec (odd p always uses
/// PowerUp, which coincides with |u|^{p-1}u). Idempotent.
ProblemSpec validate_problem(const ProblemSpec& spec);

struct SolutionField {
  std::vector<double> x_grid;
  std::vector<double> t_grid;
  Matrix values;  // values(j, i) = u(x_i, t_j)
  std::vector<double> left_trace;
  std::vector<double> right_trace;  // empty on the half-line

  double at(std::size_t i_x, std::size_t j_t) const { return values(j_t, i_x); }
  void refresh_traces(bool interval);
  bool all_finite() const;
};

SolutionField make_field(const std::vector<double>& xs, const std::vector<double>& ts);

}  // namespace utm
