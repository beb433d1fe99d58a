#include "utm/core.hpp"

#include <algorithm>
#include <cmath>

#include "utm/error.hpp"
#include "utm/numerics.hpp"

namespace utm {

SobolevIndex classify_regime(double s, int p) {
  if (p < 2) throw Error(ErrorCode::OutOfRange, "p must be at least 2");
  SobolevIndex idx;
  idx.s = s;
  idx.m = (2.0 * s + 1.0) / 4.0;
  if (s > 0.5 && s < 1.5) {
    idx.regime = Regime::Smooth;
  } else if (s > 0.5 - 1.0 / p && s < 0.5) {
    idx.regime = Regime::Rough;
  } else {
    throw Error(ErrorCode::OutOfRange, "s = " + std::to_string(s) + " is in neither regime for p = " +
                                           std::to_string(p));
  }
  return idx;
}

const char* to_string(Regime r) { return r == Regime::Smooth ? "smooth" : "rough"; }
const char* to_string(DomainKind d) { return d == DomainKind::HalfLine ? "half-line" : "interval"; }
const char* to_string(NonlinearityForm f) { return f == NonlinearityForm::PowerUp ? "power" : "abs-power"; }

void GridSpec::check() const {
  if (n_x < 2 || n_t < 2) throw Error(ErrorCode::BadGrid, "grid needs n_x, n_t >= 2");
  if (!(x_max > 0.0) || !(t_max > 0.0)) throw Error(ErrorCode::BadGrid, "grid extents must be positive");
}

std::vector<double> GridSpec::xs() const {
  std::vector<double> v(n_x);
  for (std::size_t i = 0; i < n_x; ++i) v[i] = x_max * static_cast<double>(i) / static_cast<double>(n_x - 1);
  return v;
}

std::vector<double> GridSpec::ts() const {
  std::vector<double> v(n_t);
  for (std::size_t j = 0; j < n_t; ++j) v[j] = t_max * static_cast<double>(j) / static_cast<double>(n_t - 1);
  return v;
}

namespace {

bool covers(const PiecewiseLinear& f, double lo, double hi) {
  const double eps = 1e-9 * f.step();
  return std::abs(f.origin() - lo) <= eps && f.end() >= hi - eps;
}

void check_compat(double a, double b, double tol, const char* what) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  if (std::abs(a - b) > tol * scale)
    throw Error(ErrorCode::IncompatibleData, std::string(what) + ": " + std::to_string(a) + " vs " +
                                                 std::to_string(b));
}

SampledSignal zero_signal(double T) { return SampledSignal(PiecewiseLinear(0.0, T, {0.0, 0.0})); }

}  // namespace

ProblemSpec validate_problem(const ProblemSpec& in) {
  ProblemSpec spec = in;
  if (!(spec.T > 0.0) || spec.T >= 1.0) throw Error(ErrorCode::BadHorizon, "T must lie in (0, 1)");
  if (spec.p < 2) throw Error(ErrorCode::BadNonlinearity, "p must be an integer >= 2");
  if (spec.form == NonlinearityForm::PowerUp && spec.p % 2 == 0)
    throw Error(ErrorCode::BadNonlinearity, "u^p needs (p-1)/2 integral");
  if (spec.p % 2 == 1) spec.form = NonlinearityForm::PowerUp;
  spec.s = classify_regime(spec.s.s, spec.p);
  if (!(spec.length > 0.0)) throw Error(ErrorCode::BadGrid, "domain length must be positive");
  if (!(spec.c_sp > 0.0)) throw Error(ErrorCode::OutOfRange, "c_sp must be positive");
  const Tolerances& tol = spec.tol;
  if (!(tol.quad > 0.0) || !(tol.compat > 0.0) || !(tol.tail > 0.0) || !(tol.iter > 0.0) || tol.max_iter < 1 ||
      tol.gauss_order < 4 || tol.trace_samples < 3 || !(tol.literal_nodes > 1000.0) || !(tol.panel_phase > 0.0) || !(tol.max_radius > 1.0) || !(tol.k_switch > 0.0) ||
      tol.contour_angle < 0.0 || tol.contour_angle >= 0.25 * kPi)
    throw Error(ErrorCode::OutOfRange, "tolerance settings out of range");

  if (spec.u0.empty()) throw Error(ErrorCode::InsufficientData, "missing initial datum");
  if (!covers(spec.u0, 0.0, spec.length))
    throw Error(ErrorCode::BadGrid, "initial datum must be sampled on [0, length]");
  if (spec.g0.empty()) spec.g0 = zero_signal(spec.T);
  if (!covers(spec.g0, 0.0, spec.T)) throw Error(ErrorCode::BadGrid, "g0 must be sampled on [0, T]");
  if (spec.domain == DomainKind::Interval) {
    if (spec.h0.empty()) spec.h0 = zero_signal(spec.T);
    if (!covers(spec.h0, 0.0, spec.T)) throw Error(ErrorCode::BadGrid, "h0 must be sampled on [0, T]");
  } else {
    spec.h0 = SampledSignal();
    if (std::abs(spec.u0.left_limit(spec.length)) >= tol.tail)
      throw Error(ErrorCode::TailTooFat, "|u0(L)| exceeds the tail tolerance; enlarge L");
  }
  if (spec.s.regime == Regime::Smooth) {
    check_compat(spec.u0(0.0), spec.g0(0.0), tol.compat, "u0(0) != g0(0)");
    if (spec.domain == DomainKind::Interval)
      check_compat(spec.u0.left_limit(spec.length), spec.h0(0.0), tol.compat, "u0(l) != h0(0)");
  }
  if (spec.forcing) {
    const SampledField& f = *spec.forcing;
    if (f.nx() < 2 || f.nt() < 2) throw Error(ErrorCode::BadGrid, "forcing needs a 2x2 grid at least");
    const double x_end = f.x(f.nx() - 1);
    if (std::abs(f.x_origin) > 1e-12 || x_end < spec.length - 1e-9 * f.dx || f.t_end() < spec.T - 1e-9 * f.dt)
      throw Error(ErrorCode::BadGrid, "forcing must cover [0, length] x [0, T]");
    if (f.is_zero()) spec.forcing.reset();
  }
  spec.grid.check();
  if (spec.grid.t_max > spec.T * (1.0 + 1e-12)) throw Error(ErrorCode::BadGrid, "grid t_max exceeds T");
  if (spec.grid.x_max > spec.length * (1.0 + 1e-12)) throw Error(ErrorCode::BadGrid, "grid x_max exceeds length");
  return spec;
}

SolutionField make_field(const std::vector<double>& xs, const std::vector<double>& ts) {
  SolutionField f;
  f.x_grid = xs;
  f.t_grid = ts;
  f.values = Matrix(ts.size(), xs.size());
  return f;
}

void SolutionField::refresh_traces(bool interval) {
  left_trace.assign(t_grid.size(), 0.0);
  right_trace.clear();
  for (std::size_t j = 0; j < t_grid.size(); ++j) left_trace[j] = values(j, 0);
  if (interval) {
    right_trace.assign(t_grid.size(), 0.0);
    for (std::size_t j = 0; j < t_grid.size(); ++j) right_trace[j] = values(j, x_grid.size() - 1);
  }
}

bool SolutionField::all_finite() const {
  return std::all_of(values.data.begin(), values.data.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace utm
