#include "utm/nonlinear.hpp"

#include <cmath>
#include <limits>

#include "utm/error.hpp"
#include "utm/linear.hpp"
#include "utm/norms.hpp"

namespace utm {

namespace {

void check_form(int p, NonlinearityForm form) {
  if (p < 1) throw Error(ErrorCode::BadNonlinearity, "p must be at least 1");
  if (form == NonlinearityForm::PowerUp && p % 2 == 0)
    throw Error(ErrorCode::BadNonlinearity, "u^p needs (p - 1)/2 to be a natural number");
}

/// For odd p, u^p and |u|^{p-1} u coincide, so one formula serves both forms.
double power_term(double u, int p) { return std::pow(std::abs(u), p - 1) * u; }

}  // namespace

double apply_nonlinearity(double u, int p, NonlinearityForm form) {
  check_form(p, form);
  return power_term(u, p);
}

void apply_nonlinearity(Matrix& u, int p, NonlinearityForm form) {
  check_form(p, form);
  for (double& v : u.data) v = power_term(v, p);
}

LifespanResult lifespan(double data_norm, int p, double c_sp, Regime regime, double alpha, double T,
                        double resolution) {
  if (data_norm < 0.0) throw Error(ErrorCode::OutOfRange, "data norm must be nonnegative");
  if (c_sp <= 0.0) throw Error(ErrorCode::OutOfRange, "c_sp must be positive");
  if (p < 2) throw Error(ErrorCode::BadNonlinearity, "p must be at least 2");
  LifespanResult out;
  out.value = T;
  out.log_value = std::log(T);
  if (data_norm == 0.0) return out;
  const double pd = static_cast<double>(p);
  double log_star;
  if (regime == Regime::Smooth) {
    log_star = -(2.0 * std::log(pd) + 2.0 * pd * std::log(2.0 * c_sp) + 2.0 * (pd - 1.0) * std::log(data_norm));
  } else {
    if (!(alpha > 0.0)) throw Error(ErrorCode::OutOfRange, "the rough lifespan needs alpha > 0");
    log_star = -((pd + 2.0) * std::log(2.0) + std::log(pd) + pd * std::log(2.0 * c_sp) +
                 (pd - 1.0) * std::log(data_norm)) /
               alpha;
  }
  if (log_star < out.log_value) {
    out.log_value = log_star;
    out.value = regime == Regime::Smooth
                    ? 1.0 / (pd * pd * std::pow(2.0 * c_sp, 2 * p) * std::pow(data_norm, 2 * (p - 1)))
                    : std::exp(log_star);
  }
  out.underflow = out.value < resolution || out.value < std::numeric_limits<double>::min();
  return out;
}

Rational lifespan_exact(const Rational& data_norm, int p, const Rational& c_sp, const Rational& T) {
  if (data_norm == 0) return T;
  Rational denom = Rational(p) * p;
  for (int k = 0; k < 2 * p; ++k) denom *= 2 * c_sp;
  for (int k = 0; k < 2 * (p - 1); ++k) denom *= data_norm;
  const Rational star = 1 / denom;
  return star < T ? star : T;
}

PicardResult picard_solve(const ProblemSpec& spec_in, const PicardOptions& opts) {
  ProblemSpec spec = validate_problem(spec_in);
  spec.grid.x_max = spec.length;
  spec.grid.t_max = spec.T;
  spec.grid.check();

  PicardResult out;
  PicardTrace& tr = out.trace;
  const double d = data_norm(spec);
  const double alpha = spec.s.regime == Regime::Rough ? alpha_exponent(spec.s.s, spec.p) : 0.0;
  const LifespanResult life = lifespan(d, spec.p, spec.c_sp, spec.s.regime, alpha, 1.0, spec.grid.dt());
  tr.lifespan = life.value;
  if (spec.T > life.value && !opts.ignore_lifespan)
    throw Error(ErrorCode::BadHorizon, "T exceeds the guaranteed lifespan " + std::to_string(life.value));
  tr.T_star = spec.T;

  const LinearSolveReport hom = solve_linear(spec);
  SolutionField u = hom.field;

  // Zero data with the nonlinearity as forcing.
  ProblemSpec forced = spec;
  forced.u0 = SampledProfile(spec.u0.scaled(0.0));
  forced.g0 = SampledSignal(spec.g0.scaled(0.0));
  if (spec.domain == DomainKind::Interval) forced.h0 = SampledSignal(spec.h0.scaled(0.0));
  // The quadrature target is relative to the forcing scale; the nonlinear
  // correction only has to be resolved well below the iteration tolerance.
  forced.tol.quad = std::max(spec.tol.quad, opts.forced_quad);

  auto norm_of = [&](const SolutionField& f) { return xy_norm(f, spec).value; };
  SampledField F;
  F.x_origin = u.x_grid.front();
  F.dx = spec.grid.dx();
  F.dt = spec.grid.dt();

  int above_one = 0;
  for (int n = 0; n < spec.tol.max_iter; ++n) {
    F.values = u.values;
    apply_nonlinearity(F.values, spec.p, spec.form);
    SolutionField next = hom.field;
    if (!F.is_zero()) {
      forced.forcing = F;
      const LinearSolveReport part = solve_linear(forced);
      for (std::size_t k = 0; k < next.values.data.size(); ++k) next.values.data[k] += part.field.values.data[k];
    }
    SolutionField diff = next;
    for (std::size_t k = 0; k < diff.values.data.size(); ++k) diff.values.data[k] -= u.values.data[k];
    const double dn = norm_of(diff);
    tr.difference_norms.push_back(dn);
    tr.iterate_norms.push_back(norm_of(next));
    const std::size_t m = tr.difference_norms.size();
    if (m >= 2 && tr.difference_norms[m - 2] > opts.ratio_floor) {
      const double r = dn / tr.difference_norms[m - 2];
      tr.ratios.push_back(r);
      above_one = r > 1.0 ? above_one + 1 : 0;
    }
    u = std::move(next);
    tr.iterations = n + 1;
    if (!u.all_finite()) {
      tr.non_contraction = true;
      break;
    }
    if (dn < spec.tol.iter) {
      tr.converged = true;
      tr.fixed_point_residual = dn;
      break;
    }
    if (above_one >= 3) {
      tr.non_contraction = true;
      break;
    }
  }
  u.refresh_traces(spec.domain == DomainKind::Interval);
  out.field = std::move(u);
  return out;
}

double contraction_ratio(const PicardTrace& trace, double floor) {
  double best = 0.0;
  bool any = false;
  const auto& d = trace.difference_norms;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    if (d[i] <= floor) continue;
    best = std::max(best, d[i + 1] / d[i]);
    any = true;
  }
  if (!any) throw Error(ErrorCode::InsufficientData, "need two difference norms above the floor");
  return best;
}

DifferenceBound nonlinearity_difference_bound(std::complex<double> v, std::complex<double> w, int p) {
  if (p < 1) throw Error(ErrorCode::OutOfRange, "p must be at least 1");
  const double av = std::abs(v);
  const double aw = std::abs(w);
  const double pv = std::pow(av, p - 1);
  const double pw = std::pow(aw, p - 1);
  DifferenceBound b;
  b.lhs = std::abs(pv * v - pw * w);
  b.rhs = std::ldexp(1.0, p + 1) * p * (pv + pw) * std::abs(v - w);
  return b;
}

}  // namespace utm
