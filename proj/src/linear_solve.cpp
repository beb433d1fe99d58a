#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "linear_detail.hpp"
#include "utm/contours.hpp"
#include "utm/error.hpp"
#include "utm/linear.hpp"
#include "utm/transforms.hpp"

namespace utm {

namespace {

Matrix add(const Matrix& a, const Matrix& b, double sb = 1.0) {
  Matrix c = a;
  for (std::size_t k = 0; k < c.data.size(); ++k) c.data[k] += sb * b.data[k];
  return c;
}

SolutionField as_field(const Matrix& m, const std::vector<double>& xs, const std::vector<double>& ts,
                       bool interval) {
  SolutionField f = make_field(xs, ts);
  f.values = m;
  f.refresh_traces(interval);
  return f;
}

/// Knots k * step on [0, T'] refining `g`'s grid so that step <= T / (samples - 1).
std::vector<double> trace_times(const PiecewiseLinear& g, double T, int samples) {
  const double target = T / static_cast<double>(samples - 1);
  const auto factor = static_cast<std::size_t>(std::max(1.0, std::ceil(g.step() / target - 1e-9)));
  const double step = g.step() / static_cast<double>(factor);
  auto K = static_cast<std::size_t>(std::ceil(T / step - 1e-9));
  while (static_cast<double>(K) * step > g.end() + 1e-9 * step) --K;
  std::vector<double> t(K + 1);
  for (std::size_t k = 0; k <= K; ++k) t[k] = step * static_cast<double>(k);
  return t;
}

PiecewiseLinear minus_samples(const PiecewiseLinear& g, const std::vector<double>& tk, const Matrix& values) {
  std::vector<double> l(tk.size()), r(tk.size());
  for (std::size_t k = 0; k < tk.size(); ++k) {
    l[k] = g.left_limit(tk[k]) - values(k, 0);
    r[k] = g.right_limit(tk[k]) - values(k, 0);
  }
  return PiecewiseLinear(0.0, tk[1] - tk[0], std::move(l), std::move(r));
}

/// The four half-line problems of the decomposition, prepared once and
/// evaluated on any set of points.
class HalfLineModel {
 public:
  HalfLineModel(const PiecewiseLinear& u0, const PiecewiseLinear& g0, const std::optional<SampledField>& F,
                double T, double t_min, double x_extent, const Tolerances& tol)
      : g0_(g0), tol_(tol) {
    const std::vector<double> tk = trace_times(g0, T, tol.trace_samples);
    const double t_lo = std::min(t_min, tk[1]);
    ivp_.emplace(even_reflection(u0), t_lo, x_extent, tol);
    diags_.push_back(ivp_->diagnostics());
    const Matrix u_at_0 = ivp_->eval({0.0}, tk);
    G0_ = minus_samples(g0, tk, u_at_0);
    if (F) {
      forced_.emplace(*F, true, x_extent, T, tol);
      diags_.push_back(forced_->diagnostics());
      std::vector<double> tf;
      for (std::size_t k = 0; k < F->nt() && F->t(k) <= T + 1e-9 * F->dt; ++k) tf.push_back(F->t(k));
      if (tf.size() < 2) tf.push_back(F->t(1));
      const Matrix w_at_0 = forced_->eval({0.0}, tf);
      std::vector<double> v(tf.size());
      for (std::size_t k = 0; k < tf.size(); ++k) v[k] = w_at_0(k, 0);
      W0_ = PiecewiseLinear(0.0, F->dt, std::move(v));
    }
  }

  /// ivp, forced, boundary, correction (already negated).
  std::array<Matrix, 4> components(const std::vector<double>& xs, const std::vector<double>& ts) {
    const std::size_t nt = ts.size();
    const std::size_t nx = xs.size();
    std::array<Matrix, 4> c{ivp_->eval(xs, ts), Matrix(nt, nx), Matrix(nt, nx), Matrix(nt, nx)};
    QuadratureDiagnostics d;
    c[2] = pure_boundary_grid(G0_, BoundaryGeometry::HalfLine, 0.0, xs, ts, tol_, BoundaryQuadrature::Causal, &d);
    d.term = "boundary";
    diags_.push_back(d);
    if (forced_) {
      c[1] = forced_->eval(xs, ts);
      Matrix corr =
          pure_boundary_grid(*W0_, BoundaryGeometry::HalfLine, 0.0, xs, ts, tol_, BoundaryQuadrature::Causal, &d);
      d.term = "correction";
      diags_.push_back(d);
      for (double& v : corr.data) v = -v;
      c[3] = std::move(corr);
    }
    for (std::size_t i = 0; i < nx; ++i) {
      if (xs[i] != 0.0) continue;
      for (std::size_t j = 0; j < nt; ++j) {
        if (ts[j] <= 0.0) continue;
        c[2](j, i) = g0_(ts[j]) - c[0](j, i);
        c[3](j, i) = -c[1](j, i);
      }
    }
    return c;
  }

  const std::vector<QuadratureDiagnostics>& diagnostics() const { return diags_; }

 private:
  PiecewiseLinear g0_;
  Tolerances tol_;
  std::optional<IvpEvaluator> ivp_;
  std::optional<ForcedIvpEvaluator> forced_;
  PiecewiseLinear G0_;
  std::optional<PiecewiseLinear> W0_;
  std::vector<QuadratureDiagnostics> diags_;
};

double min_positive(const std::vector<double>& ts, double fallback) {
  double m = fallback;
  for (double t : ts)
    if (t > 0.0) m = std::min(m, t);
  return m;
}

void stamp_initial_row(Matrix& m, const PiecewiseLinear& u0, const std::vector<double>& xs,
                       const std::vector<double>& ts) {
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (ts[j] > 0.0) continue;
    for (std::size_t i = 0; i < xs.size(); ++i) m(j, i) = u0(xs[i]);
  }
}

}  // namespace

LinearSolveReport solve_halfline_decomposed(const ProblemSpec& input) {
  const ProblemSpec spec = validate_problem(input);
  if (spec.domain != DomainKind::HalfLine) throw Error(ErrorCode::DomainMismatch, "half-line solver on interval");
  const std::vector<double> xs = spec.grid.xs();
  const std::vector<double> ts = spec.grid.ts();
  HalfLineModel model(spec.u0, spec.g0, spec.forcing, spec.T, min_positive(ts, spec.T), spec.grid.x_max, spec.tol);
  std::array<Matrix, 4> c = model.components(xs, ts);
  Matrix total = add(add(add(c[0], c[1]), c[2]), c[3]);
  stamp_initial_row(total, spec.u0, xs, ts);
  for (std::size_t j = 0; j < ts.size(); ++j)
    if (ts[j] > 0.0 && xs[0] == 0.0) total(j, 0) = spec.g0(ts[j]);

  LinearSolveReport report;
  report.field = as_field(total, xs, ts, false);
  const char* names[4] = {"ivp", "forced", "boundary", "correction"};
  for (int k = 0; k < 4; ++k) report.components.emplace_back(names[k], as_field(c[k], xs, ts, false));
  report.quadrature_residuals = model.diagnostics();
  return report;
}

LinearSolveReport solve_interval(const ProblemSpec& input) {
  const ProblemSpec spec = validate_problem(input);
  if (spec.domain != DomainKind::Interval) throw Error(ErrorCode::DomainMismatch, "interval solver on half-line");
  const double ell = spec.length;
  if (std::abs(spec.grid.x_max - ell) > 1e-12 * ell)
    throw Error(ErrorCode::BadGrid, "interval grid must span [0, l]");
  const std::vector<double> xs = spec.grid.xs();
  const std::vector<double> ts = spec.grid.ts();
  const std::size_t nx = xs.size();
  const std::size_t nt = ts.size();

  const double a = spec.affine_lift ? spec.g0.right_limit(0.0) : 0.0;
  const double b = spec.affine_lift ? spec.h0.right_limit(0.0) : 0.0;
  auto lift = [&](double x) { return a + (b - a) * x / ell; };
  std::vector<double> ul(spec.u0.size()), ur(spec.u0.size());
  for (std::size_t k = 0; k < spec.u0.size(); ++k) {
    ul[k] = spec.u0.left(k) - lift(spec.u0.knot(k));
    ur[k] = spec.u0.right(k) - lift(spec.u0.knot(k));
  }
  const PiecewiseLinear u0_lifted(0.0, spec.u0.step(), std::move(ul), std::move(ur));
  const PiecewiseLinear g0_lifted =
      spec.g0.plus(PiecewiseLinear(spec.g0.origin(), spec.g0.step(), std::vector<double>(spec.g0.size(), -a)));
  const PiecewiseLinear h0_lifted =
      spec.h0.plus(PiecewiseLinear(spec.h0.origin(), spec.h0.step(), std::vector<double>(spec.h0.size(), -b)));

  const PiecewiseLinear u0_ext = extend_interval_datum(u0_lifted, ell, spec.s).extended;
  std::optional<SampledField> F_ext;
  if (spec.forcing) {
    const SampledField& F = *spec.forcing;
    SampledField ext;
    ext.dx = F.dx;
    ext.dt = F.dt;
    for (std::size_t j = 0; j < F.nt(); ++j) {
      const PiecewiseLinear row = extend_interval_datum(F.row(j), ell, spec.s).extended;
      if (j == 0) ext.values = Matrix(F.nt(), row.size());
      for (std::size_t i = 0; i < row.size(); ++i) ext.values(j, i) = row.right(i);
    }
    F_ext = std::move(ext);
  }

  HalfLineModel model(u0_ext, g0_lifted, F_ext, spec.T, min_positive(ts, spec.T), ell, spec.tol);
  std::array<Matrix, 4> c = model.components(xs, ts);
  Matrix half = add(add(add(c[0], c[1]), c[2]), c[3]);

  const std::vector<double> tk = trace_times(h0_lifted, spec.T, spec.tol.trace_samples);
  std::array<Matrix, 4> ct = model.components({ell}, tk);
  Matrix at_ell = add(add(add(ct[0], ct[1]), ct[2]), ct[3]);
  const PiecewiseLinear w0 = minus_samples(h0_lifted, tk, at_ell);

  QuadratureDiagnostics d;
  Matrix reduced = pure_boundary_grid(w0, BoundaryGeometry::Interval, ell, xs, ts, spec.tol,
                                      BoundaryQuadrature::Causal, &d);
  d.term = "reduced";
  Matrix lifted(nt, nx);
  for (std::size_t j = 0; j < nt; ++j)
    for (std::size_t i = 0; i < nx; ++i) lifted(j, i) = lift(xs[i]);
  for (std::size_t j = 0; j < nt; ++j) {
    if (ts[j] <= 0.0) continue;
    reduced(j, nx - 1) = h0_lifted(ts[j]) - half(j, nx - 1);
    reduced(j, 0) = 0.0;
  }

  Matrix total = add(add(half, reduced), lifted);
  stamp_initial_row(total, spec.u0, xs, ts);
  for (std::size_t j = 0; j < nt; ++j) {
    if (ts[j] <= 0.0) continue;
    total(j, 0) = spec.g0(ts[j]);
    total(j, nx - 1) = spec.h0(ts[j]);
  }

  LinearSolveReport report;
  report.field = as_field(total, xs, ts, true);
  report.components.emplace_back("half_line", as_field(half, xs, ts, true));
  report.components.emplace_back("reduced", as_field(reduced, xs, ts, true));
  report.components.emplace_back("lift", as_field(lifted, xs, ts, true));
  report.quadrature_residuals = model.diagnostics();
  report.quadrature_residuals.push_back(d);
  return report;
}

LinearSolveReport solve_linear(const ProblemSpec& spec) {
  return spec.domain == DomainKind::HalfLine ? solve_halfline_decomposed(spec) : solve_interval(spec);
}

SolutionField solve_halfline_direct(const ProblemSpec& spec) {
  return solve_halfline_direct(spec, spec.grid.xs(), spec.grid.ts());
}

SolutionField solve_halfline_direct(const ProblemSpec& input, const std::vector<double>& xs,
                                    const std::vector<double>& ts, std::vector<QuadratureDiagnostics>* diags) {
  const ProblemSpec spec = validate_problem(input);
  if (spec.domain != DomainKind::HalfLine) throw Error(ErrorCode::DomainMismatch, "direct formula is half-line only");
  if (!std::is_sorted(ts.begin(), ts.end())) throw Error(ErrorCode::BadGrid, "evaluation times must be sorted");
  const std::size_t nx = xs.size();
  const std::size_t nt = ts.size();
  const double t_max = nt ? ts.back() : 0.0;
  const double x_max = nx ? *std::max_element(xs.begin(), xs.end()) : 0.0;
  const Tolerances& tol = spec.tol;
  const PiecewiseLinear& u0 = spec.u0;
  const PiecewiseLinear& g0 = spec.g0;
  const double T = spec.T;
  std::vector<QuadratureDiagnostics> local;

  // Real-axis terms: whole-line evolution of the zero extension of u0 and f.
  IvpEvaluator ivp(u0, min_positive(ts, T), x_max, tol);
  local.push_back(ivp.diagnostics());
  Matrix total = ivp.eval(xs, ts);
  std::optional<ForcedIvpEvaluator> forced;
  std::vector<PiecewiseLinear> rows;
  double C_f = 0.0;
  double f_max = 0.0;
  if (spec.forcing) {
    forced.emplace(*spec.forcing, false, x_max, t_max, tol);
    local.push_back(forced->diagnostics());
    total = add(total, forced->eval(xs, ts));
    for (std::size_t k = 0; k < spec.forcing->nt(); ++k) {
      rows.push_back(spec.forcing->row(k));
      C_f = std::max(C_f, std::abs(rows.back().right(0)) + detail::total_variation(rows.back(), rows.back().end()));
      f_max = std::max(f_max, rows.back().max_abs());
    }
  }

  // Terms on the boundary of D+ (a-ray; the a^3 ray contributes the conjugate).
  const double C_u = std::abs(u0.right(0)) + detail::total_variation(u0, u0.end());
  const double C_g = 2.0 * detail::max_abs_until(g0, T) + detail::total_variation(g0, T);
  const double scale = std::max({u0.max_abs(), detail::max_abs_until(g0, T), t_max * f_max});
  const double delta = 1.0 / std::sqrt(2.0);
  PhaseModel model;
  model.time_span = t_max + T;
  model.space_extent = x_max + u0.end();
  model.space_phase = delta;
  model.space_decay = delta;
  model.log_eps = detail::log_eps(tol.quad);
  const double R_cap = radius_for_budget(tol.max_radius, tol.gauss_order, model, tol.panel_phase, tol.literal_nodes);
  QuadratureDiagnostics dd{"dplus", 0.0, 0.0, 0, false};
  std::vector<double> radius(nx, 0.0);
  const double amp = (C_u + 2.0 * C_g + t_max * C_f) / kPi;
  if (scale > 0.0) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (xs[i] <= 0.0) continue;
      const double x = xs[i];
      const TruncationChoice tc = choose_truncation(
          [&](double r) { return amp * std::exp(-delta * x * r) / (delta * x * r); }, tol.quad * scale, 1.0, R_cap);
      radius[i] = tc.R;
      dd.radius = std::max(dd.radius, tc.R);
      dd.residual = std::max(dd.residual, tc.residual);
      dd.warning = dd.warning || tc.capped;
    }
  }
  if (dd.radius > 0.0) {
    const RadialRule rule = radial_rule(dd.radius, tol.gauss_order, model, tol.panel_phase);
    const std::size_t N = rule.r.size();
    dd.nodes = N;
    const cplx I(0.0, 1.0);
    std::vector<cplx> coeff(N * nt, 0.0);
    parallel_for(
        N,
        [&](std::size_t n) {
          const double r = rule.r[n];
          const cplx uhat = u0.exp_integral(I * kA * r);
          const cplx gtil = g0.exp_integral(cplx(0.0, r * r), 0.0, T);
          const cplx base = (-kA * uhat + 2.0 * r * gtil) / kPi;
          for (std::size_t j = 0; j < nt; ++j)
            coeff[n * nt + j] = rule.w[n] * std::polar(1.0, -r * r * ts[j]) * base;
          if (!rows.empty()) {
            std::vector<cplx> fh(rows.size());
            for (std::size_t k = 0; k < rows.size(); ++k) fh[k] = rows[k].exp_integral(I * kA * r);
            detail::march(
                cplx(0.0, -r * r), spec.forcing->dt, rows.size(), [&](std::size_t k) { return fh[k]; },
                [&](std::size_t k) { return fh[k]; }, ts,
                [&](std::size_t j, cplx v) { coeff[n * nt + j] -= rule.w[n] * kA * v / kPi; });
          }
        },
        tol.threads);
    std::vector<std::size_t> limit(nx);
    for (std::size_t i = 0; i < nx; ++i)
      limit[i] = static_cast<std::size_t>(std::upper_bound(rule.r.begin(), rule.r.end(), radius[i]) - rule.r.begin());
    detail::synthesize(
        coeff, nt, xs, limit, [&](std::size_t n, double x) { return std::exp(I * kA * rule.r[n] * x); }, total,
        tol.threads);
  }
  local.push_back(dd);

  stamp_initial_row(total, u0, xs, ts);
  for (std::size_t i = 0; i < nx; ++i) {
    if (xs[i] != 0.0) continue;
    for (std::size_t j = 0; j < nt; ++j)
      if (ts[j] > 0.0) total(j, i) = g0(ts[j]);
  }
  if (diags) *diags = local;
  return as_field(total, xs, ts, false);
}

SampledSignal boundary_trace(const SolutionField& field, End end) {
  const std::vector<double>& trace = end == End::Left ? field.left_trace : field.right_trace;
  if (trace.empty()) throw Error(ErrorCode::DomainMismatch, "no trace stored at that end");
  const auto& t = field.t_grid;
  if (t.size() < 2) throw Error(ErrorCode::BadGrid, "trace needs two times");
  const double step = t[1] - t[0];
  for (std::size_t j = 1; j < t.size(); ++j)
    if (std::abs(t[j] - t[0] - step * static_cast<double>(j)) > 1e-9 * step)
      throw Error(ErrorCode::BadGrid, "trace times are not uniform");
  return SampledSignal(PiecewiseLinear(t[0], step, trace));
}

}  // namespace utm
