#include <algorithm>
#include <cmath>

#include "linear_detail.hpp"
#include "utm/contours.hpp"
#include "utm/error.hpp"
#include "utm/linear.hpp"
#include "utm/numerics.hpp"
#include "utm/transforms.hpp"

namespace utm {

namespace detail {

double total_variation(const PiecewiseLinear& f, double hi) {
  double v = 0.0;
  for (std::size_t i = 0; i + 1 < f.size() && f.knot(i) < hi; ++i) {
    if (i > 0) v += std::abs(f.right(i) - f.left(i));
    v += std::abs(f.left(i + 1) - f.right(i));
  }
  return v;
}

double max_abs_until(const PiecewiseLinear& f, double hi) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size() && f.knot(i) <= hi + f.step(); ++i)
    m = std::max({m, std::abs(f.left(i)), std::abs(f.right(i))});
  return m;
}

}  // namespace detail

bool LinearSolveReport::residual_warning() const {
  return std::any_of(quadrature_residuals.begin(), quadrature_residuals.end(),
                     [](const QuadratureDiagnostics& d) { return d.warning; });
}

namespace {

std::vector<std::size_t> cutoff_counts(const std::vector<double>& nodes, const std::vector<double>& radii) {
  std::vector<std::size_t> out(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i)
    out[i] = static_cast<std::size_t>(std::upper_bound(nodes.begin(), nodes.end(), radii[i]) - nodes.begin());
  return out;
}

void require_sorted(const std::vector<double>& ts) {
  if (!std::is_sorted(ts.begin(), ts.end())) throw Error(ErrorCode::BadGrid, "evaluation times must be sorted");
}

}  // namespace

IvpEvaluator::IvpEvaluator(const PiecewiseLinear& U0, double t_min, double x_extent, const Tolerances& tol)
    : U0_(U0), tol_(tol) {
  diag_.term = "ivp";
  scale_ = U0.max_abs();
  zero_ = scale_ == 0.0;
  if (zero_) return;
  v0_ = U0.jump_variation();
  v1_ = U0.slope_variation();
  t_min = std::max(t_min, 1e-12);
  const double R_cap = tol.max_radius;
  const double target = tol.quad * scale_;
  TruncationChoice choice = choose_truncation(
      [&](double X) { return (v0_ / X + v1_ / (X * X)) * std::exp(-X * X * t_min) / (2.0 * kPi * X * t_min); },
      target, 1.0, R_cap);
  PhaseModel model;
  model.space_extent = x_extent + std::max(std::abs(U0.origin()), std::abs(U0.end()));
  model.log_eps = detail::log_eps(tol.quad);
  const RadialRule rule = radial_rule(choice.R, tol.gauss_order, model, tol.panel_phase);
  xi_ = rule.r;
  w_ = rule.w;
  hat_.assign(xi_.size(), 0.0);
  parallel_for(
      xi_.size(), [&](std::size_t n) { hat_[n] = U0_.exp_integral(cplx(0.0, -xi_[n])); }, tol.threads);
  diag_ = {"ivp", choice.R, choice.residual, xi_.size(), choice.capped};
}

double IvpEvaluator::cutoff(double t) const {
  const double target = tol_.quad * scale_;
  const double R_top = xi_.empty() ? 1.0 : xi_.back();
  return choose_truncation(
             [&](double X) { return (v0_ / X + v1_ / (X * X)) * std::exp(-X * X * t) / (2.0 * kPi * X * t); },
             target, 1.0, std::max(1.0, R_top))
      .R;
}

Matrix IvpEvaluator::eval(const std::vector<double>& xs, const std::vector<double>& ts) const {
  const std::size_t nt = ts.size();
  Matrix out(nt, xs.size());
  if (!zero_ && !xi_.empty()) {
    const std::size_t N = xi_.size();
    std::vector<cplx> coeff(N * nt, 0.0);
    std::size_t n_max = 0;
    for (std::size_t j = 0; j < nt; ++j) {
      if (ts[j] <= 0.0) continue;
      const double R = cutoff(ts[j]);
      const auto count = static_cast<std::size_t>(std::upper_bound(xi_.begin(), xi_.end(), R) - xi_.begin());
      n_max = std::max(n_max, count);
      for (std::size_t n = 0; n < count; ++n) {
        const double damp = std::exp(-xi_[n] * xi_[n] * ts[j]);
        if (damp < 1e-300) break;
        coeff[n * nt + j] = (w_[n] / kPi) * damp * hat_[n];
      }
    }
    std::vector<std::size_t> limit(xs.size(), n_max);
    detail::synthesize(
        coeff, nt, xs, limit, [&](std::size_t n, double x) { return std::polar(1.0, xi_[n] * x); }, out,
        tol_.threads);
  }
  for (std::size_t j = 0; j < nt; ++j) {
    if (ts[j] > 0.0) continue;
    for (std::size_t i = 0; i < xs.size(); ++i) out(j, i) = U0_(xs[i]);
  }
  return out;
}

ForcedIvpEvaluator::ForcedIvpEvaluator(const SampledField& F, bool even, double x_extent, double t_max,
                                       const Tolerances& tol)
    : dt_(F.dt), tol_(tol) {
  diag_.term = "forced";
  rows_ = std::min(F.nt(), static_cast<std::size_t>(std::ceil(t_max / F.dt - 1e-9)) + 2);
  rows_ = std::max<std::size_t>(rows_, 2);
  std::vector<PiecewiseLinear> profiles;
  profiles.reserve(rows_);
  double fmax = 0.0;
  double v0 = 0.0;
  double v1 = 0.0;
  double support = 0.0;
  for (std::size_t k = 0; k < rows_; ++k) {
    PiecewiseLinear row = F.row(k);
    const PiecewiseLinear ext = even ? even_reflection(row) : row;
    fmax = std::max(fmax, row.max_abs());
    v0 = std::max(v0, ext.jump_variation());
    v1 = std::max(v1, ext.slope_variation());
    support = std::max(support, row.end());
    profiles.push_back(std::move(row));
  }
  zero_ = fmax == 0.0;
  if (zero_) return;
  const double scale = fmax * std::max(t_max, F.dt);
  const TruncationChoice choice = choose_truncation(
      [&](double X) { return (v0 / (2.0 * X * X) + v1 / (3.0 * X * X * X)) / kPi; }, tol.quad * scale, 1.0,
      tol.max_radius);
  PhaseModel model;
  model.space_extent = x_extent + support;
  model.log_eps = detail::log_eps(tol.quad);
  const RadialRule rule = radial_rule(choice.R, tol.gauss_order, model, tol.panel_phase);
  xi_ = rule.r;
  w_ = rule.w;
  hat_.assign(xi_.size() * rows_, 0.0);
  parallel_for(
      xi_.size(),
      [&](std::size_t n) {
        const cplx c(0.0, -xi_[n]);
        for (std::size_t k = 0; k < rows_; ++k) {
          const cplx v = profiles[k].exp_integral(c);
          hat_[n * rows_ + k] = even ? cplx(2.0 * v.real(), 0.0) : v;
        }
      },
      tol.threads);
  diag_ = {"forced", choice.R, choice.residual, xi_.size(), choice.capped};
}

Matrix ForcedIvpEvaluator::eval(const std::vector<double>& xs, const std::vector<double>& ts) const {
  const std::size_t nt = ts.size();
  Matrix out(nt, xs.size());
  if (zero_ || xi_.empty()) return out;
  require_sorted(ts);
  const std::size_t N = xi_.size();
  std::vector<cplx> coeff(N * nt, 0.0);
  parallel_for(
      N,
      [&](std::size_t n) {
        const cplx* y = hat_.data() + n * rows_;
        const double wn = w_[n] / kPi;
        detail::march(
            cplx(-xi_[n] * xi_[n], 0.0), dt_, rows_, [&](std::size_t k) { return y[k]; },
            [&](std::size_t k) { return y[k]; }, ts, [&](std::size_t j, cplx v) { coeff[n * nt + j] = wn * v; });
      },
      tol_.threads);
  std::vector<std::size_t> limit(xs.size(), N);
  detail::synthesize(
      coeff, nt, xs, limit, [&](std::size_t n, double x) { return std::polar(1.0, xi_[n] * x); }, out,
      tol_.threads);
  return out;
}

cplx interval_ratio_series(cplx z, double x, double ell) {
  const cplx a = z * x;
  const cplx b = z * ell;
  const cplx a2 = a * a;
  const cplx b2 = b * b;
  cplx num = 0.0;
  cplx den = 0.0;
  cplx pa = 1.0;
  cplx pb = 1.0;
  double fact = 1.0;  // (2k+1)!
  for (int k = 0; k < 6; ++k) {
    if (k > 0) fact *= static_cast<double>((2 * k) * (2 * k + 1));
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    num += sign * pa / fact;
    den += sign * pb / fact;
    pa *= a2;
    pb *= b2;
  }
  return (x / ell) * num / den;
}

cplx interval_ratio_direct(cplx z, double x, double ell) {
  const cplx i(0.0, 1.0);
  if (z.imag() >= 0.0) return std::exp(i * z * (ell - x)) * cexpm1(2.0 * i * z * x) / cexpm1(2.0 * i * z * ell);
  return std::exp(-i * z * (ell - x)) * cexpm1(-2.0 * i * z * x) / cexpm1(-2.0 * i * z * ell);
}

cplx interval_ratio(cplx z, double x, double ell, double k_switch) {
  if (std::abs(z) < k_switch / ell) return interval_ratio_series(z, x, ell);
  return interval_ratio_direct(z, x, ell);
}

Matrix pure_boundary_grid(const PiecewiseLinear& g, BoundaryGeometry geometry, double ell,
                          const std::vector<double>& xs, const std::vector<double>& ts, const Tolerances& tol,
                          BoundaryQuadrature mode, QuadratureDiagnostics* diag) {
  const std::size_t nt = ts.size();
  const std::size_t nx = xs.size();
  Matrix out(nt, nx);
  require_sorted(ts);
  if (std::abs(g.origin()) > 1e-12) throw Error(ErrorCode::BadGrid, "boundary datum must start at t = 0");
  const bool interval = geometry == BoundaryGeometry::Interval;
  if (interval && !(ell > 0.0)) throw Error(ErrorCode::BadGrid, "interval length must be positive");
  const double t_max = nt ? ts.back() : 0.0;
  const bool causal = mode == BoundaryQuadrature::Causal;
  QuadratureDiagnostics local{interval ? "pure-interval" : "pure-halfline", 0.0, 0.0, 0, false};

  // Identities on the boundary and at t = 0.
  std::vector<bool> identity(nx, false);
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = xs[i];
    if (x < 0.0 || (interval && x > ell * (1.0 + 1e-12)))
      throw Error(ErrorCode::OutOfRange, "evaluation point outside the domain");
    const bool at_data = interval ? std::abs(x - ell) <= 1e-12 * ell : x == 0.0;
    const bool at_zero = interval && x == 0.0;
    if (at_data || at_zero) {
      identity[i] = true;
      for (std::size_t j = 0; j < nt; ++j) out(j, i) = (at_data && ts[j] > 0.0) ? g(ts[j]) : 0.0;
    }
  }

  const double scale = causal ? detail::max_abs_until(g, t_max) : g.max_abs();
  if (scale == 0.0 || t_max <= 0.0) {
    if (diag) *diag = local;
    return out;
  }
  const double C = causal ? 2.0 * scale + detail::total_variation(g, t_max)
                          : detail::total_variation(g, g.end()) + std::abs(g.right(0)) + std::abs(g.left(g.size() - 1));
  const double phi = causal ? tol.contour_angle : 0.0;
  const double delta = std::cos(0.25 * kPi + phi);
  const double target = tol.quad * scale;

  PhaseModel model;
  model.time_span = causal ? t_max : t_max + g.end();
  model.angle = phi;
  model.space_extent = interval ? 2.0 * ell : (nx ? *std::max_element(xs.begin(), xs.end()) : 0.0);
  model.space_phase = std::sin(0.25 * kPi + phi);
  model.space_decay = delta;
  model.log_eps = detail::log_eps(tol.quad);
  double R_cap = tol.max_radius;
  if (!causal) R_cap = radius_for_budget(R_cap, tol.gauss_order, model, tol.panel_phase, tol.literal_nodes);

  std::vector<double> radius(nx, 0.0);
  double R = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    if (identity[i]) continue;
    const double d = interval ? ell - xs[i] : xs[i];
    const TruncationChoice tc = choose_truncation(
        [&](double r) { return (2.0 / kPi) * C * std::exp(-delta * d * r) / (delta * d * r); }, target, 1.0, R_cap);
    radius[i] = tc.R;
    R = std::max(R, tc.R);
    local.residual = std::max(local.residual, tc.residual);
    local.warning = local.warning || tc.capped;
  }
  if (R == 0.0) {
    if (diag) *diag = local;
    return out;
  }
  const RadialRule rule = radial_rule(R, tol.gauss_order, model, tol.panel_phase);
  const std::size_t N = rule.r.size();
  local.radius = R;
  local.nodes = N;
  const cplx rot = std::polar(1.0, phi);
  const cplx I(0.0, 1.0);

  std::vector<cplx> G(N * nt, 0.0);
  if (causal) {
    const std::size_t K = g.size();
    parallel_for(
        N,
        [&](std::size_t n) {
          const cplx kappa = rule.r[n] * rot;
          detail::march(
              I * kappa * kappa, g.step(), K, [&](std::size_t k) { return g.right(k); },
              [&](std::size_t k) { return g.left(k); }, ts, [&](std::size_t j, cplx v) { G[n * nt + j] = v; });
        },
        tol.threads);
  } else {
    parallel_for(
        N,
        [&](std::size_t n) {
          const double k2 = rule.r[n] * rule.r[n];
          const cplx hat = g.exp_integral(cplx(0.0, -k2));
          for (std::size_t j = 0; j < nt; ++j) G[n * nt + j] = std::polar(1.0, k2 * ts[j]) * hat;
        },
        tol.threads);
  }

  std::vector<std::size_t> limit = cutoff_counts(rule.r, radius);
  Matrix sum(nt, nx);
  const double ks = tol.k_switch;
  detail::synthesize(
      G, nt, xs, limit,
      [&](std::size_t n, double x) {
        const cplx kappa = rule.r[n] * rot;
        const cplx pre = (2.0 / kPi) * rule.w[n] * rot * kappa;
        if (interval) return pre * interval_ratio(kA3 * kappa, x, ell, ks);
        return pre * std::exp(-kA * kappa * x);
      },
      sum, tol.threads);
  for (std::size_t i = 0; i < nx; ++i) {
    if (identity[i]) continue;
    for (std::size_t j = 0; j < nt; ++j) out(j, i) = ts[j] > 0.0 ? sum(j, i) : 0.0;
  }
  if (diag) *diag = local;
  return out;
}

double solve_heat_ivp(const PiecewiseLinear& U0, double x, double t, const Tolerances& tol) {
  if (t < 0.0) throw Error(ErrorCode::OutOfRange, "t must be nonnegative");
  if (t == 0.0) return U0(x);
  return IvpEvaluator(U0, t, std::abs(x), tol).eval({x}, {t})(0, 0);
}

double solve_forced_ivp(const SampledField& F, double x, double t, const Tolerances& tol) {
  if (t < 0.0) throw Error(ErrorCode::OutOfRange, "t must be nonnegative");
  if (t == 0.0) return 0.0;
  return ForcedIvpEvaluator(F, true, std::abs(x), t, tol).eval({x}, {t})(0, 0);
}

double solve_pure_halfline(const PiecewiseLinear& g, double x, double t, const Tolerances& tol,
                           BoundaryQuadrature mode) {
  return pure_boundary_grid(g, BoundaryGeometry::HalfLine, 0.0, {x}, {t}, tol, mode)(0, 0);
}

double solve_pure_interval(const PiecewiseLinear& h, double ell, double x, double t, const Tolerances& tol,
                           BoundaryQuadrature mode) {
  return pure_boundary_grid(h, BoundaryGeometry::Interval, ell, {x}, {t}, tol, mode)(0, 0);
}

}  // namespace utm
