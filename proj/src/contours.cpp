#include "utm/contours.hpp"

#include <algorithm>
#include <cmath>

#include "utm/error.hpp"
#include "utm/numerics.hpp"

namespace utm {

Ray Ray::at(double angle) { return {angle, std::polar(1.0, angle)}; }

double PhaseModel::rate(double r) const {
  double total = 0.0;
  if (time_span > 0.0) {
    const double c2 = std::cos(2.0 * angle);
    const double s2 = std::sin(2.0 * angle);
    double t_eff = time_span;
    if (s2 > 0.0 && r > 0.0) t_eff = std::min(t_eff, log_eps / (r * r * s2));
    total += 2.0 * r * std::abs(c2) * t_eff;
  }
  if (space_extent > 0.0) {
    double x_eff = space_extent;
    if (space_decay > 0.0 && r > 0.0) x_eff = std::min(x_eff, log_eps / (r * space_decay));
    total += space_phase * x_eff;
  }
  return total;
}

namespace {

void add_panel(RadialRule& rule, const GaussRule& g, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    rule.r.push_back(mid + half * g.x[i]);
    rule.w.push_back(half * g.w[i]);
  }
}

double panel_width(const PhaseModel& model, double a, double phase) {
  const double cap = std::max(1.0, 0.5 * a);
  double w = std::min(cap, phase / std::max(model.rate(a), 1e-300));
  w = std::min(w, phase / std::max(model.rate(a + w), 1e-300));
  return std::max(w, 1e-12 * std::max(a, 1.0));
}

}  // namespace

RadialRule radial_rule(double R, int n, const PhaseModel& model, double phase_per_panel) {
  if (!(R > 0.0) || !std::isfinite(R)) throw Error(ErrorCode::BadTruncation, "radius must be positive");
  if (n < 4) throw Error(ErrorCode::BadTruncation, "need at least 4 nodes per panel");
  const GaussRule& g = gauss_legendre(n);
  RadialRule rule;
  rule.R = R;
  const double r0 = std::min(1.0, R);
  constexpr int kLevels = 12;
  std::vector<double> edges{0.0};
  for (int k = kLevels; k >= 0; --k) edges.push_back(r0 * std::ldexp(1.0, -k));
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i];
    const double b = edges[i + 1];
    const double rate = model.rate(b);
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) * rate / phase_per_panel)));
    for (int p = 0; p < pieces; ++p)
      add_panel(rule, g, a + (b - a) * p / pieces, a + (b - a) * (p + 1) / pieces);
  }
  double a = r0;
  std::size_t panels = 0;
  while (a < R * (1.0 - 1e-14)) {
    const double w = panel_width(model, a, phase_per_panel);
    double b = a + w;
    if (b > R || R - b < 0.25 * w) b = R;
    add_panel(rule, g, a, b);
    a = b;
    if (++panels > 2000000) throw Error(ErrorCode::BadTruncation, "too many quadrature panels");
  }
  return rule;
}

std::size_t panel_count(double R, const PhaseModel& model, double phase_per_panel, std::size_t limit) {
  std::size_t panels = 13;
  double a = std::min(1.0, R);
  while (a < R * (1.0 - 1e-14) && panels <= limit) {
    const double w = panel_width(model, a, phase_per_panel);
    double b = a + w;
    if (b > R || R - b < 0.25 * w) b = R;
    a = b;
    ++panels;
  }
  return panels;
}

double radius_for_budget(double R_max, int n, const PhaseModel& model, double phase_per_panel, double max_nodes) {
  const auto limit = static_cast<std::size_t>(max_nodes / n);
  if (panel_count(R_max, model, phase_per_panel, limit) <= limit) return R_max;
  double lo = 1.0;
  double hi = R_max;
  for (int it = 0; it < 60 && hi - lo > 1e-6 * hi; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (panel_count(mid, model, phase_per_panel, limit) <= limit) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

ContourNodeSet dplus_boundary_nodes(double R, int n, const PhaseModel& model) {
  const RadialRule rule = radial_rule(R, n, model);
  ContourNodeSet set;
  set.R = R;
  set.rays = {Ray::at(0.75 * kPi), Ray::at(0.25 * kPi)};
  const std::size_t m = rule.r.size();
  for (std::size_t i = m; i-- > 0;) {
    const cplx k = kA3 * rule.r[i];
    set.nodes.push_back(k);
    set.weights.push_back(-kA3 * rule.w[i]);
    set.k_squared.push_back(cplx(0.0, -rule.r[i] * rule.r[i]));
    set.ray_index.push_back(0);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const cplx k = kA * rule.r[i];
    set.nodes.push_back(k);
    set.weights.push_back(kA * rule.w[i]);
    set.k_squared.push_back(cplx(0.0, rule.r[i] * rule.r[i]));
    set.ray_index.push_back(1);
  }
  return set;
}

ContourNodeSet substituted_halfline_nodes(double R, int n, const PhaseModel& model) {
  const RadialRule rule = radial_rule(R, n, model);
  ContourNodeSet set;
  set.R = R;
  set.rays = {Ray::at(0.0)};
  for (std::size_t i = 0; i < rule.r.size(); ++i) {
    set.nodes.emplace_back(rule.r[i], 0.0);
    set.weights.emplace_back(rule.w[i], 0.0);
    set.k_squared.emplace_back(rule.r[i] * rule.r[i], 0.0);
    set.ray_index.push_back(0);
  }
  return set;
}

SpectralDecay SpectralDecay::of(const PiecewiseLinear& f) {
  return {0.0, f.jump_variation(), f.slope_variation()};
}

TruncationChoice choose_truncation(const std::function<double(double)>& bound, double tol, double R_min,
                                   double R_max) {
  if (!(tol > 0.0)) throw Error(ErrorCode::BadTruncation, "tolerance must be positive");
  if (!(R_min > 0.0) || !(R_max >= R_min)) throw Error(ErrorCode::BadTruncation, "bad radius bracket");
  TruncationChoice out;
  if (bound(R_min) < tol) {
    out.R = R_min;
    out.residual = bound(R_min);
    return out;
  }
  double lo = R_min;
  double hi = R_min;
  while (true) {
    hi = std::min(2.0 * lo, R_max);
    if (bound(hi) < tol) break;
    if (hi >= R_max) {
      out.R = R_max;
      out.residual = bound(R_max);
      out.capped = true;
      return out;
    }
    lo = hi;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (bound(mid) < tol) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.R = hi;
  out.residual = bound(hi);
  return out;
}

TruncationChoice choose_truncation(double x_min, const SpectralDecay& B, double tol, double decay_rate,
                                   double R_min, double R_max) {
  if (x_min < 0.0) throw Error(ErrorCode::BadTruncation, "x_min must be nonnegative");
  auto bound = [&](double R) { return std::exp(-x_min * R * decay_rate) * B(R); };
  TruncationChoice out = choose_truncation(bound, tol, R_min, R_max);
  if (x_min == 0.0 && B.c0 > 0.0) out.no_decay = true;
  return out;
}

}  // namespace utm
