#include "utm/norms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "utm/error.hpp"
#include "utm/numerics.hpp"

namespace utm {

namespace {

std::mutex& fftw_mutex() {
  static std::mutex mu;
  return mu;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// Real-to-complex FFT of x zero-padded to length Q; returns Q/2 + 1 bins.
std::vector<cplx> rfft(const std::vector<double>& x, std::size_t Q) {
  std::vector<double> in(Q, 0.0);
  std::copy(x.begin(), x.end(), in.begin());
  std::vector<cplx> out(Q / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(Q), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

/// Inverse of rfft (unnormalized).
std::vector<double> irfft(std::vector<cplx> spec, std::size_t Q) {
  std::vector<double> out(Q);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(Q), reinterpret_cast<fftw_complex*>(spec.data()), out.data(),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

double l2_exact(const PiecewiseLinear& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double a = f.right(i);
    const double b = f.left(i + 1);
    acc += a * a + a * b + b * b;
  }
  return std::sqrt(f.step() * acc / 3.0);
}

double l2_samples(const std::vector<double>& v, double h) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) acc += v[i] * v[i] + v[i] * v[i + 1] + v[i + 1] * v[i + 1];
  return std::sqrt(h * acc / 3.0);
}

// (e^w - 1 - w) / w^2 for w = -i theta.
cplx psi_core(double theta) {
  const cplx w(0.0, -theta);
  if (std::abs(theta) < 1e-2) {
    cplx sum = 0.0;
    cplx wk = 1.0;
    double fact = 2.0;
    for (int k = 0; k < 10; ++k) {
      sum += wk / fact;
      wk *= w;
      fact *= static_cast<double>(k + 3);
    }
    return sum;
  }
  return (cexpm1(w) - w) / (w * w);
}

double hat_core(double theta) {
  if (theta == 0.0) return 1.0;
  const double s = std::sin(0.5 * theta) / (0.5 * theta);
  return s * s;
}

struct LineSpectrum {
  double value_sq = 0.0;
};

double hs_line_sq(const PiecewiseLinear& f, double s, bool& has_jumps) {
  const std::size_t n = f.size();
  const double h = f.step();
  std::vector<double> c(n), J(n);
  const double scale = f.max_abs();
  const double jump_floor = 1e-10 * scale;
  has_jumps = false;
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = (i == 0) ? 0.0 : f.left(i);
    const double r = (i == n - 1) ? 0.0 : f.right(i);
    J[i] = r - c[i];
    if (std::abs(J[i]) > jump_floor) has_jumps = true;
  }
  if (scale == 0.0) return 0.0;
  if (!has_jumps) std::fill(J.begin(), J.end(), 0.0);
  if (has_jumps && s >= 0.5)
    throw Error(ErrorCode::TailTooFat, "profile with jumps is not in H^s for s >= 1/2");

  const std::size_t Q = next_pow2(n + static_cast<std::size_t>(40.0 / h) + 64);
  const std::vector<cplx> C = rfft(c, Q);
  const std::vector<cplx> Jh = has_jumps ? rfft(J, Q) : std::vector<cplx>();
  constexpr int M = 32;
  const double U = 2.0 * kPi * (M + 0.5);
  const double h2s = std::pow(h, -2.0 * s);
  // int_V^inf (u/h)^{2s} u^{k-4} (1 + s h^2/u^2) du
  auto tail_int = [&](double V, int k) {
    const double e1 = 2.0 * s + k - 3.0;
    const double e2 = 2.0 * s + k - 5.0;
    return h2s * (std::pow(V, e1) / (-e1) + s * h * h * std::pow(V, e2) / (-e2));
  };
  double total = 0.0;
  for (std::size_t q = 0; q <= Q / 2; ++q) {
    double theta = 2.0 * kPi * static_cast<double>(q) / static_cast<double>(Q);
    if (theta > kPi) theta -= 2.0 * kPi;
    const double beta = 2.0 * (1.0 - std::cos(theta));
    const cplx alpha = cexpm1(cplx(0.0, -theta));
    double A = 0.0;
    double B = 0.0;
    cplx X = 0.0;
    {
      const double w0 = std::pow(1.0 + theta * theta / (h * h), s);
      const double H0 = h * hat_core(theta);
      const cplx P0 = h * psi_core(theta);
      A += w0 * H0 * H0;
      if (has_jumps) {
        B += w0 * std::norm(P0);
        X += w0 * H0 * std::conj(P0);
      }
    }
    for (int m = -M; m <= M; ++m) {
      if (m == 0) continue;
      const double tm = theta + 2.0 * kPi * m;
      const double wm = std::pow(1.0 + tm * tm / (h * h), s);
      const double t2 = tm * tm;
      const double Hm = h * beta / t2;
      A += wm * Hm * Hm;
      if (has_jumps) {
        const cplx Pm = -h * (alpha + cplx(0.0, tm)) / t2;
        B += wm * std::norm(Pm);
        X += wm * Hm * std::conj(Pm);
      }
    }
    // Tails |m| > M from the asymptotic weight.
    const double inv2pi = 1.0 / (2.0 * kPi);
    const double S0 = inv2pi * (tail_int(U + theta, 0) + tail_int(U - theta, 0));
    A += h * h * beta * beta * S0;
    if (has_jumps) {
      const double S2 = inv2pi * (tail_int(U + theta, 2) + tail_int(U - theta, 2));
      const double g_edge = h2s * std::pow(U, 2.0 * s - 3.0);
      const double S1 = -theta / kPi * g_edge;
      B += h * h * (beta * S0 + S2 - 2.0 * std::sin(theta) * S1);
      X += -h * h * beta * (std::conj(alpha) * S0 - cplx(0.0, 1.0) * S1);
    }
    double integrand = std::norm(C[q]) * A;
    if (has_jumps) integrand += std::norm(Jh[q]) * B + 2.0 * std::real(C[q] * std::conj(Jh[q]) * X);
    const double weight = (q == 0 || q == Q / 2) ? 1.0 : 2.0;
    total += weight * integrand;
  }
  return total / (h * static_cast<double>(Q));
}

std::vector<double> knot_values(const PiecewiseLinear& f) {
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = 0.5 * (f.left(i) + f.right(i));
  v.front() = f.right(0);
  v.back() = f.left(f.size() - 1);
  return v;
}

std::vector<double> derivative(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  if (n < 5) throw Error(ErrorCode::InsufficientResolution, "derivative stencils need at least 5 samples");
  std::vector<double> d(n);
  const double inv = 1.0 / (12.0 * h);
  for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) * inv;
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * inv;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * inv;
  const std::size_t a = n - 1;
  d[a] = (25.0 * f[a] - 48.0 * f[a - 1] + 36.0 * f[a - 2] - 16.0 * f[a - 3] + 3.0 * f[a - 4]) * inv;
  d[a - 1] = (3.0 * f[a] + 10.0 * f[a - 1] - 18.0 * f[a - 2] + 6.0 * f[a - 3] - f[a - 4]) * inv;
  return d;
}

/// D[m] = int |f(x + m h) - f(x)|^2 dx over the pairs inside the grid (trapezoid in x).
std::vector<double> lag_sums(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> D(n, 0.0);
  constexpr std::size_t kDirect = 64;
  auto direct = [&](std::size_t m) {
    double acc = 0.0;
    for (std::size_t i = 0; i + m < n; ++i) {
      const double d = f[i + m] - f[i];
      acc += d * d;
    }
    const double a = f[m] - f[0];
    const double b = f[n - 1] - f[n - 1 - m];
    return h * (acc - 0.5 * a * a - 0.5 * b * b);
  };
  if (n <= 2048) {
    for (std::size_t m = 1; m < n; ++m) D[m] = direct(m);
    return D;
  }
  for (std::size_t m = 1; m <= kDirect && m < n; ++m) D[m] = direct(m);
  const std::size_t Q = next_pow2(2 * n);
  std::vector<cplx> F = rfft(f, Q);
  for (auto& v : F) v = std::norm(v);
  const std::vector<double> ac = irfft(F, Q);
  std::vector<double> sq(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) sq[i + 1] = sq[i] + f[i] * f[i];
  for (std::size_t m = kDirect + 1; m < n; ++m) {
    const double corr = ac[m] / static_cast<double>(Q);
    // sum_{i < n-m} f_{i+m}^2 + f_i^2
    const double squares = (sq[n] - sq[m]) + sq[n - m];
    const double acc = squares - 2.0 * corr;
    const double a = f[m] - f[0];
    const double b = f[n - 1] - f[n - 1 - m];
    D[m] = h * (acc - 0.5 * a * a - 0.5 * b * b);
  }
  return D;
}

double cell_weight(std::size_t m, double h, double beta) {
  const double lo = (static_cast<double>(m) - 0.5) * h;
  const double hi = (static_cast<double>(m) + 0.5) * h;
  return (std::pow(lo, -2.0 * beta) - std::pow(hi, -2.0 * beta)) / (2.0 * beta);
}

struct Seminorm {
  double value_sq = 0.0;
  double diag_sq = 0.0;
};

/// One-sided seminorm^2 int int_{z>0} |f(x+z)-f(x)|^2 / z^{1+2 beta}; the
/// half-line variant adds the pairs reaching past the last sample (f = 0 there).
Seminorm one_sided(const std::vector<double>& f, double h, double beta, bool half_line) {
  Seminorm out;
  const std::size_t n = f.size();
  const std::vector<double> D = lag_sums(f, h);
  for (std::size_t m = 1; m < n; ++m) out.value_sq += std::max(D[m], 0.0) * cell_weight(m, h, beta);
  if (half_line) {
    const double L = h * static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
      const double reach = L - h * static_cast<double>(i) + 0.5 * h;
      out.value_sq += w * f[i] * f[i] * std::pow(reach, -2.0 * beta) / (2.0 * beta);
    }
  }
  // Diagonal cell z < h/2, bounded with the local slope.
  if (n >= 2) {
    double slope_sq = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double d = (f[i + 1] - f[i]) / h;
      slope_sq += h * d * d;
    }
    out.diag_sq = slope_sq * std::pow(0.5 * h, 2.0 - 2.0 * beta) / (2.0 - 2.0 * beta);
  }
  return out;
}

NormReport physical_norm(const PiecewiseLinear& f, double s, PhysicalDomain domain) {
  if (s < 0.0) throw Error(ErrorCode::OutOfRange, "s must be nonnegative");
  NormReport rep;
  rep.grid_step = f.step();
  rep.samples = f.size();
  const auto order = static_cast<int>(std::floor(s));
  const double beta = s - order;
  double value = l2_exact(f);
  rep.parts["L2"] = value;
  std::vector<double> v = knot_values(f);
  for (int j = 1; j <= order; ++j) {
    v = derivative(v, f.step());
    const double part = l2_samples(v, f.step());
    rep.parts["d" + std::to_string(j)] = part;
    value += part;
  }
  if (beta > 0.0) {
    const Seminorm sn = one_sided(v, f.step(), beta, domain == PhysicalDomain::HalfLine);
    const double part = std::sqrt(2.0 * sn.value_sq);
    rep.parts["seminorm"] = part;
    rep.error_bar = std::sqrt(2.0 * (sn.value_sq + sn.diag_sq)) - part;
    value += part;
  } else {
    rep.parts["seminorm"] = 0.0;
  }
  rep.value = value;
  return rep;
}

PiecewiseLinear restrict_to(const PiecewiseLinear& g, double T) {
  const double u = (T - g.origin()) / g.step();
  auto K = static_cast<std::size_t>(std::floor(u + 1e-9));
  K = std::min(K, g.size() - 1);
  if (K < 1) throw Error(ErrorCode::InsufficientResolution, "signal has no panel inside (0, T)");
  std::vector<double> l(g.left_values().begin(), g.left_values().begin() + static_cast<long>(K + 1));
  std::vector<double> r(g.right_values().begin(), g.right_values().begin() + static_cast<long>(K + 1));
  return PiecewiseLinear(g.origin(), g.step(), std::move(l), std::move(r));
}

NormReport time_norm(const PiecewiseLinear& g, double m) {
  NormReport rep;
  rep.grid_step = g.step();
  rep.samples = g.size();
  const double l2 = l2_exact(g);
  rep.parts["L2"] = l2;
  double semi = 0.0;
  if (m > 0.0) {
    const Seminorm sn = one_sided(knot_values(g), g.step(), m, false);
    semi = std::sqrt(2.0 * sn.value_sq);
    rep.error_bar = std::sqrt(2.0 * (sn.value_sq + sn.diag_sq)) - semi;
  }
  rep.parts["seminorm"] = semi;
  rep.value = l2 + semi;
  return rep;
}

}  // namespace

NormReport hs_norm_line(const PiecewiseLinear& f, double s) {
  if (s < 0.0) throw Error(ErrorCode::OutOfRange, "s must be nonnegative");
  bool jumps = false;
  NormReport rep;
  rep.grid_step = f.step();
  rep.samples = f.size();
  rep.value = std::sqrt(std::max(hs_line_sq(f, s, jumps), 0.0));
  rep.parts["L2"] = l2_exact(f);
  rep.parts["Hs"] = rep.value;
  if (f.size() >= 5) {
    bool coarse_jumps = false;
    const double coarse = std::sqrt(std::max(hs_line_sq(f.decimated(), s, coarse_jumps), 0.0));
    rep.refinement_delta = std::abs(rep.value - coarse);
  }
  return rep;
}

NormReport hs_norm_physical(const PiecewiseLinear& f, double s, PhysicalDomain domain) {
  NormReport rep = physical_norm(f, s, domain);
  if (f.size() >= 9) {
    try {
      rep.refinement_delta = std::abs(rep.value - physical_norm(f.decimated(), s, domain).value);
    } catch (const Error&) {
      rep.refinement_delta = 0.0;
    }
  }
  return rep;
}

NormReport ht_norm(const PiecewiseLinear& g, double m, double T) {
  if (m < 0.0 || m >= 1.0) throw Error(ErrorCode::OutOfRange, "m must lie in [0, 1)");
  const PiecewiseLinear r = restrict_to(g, T);
  NormReport rep = time_norm(r, m);
  if (r.size() >= 5) rep.refinement_delta = std::abs(rep.value - time_norm(r.decimated(), m).value);
  return rep;
}

double calpha_lp_norm(const SolutionField& field, double alpha, int p) {
  if (alpha < 0.0 || p < 1) throw Error(ErrorCode::OutOfRange, "need alpha >= 0 and p >= 1");
  const GaussRule& g = gauss_legendre(4);
  const auto& xs = field.x_grid;
  double best = 0.0;
  for (std::size_t j = 0; j < field.t_grid.size(); ++j) {
    const double t = field.t_grid[j];
    if (alpha > 0.0 && t <= 0.0) continue;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      const double a = field.values(j, i);
      const double b = field.values(j, i + 1);
      const double half = 0.5 * (xs[i + 1] - xs[i]);
      for (std::size_t q = 0; q < g.x.size(); ++q) {
        const double u = 0.5 * (1.0 + g.x[q]);
        acc += half * g.w[q] * std::pow(std::abs(a + (b - a) * u), p);
      }
    }
    best = std::max(best, std::pow(t, alpha) * std::pow(acc, 1.0 / p));
  }
  return best;
}

double b_midpoint(double s) { return 0.5 * ((2.0 * s + 1.0) / 4.0 + 0.5); }

double alpha_exponent(double s, int p) { return (0.5 - b_midpoint(s)) / static_cast<double>(p); }

double data_norm(const ProblemSpec& spec) {
  const PhysicalDomain dom = spec.domain == DomainKind::HalfLine ? PhysicalDomain::HalfLine : PhysicalDomain::Interval;
  double d = hs_norm_physical(spec.u0, spec.s.s, dom).value;
  d += ht_norm(spec.g0, spec.s.m, spec.T).value;
  if (spec.domain == DomainKind::Interval) d += ht_norm(spec.h0, spec.s.m, spec.T).value;
  return d;
}

NormReport xy_norm(const SolutionField& field, const ProblemSpec& spec) {
  const PhysicalDomain dom = spec.domain == DomainKind::HalfLine ? PhysicalDomain::HalfLine : PhysicalDomain::Interval;
  const auto& xs = field.x_grid;
  const auto& ts = field.t_grid;
  if (xs.size() < 2 || ts.size() < 2) throw Error(ErrorCode::BadGrid, "field needs a 2x2 grid");
  const double dx = xs[1] - xs[0];
  const double dt = ts[1] - ts[0];
  double space = 0.0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    auto row = field.values.row(j);
    const PiecewiseLinear f(xs[0], dx, std::vector<double>(row.begin(), row.end()));
    space = std::max(space, physical_norm(f, spec.s.s, dom).value);
  }
  double time = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<double> col(ts.size());
    for (std::size_t j = 0; j < ts.size(); ++j) col[j] = field.values(j, i);
    time = std::max(time, time_norm(PiecewiseLinear(ts[0], dt, std::move(col)), spec.s.m).value);
  }
  NormReport rep;
  rep.parts["space"] = space;
  rep.parts["time"] = time;
  rep.value = space + time;
  if (spec.s.regime == Regime::Rough) {
    const double c = calpha_lp_norm(field, alpha_exponent(spec.s.s, spec.p), spec.p);
    rep.parts["calpha"] = c;
    rep.value += c;
  }
  rep.grid_step = dx;
  rep.samples = xs.size() * ts.size();
  return rep;
}

}  // namespace utm
