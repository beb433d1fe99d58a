#include "utm/transforms.hpp"

#include <cmath>
#include <limits>

#include "utm/error.hpp"
#include "utm/norms.hpp"

namespace utm {

const char* to_string(ExtensionMethod m) {
  switch (m) {
    case ExtensionMethod::EvenReflection: return "even-reflection";
    case ExtensionMethod::ZeroExtension: return "zero-extension";
    case ExtensionMethod::CutoffReflection: return "cutoff-reflection";
  }
  return "unknown";
}

namespace {

constexpr double kOverflowGuard = 700.0;

void check_growth(const PiecewiseLinear& f, cplx k) {
  const double growth = k.imag();
  if (growth <= 0.0) return;
  const double L = f.knot(f.support_last());
  if (growth * L > kOverflowGuard)
    throw Error(ErrorCode::DivergentKernel, "e^{-ikx} overflows over the profile support");
  // The truncated tail must stay negligible after amplification.
  const double scale = f.max_abs();
  const double tail = std::abs(f.left_limit(f.end())) * std::exp(growth * f.end());
  if (scale > 0.0 && tail > 1e-10 * scale)
    throw Error(ErrorCode::DivergentKernel, "kernel growth outpaces the profile decay");
}

}  // namespace

cplx half_line_fourier(const SampledProfile& u0, cplx k) {
  check_growth(u0, k);
  return u0.exp_integral(cplx(0.0, -1.0) * k, 0.0, u0.end());
}

cplx interval_fourier(const SampledProfile& u0, double ell, cplx k) {
  return u0.exp_integral(cplx(0.0, -1.0) * k, 0.0, ell);
}

cplx line_fourier(const PiecewiseLinear& f, cplx xi) { return f.exp_integral(cplx(0.0, -1.0) * xi); }

cplx time_transform(const SampledSignal& g, cplx ksq, double T_upper) {
  if (ksq.real() * T_upper > kOverflowGuard)
    throw Error(ErrorCode::OverflowGuard, "Re(k^2) T exceeds the exponent guard");
  return g.exp_integral(ksq, 0.0, T_upper);
}

TransformEstimate half_line_fourier_estimate(const SampledProfile& u0, cplx k) {
  const cplx fine = half_line_fourier(u0, k);
  const cplx coarse = half_line_fourier(SampledProfile(u0.decimated()), k);
  return {fine, std::abs(fine - coarse)};
}

PiecewiseLinear even_reflection(const PiecewiseLinear& f) {
  const std::size_t n = f.size();
  std::vector<double> l(2 * n - 1), r(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    l[n - 1 + i] = f.left(i);
    r[n - 1 + i] = f.right(i);
    l[n - 1 - i] = f.right(i);
    r[n - 1 - i] = f.left(i);
  }
  l[n - 1] = r[n - 1] = f.right(0);
  return PiecewiseLinear(f.origin() - f.end() + f.origin(), f.step(), std::move(l), std::move(r));
}

PiecewiseLinear truncated(const PiecewiseLinear& f, std::size_t knots) {
  if (knots < 2 || knots > f.size()) throw Error(ErrorCode::BadGrid, "bad restriction length");
  std::vector<double> l(f.left_values().begin(), f.left_values().begin() + static_cast<long>(knots));
  std::vector<double> r(f.right_values().begin(), f.right_values().begin() + static_cast<long>(knots));
  r.back() = l.back();
  return PiecewiseLinear(f.origin(), f.step(), std::move(l), std::move(r));
}

double smooth_cutoff(double t) {
  auto psi = [](double r) { return r > 0.0 ? std::exp(-1.0 / r) : 0.0; };
  const double a = std::abs(t);
  const double up = psi(2.0 - a);
  const double down = psi(a - 1.0);
  if (up + down == 0.0) return 0.0;
  return up / (up + down);
}

namespace {

double safe_ratio(double num, double den) {
  if (num == 0.0 && den == 0.0) return 1.0;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

std::size_t knot_index(const PiecewiseLinear& f, double t, const char* what) {
  const double u = (t - f.origin()) / f.step();
  const double r = std::round(u);
  if (std::abs(u - r) > 1e-6 || r < 1.0 || r > static_cast<double>(f.size() - 1))
    throw Error(ErrorCode::BadGrid, std::string(what) + " is not a sample knot");
  return static_cast<std::size_t>(r);
}

}  // namespace

ExtensionRecord extend_initial_datum(const SampledProfile& u0, const SobolevIndex& s, bool with_ratio) {
  ExtensionRecord rec;
  rec.original = u0;
  rec.extended = even_reflection(u0);
  rec.method = ExtensionMethod::EvenReflection;
  rec.norm_ratio = 1.0;
  if (with_ratio) {
    try {
      const double line = hs_norm_line(rec.extended, s.s).value;
      const double half = hs_norm_physical(u0, s.s, PhysicalDomain::HalfLine).value;
      rec.norm_ratio = safe_ratio(line, half);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TailTooFat) throw;
      rec.norm_ratio = std::numeric_limits<double>::infinity();
    }
  }
  return rec;
}

ExtensionRecord extend_boundary_datum(const SampledSignal& g0, const SobolevIndex& s, double T, bool with_ratio) {
  if (!(T > 0.0) || T >= 1.0) throw Error(ErrorCode::BadHorizon, "T must lie in (0, 1)");
  const std::size_t kT = knot_index(g0, T, "T");
  const double dt = g0.step();
  const auto n = static_cast<std::size_t>(std::ceil(2.0 / dt - 1e-9)) + 1;
  std::vector<double> l(n, 0.0), r(n, 0.0);
  ExtensionRecord rec;
  rec.original = truncated(g0, kT + 1);
  if (s.regime == Regime::Rough) {
    rec.method = ExtensionMethod::ZeroExtension;
    for (std::size_t k = 0; k <= kT; ++k) {
      l[k] = g0.left(k);
      r[k] = k == kT ? 0.0 : g0.right(k);
    }
  } else {
    rec.method = ExtensionMethod::CutoffReflection;
    const std::size_t period = 2 * kT;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t q = k % period;
      const std::size_t idx = q <= kT ? q : period - q;
      const double theta = smooth_cutoff(dt * static_cast<double>(k));
      const double v = idx == kT ? g0.left(kT) : g0.right(idx);
      l[k] = r[k] = theta * v;
    }
  }
  rec.extended = PiecewiseLinear(0.0, dt, std::move(l), std::move(r));
  rec.norm_ratio = 1.0;
  if (with_ratio) {
    const double ext = ht_norm(rec.extended, s.m, rec.extended.end()).value;
    const double orig = ht_norm(rec.original, s.m, T).value;
    rec.norm_ratio = safe_ratio(ext, orig);
  }
  return rec;
}

ExtensionRecord extend_interval_datum(const PiecewiseLinear& u0, double ell, const SobolevIndex& s,
                                      bool with_ratio) {
  const std::size_t kl = knot_index(u0, ell, "l");
  const double dx = u0.step();
  const std::size_t n = 2 * kl + 1;
  std::vector<double> l(n, 0.0), r(n, 0.0);
  for (std::size_t k = 0; k <= kl; ++k) {
    l[k] = u0.left(k);
    r[k] = u0.right(k);
  }
  ExtensionRecord rec;
  rec.original = truncated(u0, kl + 1);
  const double end_value = u0.left(kl);
  if (s.regime == Regime::Rough) {
    rec.method = ExtensionMethod::ZeroExtension;
    r[kl] = 0.0;
  } else {
    rec.method = ExtensionMethod::CutoffReflection;
    r[kl] = end_value;
    for (std::size_t k = kl + 1; k < n; ++k) {
      const std::size_t mirror = 2 * kl - k;
      const double theta = smooth_cutoff(dx * static_cast<double>(k) / ell);
      l[k] = theta * (2.0 * end_value - u0.right(mirror));
      r[k] = theta * (2.0 * end_value - u0.left(mirror));
    }
  }
  rec.extended = PiecewiseLinear(0.0, dx, std::move(l), std::move(r));
  rec.norm_ratio = 1.0;
  if (with_ratio) {
    try {
      const double ext = hs_norm_physical(rec.extended, s.s, PhysicalDomain::HalfLine).value;
      const double orig = hs_norm_physical(rec.original, s.s, PhysicalDomain::Interval).value;
      rec.norm_ratio = safe_ratio(ext, orig);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TailTooFat) throw;
      rec.norm_ratio = std::numeric_limits<double>::infinity();
    }
  }
  return rec;
}

}  // namespace utm
