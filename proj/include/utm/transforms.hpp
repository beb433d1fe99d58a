#pragma once

#include "utm/core.hpp"
#include "utm/piecewise.hpp"

namespace utm {

struct SpectralSample {
  cplx k;
  cplx value;
};

enum class ExtensionMethod { EvenReflection, ZeroExtension, CutoffReflection };

const char* to_string(ExtensionMethod m);

struct ExtensionRecord {
  PiecewiseLinear original;
  PiecewiseLinear extended;
  ExtensionMethod method = ExtensionMethod::EvenReflection;
  double norm_ratio = 1.0;
};

/// int_0^L e^{-ikx} u0(x) dx.
cplx half_line_fourier(const SampledProfile& u0, cplx k);
/// int_0^l e^{-ikx} u0(x) dx.
cplx interval_fourier(const SampledProfile& u0, double ell, cplx k);
/// int_R e^{-i xi x} f(x) dx for a profile with compact support.
cplx line_fourier(const PiecewiseLinear& f, cplx xi);
/// int_0^T e^{ksq t} g(t) dt.
cplx time_transform(const SampledSignal& g, cplx ksq, double T_upper);

/// Transform value with the change seen when the sample grid is coarsened by 2.
struct TransformEstimate {
  cplx value;
  double error;
};
TransformEstimate half_line_fourier_estimate(const SampledProfile& u0, cplx k);

PiecewiseLinear even_reflection(const PiecewiseLinear& f);

/// Even reflection U0(x) = u0(|x|), with the H^s(R) / H^s(0, inf) norm ratio.
ExtensionRecord extend_initial_datum(const SampledProfile& u0, const SobolevIndex& s, bool with_ratio = true);

/// Boundary datum on [0, T] extended to a function supported in [0, 2].
ExtensionRecord extend_boundary_datum(const SampledSignal& g0, const SobolevIndex& s, double T,
                                      bool with_ratio = true);

/// Interval datum on [0, l] extended to the half-line, supported in [0, 2l]:
/// odd reflection about (l, u0(l)) under a cutoff when smooth, zero otherwise.
ExtensionRecord extend_interval_datum(const PiecewiseLinear& u0, double ell, const SobolevIndex& s,
                                      bool with_ratio = false);

/// Restriction of f to its first `knots` knots.
PiecewiseLinear truncated(const PiecewiseLinear& f, std::size_t knots);

/// C-infinity bump: 1 on |t| <= 1, 0 on |t| >= 2.
double smooth_cutoff(double t);

}  // namespace utm
