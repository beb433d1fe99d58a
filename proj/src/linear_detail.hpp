#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "utm/numerics.hpp"
#include "utm/piecewise.hpp"

namespace utm::detail {

/// Total variation of f on [origin, hi], interior jumps included.
double total_variation(const PiecewiseLinear& f, double hi);
/// max |f| on [origin, hi].
double max_abs_until(const PiecewiseLinear& f, double hi);

/// log(1/eps) used to decide where an oscillating factor is already negligible.
inline double log_eps(double quad_tol) { return std::log(1.0 / quad_tol) + 5.0; }

/// S(t) = int_0^t e^{lambda (t - s)} y(s) ds at the sorted times ts, for y
/// piecewise linear on knots k * dt (k < K), zero beyond the last knot.
/// yr(k), yl(k) give the right/left values at knot k; out(j, value) receives S(ts[j]).
template <class Right, class Left, class Out>
void march(cplx lambda, double dt, std::size_t K, Right yr, Left yl, const std::vector<double>& ts, Out out) {
  const ConvolutionStep full = ConvolutionStep::make(lambda, dt);
  const double eps = 1e-9 * dt;
  // Evaluation grids usually refine the knot grid, so the partial steps repeat.
  constexpr std::size_t kCache = 64;
  std::vector<std::pair<double, ConvolutionStep>> cache;
  auto partial_step = [&](double rem) {
    for (const auto& [r, step] : cache)
      if (std::abs(r - rem) <= eps) return step;
    const ConvolutionStep step = ConvolutionStep::make(lambda, rem);
    if (cache.size() < kCache) cache.emplace_back(rem, step);
    return step;
  };
  cplx s = 0.0;
  std::size_t k = 0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const double t = ts[j];
    if (t <= 0.0) {
      out(j, cplx(0.0));
      continue;
    }
    while (k + 1 < K && static_cast<double>(k + 1) * dt <= t + eps) {
      s = full.advance(s, yr(k), yl(k + 1));
      ++k;
    }
    const double rem = t - static_cast<double>(k) * dt;
    if (rem <= eps) {
      out(j, s);
    } else if (k + 1 < K) {
      const double frac = rem / dt;
      const auto y = yr(k) + (yl(k + 1) - yr(k)) * frac;
      const ConvolutionStep part = partial_step(rem);
      out(j, part.advance(s, yr(k), y));
    } else {
      out(j, std::exp(lambda * rem) * s);
    }
  }
}

/// out(j, i) += sum_{n < limit[i]} Re(factor(n, x_i) * coeff[n * nt + j]).
template <class Factor>
void synthesize(const std::vector<cplx>& coeff, std::size_t nt, const std::vector<double>& xs,
                const std::vector<std::size_t>& limit, Factor factor, Matrix& out, int threads) {
  parallel_for(
      xs.size(),
      [&](std::size_t i) {
        std::vector<double> acc(nt, 0.0);
        const double x = xs[i];
        for (std::size_t n = 0; n < limit[i]; ++n) {
          const cplx f = factor(n, x);
          const double fr = f.real();
          const double fi = f.imag();
          if (fr == 0.0 && fi == 0.0) continue;
          const cplx* c = coeff.data() + n * nt;
          for (std::size_t j = 0; j < nt; ++j) acc[j] += fr * c[j].real() - fi * c[j].imag();
        }
        for (std::size_t j = 0; j < nt; ++j) out(j, i) += acc[j];
      },
      threads);
}

}  // namespace utm::detail
