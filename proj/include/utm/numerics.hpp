#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace utm {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// e^{i pi/4} and e^{3 i pi/4}.
inline const cplx kA{0.70710678118654752440, 0.70710678118654752440};
inline const cplx kA3{-0.70710678118654752440, 0.70710678118654752440};

/// e^z - 1 without cancellation near z = 0.
cplx cexpm1(cplx z);

/// Weights of the exponential panel rule:
///   int_0^1 e^{z v} dv = e1,   int_0^1 v e^{z v} dv = es.
struct ExpMoments {
  cplx e1;
  cplx es;
};
ExpMoments exp_moments(cplx z);

/// One linear-data step of S' = lambda S + y(t): advances S over a panel of
/// length h with y linear from y_old to y_new.
struct ConvolutionStep {
  cplx decay;  // e^{lambda h}
  cplx w_old;  // h * int_0^1 v e^{z v} dv
  cplx w_new;  // h * int_0^1 (1 - v) e^{z v} dv

  static ConvolutionStep make(cplx lambda, double h);
  template <class Y>
  cplx advance(cplx s, Y y_old, Y y_new) const {
    return decay * s + w_old * y_old + w_new * y_new;
  }
};

/// Gauss-Legendre rule on [-1, 1], cached per order.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_legendre(int n);

/// Runs fn(i) for i in [0, n) on up to `threads` workers, static contiguous
/// chunks so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads);

/// Process-wide default worker count used when callers pass threads <= 0.
void set_default_threads(int n);
int default_threads();

}  // namespace utm
