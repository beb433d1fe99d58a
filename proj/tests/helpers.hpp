#pragma once

#include <cmath>
#include <vector>

#include "utm/core.hpp"
#include "utm/piecewise.hpp"

namespace fixtures {

inline utm::SampledSignal constant_signal(double v, double T, std::size_t n = 101) {
  return utm::SampledSignal(utm::PiecewiseLinear(0.0, T / static_cast<double>(n - 1), std::vector<double>(n, v)));
}

inline utm::SampledProfile zero_profile(double L, std::size_t n = 101) {
  return utm::SampledProfile(utm::PiecewiseLinear(0.0, L / static_cast<double>(n - 1), std::vector<double>(n, 0.0)));
}

template <class F>
utm::PiecewiseLinear sampled(F f, double origin, double extent, std::size_t n) {
  return utm::PiecewiseLinear::sample(f, origin, extent, n);
}

}  // namespace fixtures
