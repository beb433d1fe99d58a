#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace utm {

using cplx = std::complex<double>;

/// Continuous piecewise-linear function on uniform knots origin + i*step, with
/// optional jumps at interior knots (separate left/right limits). Zero outside
/// [origin, end()].
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  PiecewiseLinear(double origin, double step, std::vector<double> values);
  PiecewiseLinear(double origin, double step, std::vector<double> left, std::vector<double> right);

  static PiecewiseLinear sample(const std::function<double(double)>& f, double origin, double extent,
                                std::size_t count);

  double origin() const { return origin_; }
  double step() const { return step_; }
  std::size_t size() const { return right_.size(); }
  bool empty() const { return right_.empty(); }
  double end() const { return origin_ + step_ * static_cast<double>(size() - 1); }
  double knot(std::size_t i) const { return origin_ + step_ * static_cast<double>(i); }
  double left(std::size_t i) const { return left_[i]; }
  double right(std::size_t i) const { return right_[i]; }
  const std::vector<double>& left_values() const { return left_; }
  const std::vector<double>& right_values() const { return right_; }
  bool has_jumps() const;

  /// Left-continuous at interior knots, right value at the first knot.
  double operator()(double t) const;

  double left_limit(double t) const;
  double right_limit(double t) const;

  /// Exact integral of e^{c t} f(t) over [lo, hi] for the interpolant.
  cplx exp_integral(cplx c, double lo, double hi) const;
  cplx exp_integral(cplx c) const { return exp_integral(c, origin_, end()); }

  double integral() const;
  double max_abs() const;

  /// Total size of value jumps, counting the drops to zero at both ends.
  double jump_variation() const;
  /// Total size of slope jumps, counting both ends.
  double slope_variation() const;

  /// Every other knot; jumps at dropped knots are kept only if the knot survives.
  PiecewiseLinear decimated() const;

  PiecewiseLinear scaled(double a) const;
  PiecewiseLinear plus(const PiecewiseLinear& other) const;

  /// First/last knot index where the function is not identically zero nearby.
  std::size_t support_first() const { return first_; }
  std::size_t support_last() const { return last_; }

 private:
  void finish();

  double origin_ = 0.0;
  double step_ = 1.0;
  std::vector<double> left_;
  std::vector<double> right_;
  std::size_t first_ = 0;
  std::size_t last_ = 0;
};

/// Spatial datum u0 on [0, L] or [0, l].
class SampledProfile : public PiecewiseLinear {
 public:
  SampledProfile() = default;
  explicit SampledProfile(PiecewiseLinear p) : PiecewiseLinear(std::move(p)) {}
};

/// Temporal datum g0 / h0 on [0, T] (or an extension supported in (0, 2)).
class SampledSignal : public PiecewiseLinear {
 public:
  SampledSignal() = default;
  explicit SampledSignal(PiecewiseLinear p) : PiecewiseLinear(std::move(p)) {}
};

/// Row-major matrix; rows are time levels, columns spatial points.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

/// Space-time samples f(x_i, t_j) on uniform grids starting at x_origin and 0.
struct SampledField {
  double x_origin = 0.0;
  double dx = 1.0;
  double dt = 1.0;
  Matrix values;

  std::size_t nx() const { return values.cols; }
  std::size_t nt() const { return values.rows; }
  double x(std::size_t i) const { return x_origin + dx * static_cast<double>(i); }
  double t(std::size_t j) const { return dt * static_cast<double>(j); }
  double t_end() const { return t(nt() - 1); }
  PiecewiseLinear row(std::size_t j) const;
  PiecewiseLinear column(std::size_t i) const;
  bool is_zero() const;
};

}  // namespace utm
