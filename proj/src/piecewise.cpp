#include "utm/piecewise.hpp"

#include <algorithm>
#include <cmath>

#include "utm/error.hpp"
#include "utm/numerics.hpp"

namespace utm {

PiecewiseLinear::PiecewiseLinear(double origin, double step, std::vector<double> values)
    : origin_(origin), step_(step), left_(values), right_(std::move(values)) {
  finish();
}

PiecewiseLinear::PiecewiseLinear(double origin, double step, std::vector<double> left,
                                 std::vector<double> right)
    : origin_(origin), step_(step), left_(std::move(left)), right_(std::move(right)) {
  if (left_.size() != right_.size()) throw Error(ErrorCode::BadGrid, "left/right sample counts differ");
  finish();
}

void PiecewiseLinear::finish() {
  if (right_.size() < 2) throw Error(ErrorCode::BadGrid, "piecewise-linear data needs at least 2 knots");
  if (!(step_ > 0.0) || !std::isfinite(step_)) throw Error(ErrorCode::BadGrid, "knot spacing must be positive");
  left_.front() = right_.front();
  right_.back() = left_.back();
  for (std::size_t i = 0; i < right_.size(); ++i) {
    if (!std::isfinite(left_[i]) || !std::isfinite(right_[i]))
      throw Error(ErrorCode::BadGrid, "non-finite sample");
  }
  const std::size_t n = right_.size();
  first_ = n - 1;
  last_ = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (right_[i] != 0.0 || left_[i + 1] != 0.0) {
      first_ = std::min(first_, i);
      last_ = std::max(last_, i + 1);
    }
  }
  if (first_ > last_) first_ = last_ = 0;
}

PiecewiseLinear PiecewiseLinear::sample(const std::function<double(double)>& f, double origin, double extent,
                                        std::size_t count) {
  if (count < 2) throw Error(ErrorCode::BadGrid, "need at least 2 samples");
  const double h = extent / static_cast<double>(count - 1);
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = f(origin + h * static_cast<double>(i));
  return PiecewiseLinear(origin, h, std::move(v));
}

bool PiecewiseLinear::has_jumps() const {
  for (std::size_t i = 0; i < size(); ++i)
    if (left_[i] != right_[i]) return true;
  return false;
}

namespace {

// Locates t on the knot grid: returns knot index if t sits on a knot, else -1
// with panel index in `panel` and fraction in `frac`.
long locate(double origin, double step, std::size_t n, double t, std::size_t& panel, double& frac) {
  const double u = (t - origin) / step;
  const double r = std::round(u);
  if (std::abs(u - r) < 1e-9 && r >= 0.0 && r <= static_cast<double>(n - 1)) return static_cast<long>(r);
  const double fl = std::floor(u);
  panel = static_cast<std::size_t>(fl);
  frac = u - fl;
  return -1;
}

}  // namespace

double PiecewiseLinear::operator()(double t) const {
  if (empty()) return 0.0;
  const double tol = 1e-9 * step_;
  if (t < origin_ - tol || t > end() + tol) return 0.0;
  std::size_t panel = 0;
  double frac = 0.0;
  const long k = locate(origin_, step_, size(), t, panel, frac);
  if (k >= 0) return k == 0 ? right_[0] : left_[k];
  return right_[panel] + (left_[panel + 1] - right_[panel]) * frac;
}

double PiecewiseLinear::right_limit(double t) const {
  if (empty()) return 0.0;
  const double tol = 1e-9 * step_;
  if (t < origin_ - tol || t > end() + tol) return 0.0;
  std::size_t panel = 0;
  double frac = 0.0;
  const long k = locate(origin_, step_, size(), t, panel, frac);
  if (k >= 0) return right_[k];
  return right_[panel] + (left_[panel + 1] - right_[panel]) * frac;
}

double PiecewiseLinear::left_limit(double t) const {
  if (empty()) return 0.0;
  const double tol = 1e-9 * step_;
  if (t < origin_ - tol || t > end() + tol) return 0.0;
  std::size_t panel = 0;
  double frac = 0.0;
  const long k = locate(origin_, step_, size(), t, panel, frac);
  if (k >= 0) return left_[k];
  return right_[panel] + (left_[panel + 1] - right_[panel]) * frac;
}

cplx PiecewiseLinear::exp_integral(cplx c, double lo, double hi) const {
  if (empty() || first_ == last_) return 0.0;
  lo = std::max(lo, knot(first_));
  hi = std::min(hi, knot(last_));
  if (!(hi > lo)) return 0.0;
  const double h = step_;
  const std::size_t n = size();

  auto value_in_panel = [&](std::size_t i, double t) {
    const double f = (t - knot(i)) / h;
    return right_[i] + (left_[i + 1] - right_[i]) * f;
  };
  auto partial = [&](std::size_t i, double a, double b) -> cplx {
    const double len = b - a;
    if (len <= 0.0) return 0.0;
    const double ya = value_in_panel(i, a);
    const double yb = value_in_panel(i, b);
    const ExpMoments m = exp_moments(c * len);
    return len * std::exp(c * a) * (ya * (m.e1 - m.es) + yb * m.es);
  };

  // ia: first knot >= lo, ib: last knot <= hi.
  const double ua = (lo - origin_) / h;
  const double ub = (hi - origin_) / h;
  std::size_t ia = static_cast<std::size_t>(std::ceil(ua - 1e-9));
  std::size_t ib = static_cast<std::size_t>(std::floor(ub + 1e-9));
  ia = std::min(ia, n - 1);
  ib = std::min(ib, n - 1);
  if (ia > ib) {
    const std::size_t panel = std::min(static_cast<std::size_t>(std::floor(ua)), n - 2);
    return partial(panel, lo, hi);
  }
  cplx total = 0.0;
  if (ia > 0 && knot(ia) - lo > 1e-9 * h) total += partial(ia - 1, lo, knot(ia));
  if (ib > ia) {
    const ExpMoments m = exp_moments(c * h);
    const cplx wa = m.e1 - m.es;
    const cplx wb = m.es;
    const cplx q = std::exp(c * h);
    cplx e = std::exp(c * knot(ia));
    cplx acc = 0.0;
    for (std::size_t i = ia; i < ib; ++i) {
      acc += e * (right_[i] * wa + left_[i + 1] * wb);
      if (((i - ia + 1) & 255u) == 0) {
        e = std::exp(c * knot(i + 1));
      } else {
        e *= q;
      }
    }
    total += h * acc;
  }
  if (ib + 1 < n && hi - knot(ib) > 1e-9 * h) total += partial(ib, knot(ib), hi);
  return total;
}

double PiecewiseLinear::integral() const {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < size(); ++i) acc += right_[i] + left_[i + 1];
  return 0.5 * step_ * acc;
}

double PiecewiseLinear::max_abs() const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i) m = std::max({m, std::abs(left_[i]), std::abs(right_[i])});
  return m;
}

double PiecewiseLinear::jump_variation() const {
  if (empty()) return 0.0;
  double v = std::abs(right_.front()) + std::abs(left_.back());
  for (std::size_t i = 1; i + 1 < size(); ++i) v += std::abs(right_[i] - left_[i]);
  return v;
}

double PiecewiseLinear::slope_variation() const {
  if (size() < 2) return 0.0;
  double prev = 0.0;
  double v = 0.0;
  for (std::size_t i = 0; i + 1 < size(); ++i) {
    const double s = (left_[i + 1] - right_[i]) / step_;
    v += std::abs(s - prev);
    prev = s;
  }
  return v + std::abs(prev);
}

PiecewiseLinear PiecewiseLinear::decimated() const {
  const std::size_t panels = (size() - 1) / 2;
  if (panels < 1) throw Error(ErrorCode::InsufficientResolution, "cannot coarsen a single panel");
  std::vector<double> l(panels + 1), r(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) {
    l[i] = left_[2 * i];
    r[i] = right_[2 * i];
  }
  return PiecewiseLinear(origin_, 2.0 * step_, std::move(l), std::move(r));
}

PiecewiseLinear PiecewiseLinear::scaled(double a) const {
  std::vector<double> l(left_), r(right_);
  for (auto& v : l) v *= a;
  for (auto& v : r) v *= a;
  return PiecewiseLinear(origin_, step_, std::move(l), std::move(r));
}

PiecewiseLinear PiecewiseLinear::plus(const PiecewiseLinear& other) const {
  if (other.size() != size() || std::abs(other.step_ - step_) > 1e-12 * step_ ||
      std::abs(other.origin_ - origin_) > 1e-12 * step_)
    throw Error(ErrorCode::BadGrid, "grids differ");
  std::vector<double> l(left_), r(right_);
  for (std::size_t i = 0; i < size(); ++i) {
    l[i] += other.left_[i];
    r[i] += other.right_[i];
  }
  return PiecewiseLinear(origin_, step_, std::move(l), std::move(r));
}

PiecewiseLinear SampledField::row(std::size_t j) const {
  auto r = values.row(j);
  return PiecewiseLinear(x_origin, dx, std::vector<double>(r.begin(), r.end()));
}

PiecewiseLinear SampledField::column(std::size_t i) const {
  std::vector<double> c(nt());
  for (std::size_t j = 0; j < nt(); ++j) c[j] = values(j, i);
  return PiecewiseLinear(0.0, dt, std::move(c));
}

bool SampledField::is_zero() const {
  return std::all_of(values.data.begin(), values.data.end(), [](double v) { return v == 0.0; });
}

}  // namespace utm
