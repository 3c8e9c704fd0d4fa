#include "stretchfd/monotone_cubic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stretchfd/error.hpp"

namespace stretchfd {

namespace {

void check_abscissae(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2 || x.size() != y.size()) {
    throw SpecError("MonotoneCubic: need at least two nodes and matching sizes");
  }
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (!(x[k] > x[k - 1])) {
      throw SpecError("MonotoneCubic: abscissae must be strictly increasing");
    }
  }
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  check_abscissae(x_, y_);
  const std::size_t n = x_.size();
  d_.assign(n, 0.0);
  if (n == 2) {
    d_[0] = d_[1] = (y_[1] - y_[0]) / (x_[1] - x_[0]);
    return;
  }
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x_[k + 1] - x_[k];
    delta[k] = (y_[k + 1] - y_[k]) / h[k];
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    d_[k] = (h[k] * delta[k - 1] + h[k - 1] * delta[k]) / (h[k - 1] + h[k]);
  }
  // One-sided three-point estimates at the ends.
  d_[0] = ((2.0 * h[0] + h[1]) * delta[0] - h[0] * delta[1]) / (h[0] + h[1]);
  d_[n - 1] = ((2.0 * h[n - 2] + h[n - 3]) * delta[n - 2] - h[n - 2] * delta[n - 3]) /
              (h[n - 2] + h[n - 3]);
  limit_slopes();
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y,
                             std::vector<double> slopes)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(slopes)) {
  check_abscissae(x_, y_);
  if (d_.size() != x_.size()) throw SpecError("MonotoneCubic: slope count mismatch");
  limit_slopes();
}

void MonotoneCubic::limit_slopes() {
  const std::size_t n = x_.size();
  std::vector<double> delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) delta[k] = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);

  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) d_[k] = 0.0;
  }
  if (d_[0] * delta[0] < 0.0) d_[0] = 0.0;
  if (d_[n - 1] * delta[n - 2] < 0.0) d_[n - 1] = 0.0;

  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (delta[k] == 0.0) {
      d_[k] = d_[k + 1] = 0.0;
      continue;
    }
    double a = d_[k] / delta[k];
    double b = d_[k + 1] / delta[k];
    if (a < 0.0) {
      d_[k] = 0.0;
      a = 0.0;
    }
    if (b < 0.0) {
      d_[k + 1] = 0.0;
      b = 0.0;
    }
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      d_[k] = tau * a * delta[k];
      d_[k + 1] = tau * b * delta[k];
    }
  }
}

std::size_t MonotoneCubic::interval(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  if (it == x_.begin()) return 0;
  const auto k = static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(k, x_.size() - 2);
}

double MonotoneCubic::value(double x) const {
  const std::size_t k = interval(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  if (t == 0.0) return y_[k];
  if (t == 1.0) return y_[k + 1];
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[k] + h10 * h * d_[k] + h01 * y_[k + 1] + h11 * h * d_[k + 1];
}

double MonotoneCubic::derivative(double x) const {
  const std::size_t k = interval(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t;
  const double dh00 = (6.0 * t2 - 6.0 * t) / h;
  const double dh10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double dh01 = (-6.0 * t2 + 6.0 * t) / h;
  const double dh11 = 3.0 * t2 - 2.0 * t;
  return dh00 * y_[k] + dh10 * d_[k] + dh01 * y_[k + 1] + dh11 * d_[k + 1];
}

double MonotoneCubic::inverse(double y) const {
  if (y <= y_.front()) return x_.front();
  if (y >= y_.back()) return x_.back();
  auto it = std::upper_bound(y_.begin(), y_.end(), y);
  const auto k = std::min(static_cast<std::size_t>(it - y_.begin()) - 1, y_.size() - 2);
  if (y == y_[k]) return x_[k];

  // Safeguarded Newton on the monotone cubic of interval k.
  double lo = x_[k];
  double hi = x_[k + 1];
  double x = lo + (hi - lo) * (y - y_[k]) / (y_[k + 1] - y_[k]);
  for (int iter = 0; iter < 100; ++iter) {
    const double f = value(x) - y;
    if (f == 0.0) return x;
    if (f > 0.0) hi = x; else lo = x;
    const double df = derivative(x);
    double next = df > 0.0 ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x) ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi)) {
      return next;
    }
    x = next;
  }
  return x;
}

}  // namespace stretchfd
